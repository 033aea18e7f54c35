#include "momentsense/waveform.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace momentsense {

std::vector<double> srrc_taps(double rolloff, int oversampling, int length) {
    if (!(rolloff > 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("srrc_taps: rolloff must lie in (0, 1]");
    if (oversampling < 1) throw std::invalid_argument("srrc_taps: oversampling must be positive");
    if (length < 1 || length % 2 == 0)
        throw std::invalid_argument("srrc_taps: length must be odd (a center tap is required)");

    std::vector<double> taps(static_cast<std::size_t>(length));
    const int center = (length - 1) / 2;
    const double a = rolloff;
    for (int i = 0; i < length; ++i) {
        const double t = static_cast<double>(i - center) / oversampling;  // symbol times
        double value;
        if (std::abs(t) < 1e-12) {
            value = 1.0 - a + 4.0 * a / M_PI;
        } else if (std::abs(std::abs(4.0 * a * t) - 1.0) < 1e-9) {
            const double arg = M_PI / (4.0 * a);
            value = (a / std::sqrt(2.0)) *
                    ((1.0 + 2.0 / M_PI) * std::sin(arg) + (1.0 - 2.0 / M_PI) * std::cos(arg));
        } else {
            const double four_at = 4.0 * a * t;
            value = (std::sin(M_PI * t * (1.0 - a)) + four_at * std::cos(M_PI * t * (1.0 + a))) /
                    (M_PI * t * (1.0 - four_at * four_at));
        }
        taps[static_cast<std::size_t>(i)] = value;
    }
    const double energy = std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
    const double scale = 1.0 / std::sqrt(energy);
    for (double& tap : taps) tap *= scale;
    return taps;
}

PulseShape PulseShape::make(double rolloff, int oversampling) {
    PulseShape pulse;
    pulse.rolloff = rolloff;
    pulse.oversampling = oversampling;
    pulse.taps = srrc_taps(rolloff, oversampling, 4 * oversampling + 1);
    return pulse;
}

std::vector<double> pulse_self_convolution(const PulseShape& pulse) {
    const auto& h = pulse.taps;
    const std::size_t n = h.size();
    std::vector<double> g(2 * n - 1, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g[i + j] += h[i] * h[j];
    return g;
}

double sampled_pulse_power(const PulseShape& pulse, int offset) {
    const int s = pulse.oversampling;
    if (offset < 0 || offset >= s)
        throw std::invalid_argument("sampled_pulse_power: offset must lie in [0, S)");
    const std::vector<double> g = pulse_self_convolution(pulse);
    const int phase = (pulse.length() - 1 + offset) % s;
    double power = 0.0;
    for (std::size_t k = static_cast<std::size_t>(phase); k < g.size(); k += static_cast<std::size_t>(s))
        power += g[k] * g[k];
    return power;
}

SampleVec generate_symbols(SignalModel model, std::size_t count, RngStream& rng) {
    if (model == SignalModel::NoiseOnly)
        throw std::invalid_argument("generate_symbols: NoiseOnly emits no symbols");
    if (count == 0) throw std::invalid_argument("generate_symbols: count must be positive");

    SampleVec out(count);
    switch (model) {
        case SignalModel::Bpsk:
            for (auto& s : out) s = {rng.next_below(2) ? 1.0 : -1.0, 0.0};
            break;
        case SignalModel::Qpsk:
        case SignalModel::Qam16:
        case SignalModel::Qam64: {
            const int p = levels_per_component(model);
            // Levels -(P-1), -(P-3), ..., (P-1) scaled for unit total power:
            // per-component variance is (P^2-1)/3 before scaling, and the two
            // components each carry half the symbol power.
            const double scale = 1.0 / std::sqrt(2.0 * (p * p - 1.0) / 3.0);
            for (auto& s : out) {
                const double re = static_cast<double>(2 * static_cast<int>(rng.next_below(p)) - p + 1);
                const double im = static_cast<double>(2 * static_cast<int>(rng.next_below(p)) - p + 1);
                s = {re * scale, im * scale};
            }
            break;
        }
        case SignalModel::ContinuousUniform: {
            const double b = std::sqrt(1.5);  // per-component U[-b, b], unit total power
            for (auto& s : out) {
                const double re = b * (2.0 * rng.next_double() - 1.0);
                const double im = b * (2.0 * rng.next_double() - 1.0);
                s = {re, im};
            }
            break;
        }
        case SignalModel::NoiseOnly:
            break;  // unreachable
    }
    return out;
}

SampleVec generate_noise(std::size_t count, double sigma2, RngStream& rng) {
    if (count == 0) throw std::invalid_argument("generate_noise: count must be positive");
    if (sigma2 <= 0.0) throw std::invalid_argument("generate_noise: sigma2 must be positive");
    SampleVec out(count);
    const double s = std::sqrt(sigma2);
    for (auto& w : out) w = {s * rng.next_normal(), s * rng.next_normal()};
    return out;
}

SampleVec shape_and_upsample(const SampleVec& symbols, const PulseShape& pulse) {
    if (symbols.empty()) throw std::invalid_argument("shape_and_upsample: no symbols");
    const int s = pulse.oversampling;
    const int l = pulse.length();
    SampleVec out(symbols.size() * static_cast<std::size_t>(s) + static_cast<std::size_t>(l - 1),
                  ComplexSample{0.0, 0.0});
    // Unit post-matched-filter symbol-rate power at the ideal sampling phase.
    const double scale = 1.0 / std::sqrt(sampled_pulse_power(pulse, 0));
    for (std::size_t m = 0; m < symbols.size(); ++m) {
        const ComplexSample sym = symbols[m] * scale;
        const std::size_t base = m * static_cast<std::size_t>(s);
        for (int j = 0; j < l; ++j)
            out[base + static_cast<std::size_t>(j)] += sym * pulse.taps[static_cast<std::size_t>(j)];
    }
    return out;
}

SampleVec matched_filter_and_sample(const SampleVec& samples, const PulseShape& pulse, int offset) {
    const int s = pulse.oversampling;
    const int l = pulse.length();
    if (offset < 0 || offset >= s)
        throw std::invalid_argument("matched_filter_and_sample: offset must lie in [0, S)");
    if (samples.size() < static_cast<std::size_t>(l))
        throw std::invalid_argument("matched_filter_and_sample: input shorter than the filter");

    // Full-overlap outputs only (the transient head/tail of length L-1 never
    // appears): k = (L-1) + offset + m S for m = 0, 1, ... while k stays in
    // the full-overlap region.
    SampleVec out;
    out.reserve((samples.size() - static_cast<std::size_t>(l) + 1) / static_cast<std::size_t>(s) + 1);
    for (std::size_t k = static_cast<std::size_t>(l - 1 + offset); k < samples.size();
         k += static_cast<std::size_t>(s)) {
        ComplexSample acc{0.0, 0.0};
        for (int j = 0; j < l; ++j)
            acc += samples[k - static_cast<std::size_t>(j)] * pulse.taps[static_cast<std::size_t>(j)];
        out.push_back(acc);
    }
    return out;
}

double draw_actual_variance(double nominal_sigma2, const UncertaintyModel& model, RngStream& rng) {
    if (nominal_sigma2 <= 0.0)
        throw std::invalid_argument("draw_actual_variance: nominal variance must be positive");
    if (model.delta_db < 0.0)
        throw std::invalid_argument("draw_actual_variance: delta_db must be nonnegative");
    if (model.delta_db == 0.0) return nominal_sigma2;
    const double eps = model.epsilon();
    const double lo = nominal_sigma2 / eps;
    const double hi = nominal_sigma2 * eps;
    return lo + (hi - lo) * rng.next_double();
}

ComplexSample rayleigh_gain(RngStream& rng) {
    return rng.next_cnormal(0.5);  // E|h|^2 = 1
}

namespace {

// Symbols discarded at each end of a pulse-shaped observation so the kept
// samples all see the full two-sided ISI neighborhood (TX + RX spans).
int transient_symbols(const PulseShape& pulse) {
    const int span = 2 * (pulse.length() - 1);
    return (span + pulse.oversampling - 1) / pulse.oversampling;
}

}  // namespace

SampleVec synthesize_observation(const TrialConfig& config, RngStream& rng) {
    if (config.n < 1) throw std::invalid_argument("synthesize_observation: n must be positive");
    const bool h1 = config.hypothesis == Hypothesis::H1;
    if (h1 && config.model == SignalModel::NoiseOnly)
        throw std::invalid_argument("synthesize_observation: H1 requires a signal model");
    if (config.sync == SyncMode::Asynchronous && !config.pulse_shaping)
        throw std::invalid_argument("synthesize_observation: asynchronous mode requires pulse shaping");

    const double sigma2 =
        draw_actual_variance(config.sigma2_true, config.uncertainty, rng);

    if (!config.pulse_shaping) {
        if (!h1) return generate_noise(config.n, sigma2, rng);
        const ComplexSample gain =
            config.channel == ChannelKind::RayleighBlock ? rayleigh_gain(rng) : ComplexSample{1.0, 0.0};
        const double amp = std::sqrt(2.0 * config.sigma2_true * config.beta());
        SampleVec symbols = generate_symbols(config.model, config.n, rng);
        const SampleVec noise = generate_noise(config.n, sigma2, rng);
        for (std::size_t i = 0; i < config.n; ++i) symbols[i] = amp * gain * symbols[i] + noise[i];
        return symbols;
    }

    const PulseShape pulse = PulseShape::make(config.pulse_rolloff, config.pulse_oversampling);
    const int discard = transient_symbols(pulse);
    const std::size_t total_symbols = config.n + 2 * static_cast<std::size_t>(discard);
    const std::size_t sample_count =
        total_symbols * static_cast<std::size_t>(pulse.oversampling) +
        static_cast<std::size_t>(pulse.length() - 1);

    ComplexSample gain{1.0, 0.0};
    if (h1 && config.channel == ChannelKind::RayleighBlock) gain = rayleigh_gain(rng);
    const int offset = config.sync == SyncMode::Asynchronous
                           ? static_cast<int>(rng.next_below(static_cast<std::uint64_t>(pulse.oversampling)))
                           : 0;

    SampleVec received;
    if (h1) {
        const SampleVec symbols = generate_symbols(config.model, total_symbols, rng);
        received = shape_and_upsample(symbols, pulse);
        // Enforce the receiver SNR at the detector input for this sampling
        // phase: the shaped signal has unit symbol-rate power at the ideal
        // phase, i.e. p_off/p_0 at phase `offset`.
        const double power_ratio =
            sampled_pulse_power(pulse, offset) / sampled_pulse_power(pulse, 0);
        const ComplexSample amp =
            gain * std::sqrt(2.0 * config.sigma2_true * config.beta() / power_ratio);
        const SampleVec noise = generate_noise(sample_count, sigma2, rng);
        for (std::size_t i = 0; i < sample_count; ++i) received[i] = amp * received[i] + noise[i];
    } else {
        received = generate_noise(sample_count, sigma2, rng);
    }

    SampleVec sampled = matched_filter_and_sample(received, pulse, offset);
    return SampleVec(sampled.begin() + discard, sampled.begin() + discard + static_cast<long>(config.n));
}

}  // namespace momentsense
