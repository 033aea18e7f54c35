#include "selfcheck.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "momentsense/config.hpp"
#include "momentsense/montecarlo.hpp"
#include "momentsense/stats_core.hpp"
#include "momentsense/waveform.hpp"

namespace momentsense::tools {
namespace {

// Even binomial coefficients C(2j, 2i) for j = 0..4.
constexpr double kEvenBinomial[5][5] = {
    {1, 0, 0, 0, 0},
    {1, 1, 0, 0, 0},
    {1, 6, 1, 0, 0},
    {1, 15, 15, 1, 0},
    {1, 28, 70, 28, 1},
};

// Even moments E[x^{2i}], i = 0..4, of one real component of the source,
// scaled so the full complex symbol carries power 2 sigma2 beta. BPSK puts
// everything in phase; the others split evenly between the components.
struct ComponentMoments {
    std::array<double, 5> in_phase;
    std::array<double, 5> quadrature;
};

std::array<double, 5> point_mass_at_zero() { return {1.0, 0.0, 0.0, 0.0, 0.0}; }

std::array<double, 5> source_moments(SignalModel model, double power) {
    std::array<double, 5> m{};
    m[0] = 1.0;
    const int levels = levels_per_component(model);
    if (levels > 0) {
        // Pick the level scale b that realizes the requested component power.
        const double b = std::sqrt(power / discrete_uniform_moment(levels, 1.0, 2));
        for (int i = 1; i <= 4; ++i) m[static_cast<std::size_t>(i)] = discrete_uniform_moment(levels, b, 2 * i);
    } else {
        const double b = std::sqrt(power / continuous_uniform_moment(1.0, 2));
        for (int i = 1; i <= 4; ++i) m[static_cast<std::size_t>(i)] = continuous_uniform_moment(b, 2 * i);
    }
    return m;
}

ComponentMoments signal_component_moments(SignalModel model, double beta, double sigma2) {
    const double total = 2.0 * sigma2 * beta;
    if (model == SignalModel::Bpsk)
        return {source_moments(model, total), point_mass_at_zero()};
    const std::array<double, 5> half = source_moments(model, total / 2.0);
    return {half, half};
}

// E[(s + w)^{2j}] for one real component, composed from the source moments
// and the Gaussian moments via the binomial theorem (odd cross terms vanish).
std::array<double, 5> observed_component_moments(const std::array<double, 5>& sm, double sigma) {
    std::array<double, 5> out{};
    out[0] = 1.0;
    for (int j = 1; j <= 4; ++j) {
        double acc = 0.0;
        for (int i = 0; i <= j; ++i) {
            const double noise = (i == j) ? 1.0 : gaussian_moment(sigma, 2 * (j - i));
            acc += kEvenBinomial[j][i] * sm[static_cast<std::size_t>(i)] * noise;
        }
        out[static_cast<std::size_t>(j)] = acc;
    }
    return out;
}

// E|y|^{2k} for k = 1..4 from the two independent component moment sets.
MomentSet absolute_moments(const std::array<double, 5>& i_mom, const std::array<double, 5>& q_mom) {
    auto combine = [&](int k) {
        double acc = 0.0;
        double binom = 1.0;
        for (int i = 0; i <= k; ++i) {
            acc += binom * i_mom[static_cast<std::size_t>(i)] * q_mom[static_cast<std::size_t>(k - i)];
            binom = binom * (k - i) / (i + 1);
        }
        return acc;
    };
    return {combine(1), combine(2), combine(3), combine(4)};
}

// The delta-method expression fed with analytically composed moments (a code
// path fully disjoint from the closed forms it must reproduce).
double composed_variance(SignalModel model, double beta, double sigma2) {
    const ComponentMoments sm = signal_component_moments(model, beta, sigma2);
    const double sigma = std::sqrt(sigma2);
    return delta_method_variance(absolute_moments(observed_component_moments(sm.in_phase, sigma),
                                                  observed_component_moments(sm.quadrature, sigma)));
}

struct Battery {
    int failures = 0;

    void check(const std::string& name, bool ok, const std::string& detail) {
        std::printf("[%s] %-38s %s\n", ok ? " ok " : "FAIL", name.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
};

std::string fmt(const char* pattern, double a, double b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

void check_variance_consistency(Battery& battery) {
    const SignalModel models[] = {SignalModel::Qpsk, SignalModel::Qam16, SignalModel::Qam64,
                                  SignalModel::ContinuousUniform};
    const double betas[] = {0.1, 0.5, 1.0, 2.0};
    const double sigma2s[] = {1.0, 2.3};
    double worst = 0.0;
    for (const SignalModel model : models)
        for (const double beta : betas)
            for (const double sigma2 : sigma2s) {
                const double closed = closed_form_variance(model, beta);
                const double composed = composed_variance(model, beta, sigma2);
                worst = std::max(worst, std::abs(composed - closed) / closed);
            }
    battery.check("delta method vs closed forms", worst <= 1e-9,
                  fmt("worst relative gap %.3g (bound %.3g)", worst, 1e-9));

    const ComponentMoments noise_only{point_mass_at_zero(), point_mass_at_zero()};
    const double h0 = delta_method_variance(absolute_moments(
        observed_component_moments(noise_only.in_phase, 1.0),
        observed_component_moments(noise_only.quadrature, 1.0)));
    battery.check("noise-only variance equals 4", std::abs(h0 - 4.0) <= 1e-12,
                  fmt("got %.15g (want %.15g)", h0, 4.0));
}

void check_q_roundtrip(Battery& battery) {
    const double probs[] = {1e-6, 1e-3, 0.01, 0.05, 0.1, 0.3, 0.5, 0.9, 0.999};
    double worst = 0.0;
    for (const double p : probs) {
        const double back = q_function(q_inverse(p));
        worst = std::max(worst, std::abs(back - p) / p);
    }
    battery.check("Q / Q^{-1} round trip", worst <= 1e-9,
                  fmt("worst relative gap %.3g (bound %.3g)", worst, 1e-9));

    const double lambda = threshold_for_pf(0.1);
    battery.check("threshold at pf = 0.1", std::abs(lambda - 2.563103131089201) <= 1e-9,
                  fmt("lambda %.12g (reference %.12g)", lambda, 2.563103131089201));
}

void check_pulse_structure(Battery& battery) {
    const PulseShape pulse = PulseShape::make(0.2, 4);
    const int len = pulse.length();

    double asym = 0.0;
    for (int i = 0; i < len; ++i)
        asym = std::max(asym, std::abs(pulse.taps[static_cast<std::size_t>(i)] -
                                       pulse.taps[static_cast<std::size_t>(len - 1 - i)]));
    battery.check("pulse symmetry", asym <= 1e-15, fmt("max tap gap %.3g (bound %.3g)", asym, 1e-15));

    double energy = 0.0;
    for (const double tap : pulse.taps) energy += tap * tap;
    battery.check("pulse unit energy", std::abs(energy - 1.0) <= 1e-12,
                  fmt("energy %.15g (want %.15g)", energy, 1.0));

    const std::vector<double> g = pulse_self_convolution(pulse);
    const int center = len - 1;
    const double main = g[static_cast<std::size_t>(center)];
    double isi = 0.0;
    for (int k = center % pulse.oversampling; k < static_cast<int>(g.size());
         k += pulse.oversampling)
        if (k != center) isi += g[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(k)];
    const double ratio = isi / (main * main);
    battery.check("symbol-rate ISI power", ratio <= 2e-2,
                  fmt("residual ratio %.4g (bound %.4g)", ratio, 2e-2));

    const double loopback = 1.0 / std::sqrt(1.0 + ratio);
    battery.check("implied loopback correlation", loopback >= 0.99,
                  fmt("correlation %.5g (floor %.5g)", loopback, 0.99));
}

void check_h0_statistic(Battery& battery) {
    TrialConfig config;
    config.hypothesis = Hypothesis::H0;
    config.model = SignalModel::NoiseOnly;
    config.n = std::size_t{1} << 14;
    config.trials = 6000;
    config.seed = 0x5e1fc0de;

    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t t = 0; t < config.trials; ++t) {
        const double ts = run_trial(config, t).moment;
        sum += ts;
        sum_sq += ts * ts;
    }
    const double count = static_cast<double>(config.trials);
    const double mean = sum / count;
    const double variance = (sum_sq - count * mean * mean) / (count - 1.0);
    battery.check("H0 statistic mean near 0", std::abs(mean) <= 0.2,
                  fmt("mean %.4g (bound %.4g)", mean, 0.2));
    battery.check("H0 statistic variance near 4", variance >= 3.6 && variance <= 4.4,
                  fmt("variance %.4g (window 3.6..%.2g)", variance, 4.4));
}

}  // namespace

bool run_selfcheck() {
    Battery battery;
    check_variance_consistency(battery);
    check_q_roundtrip(battery);
    check_pulse_structure(battery);
    check_h0_statistic(battery);
    if (battery.failures == 0)
        std::printf("selftest: all checks passed\n");
    else
        std::printf("selftest: %d check(s) FAILED\n", battery.failures);
    return battery.failures == 0;
}

}  // namespace momentsense::tools
