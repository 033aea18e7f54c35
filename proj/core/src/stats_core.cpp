#include "momentsense/stats_core.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace momentsense {

const char* to_string(SignalModel model) {
    switch (model) {
        case SignalModel::NoiseOnly: return "noise";
        case SignalModel::Bpsk: return "bpsk";
        case SignalModel::Qpsk: return "qpsk";
        case SignalModel::Qam16: return "qam16";
        case SignalModel::Qam64: return "qam64";
        case SignalModel::ContinuousUniform: return "cu";
    }
    return "?";
}

bool parse_signal_model(std::string_view text, SignalModel& out) {
    if (text == "noise" || text == "noise_only") out = SignalModel::NoiseOnly;
    else if (text == "bpsk") out = SignalModel::Bpsk;
    else if (text == "qpsk") out = SignalModel::Qpsk;
    else if (text == "qam16") out = SignalModel::Qam16;
    else if (text == "qam64") out = SignalModel::Qam64;
    else if (text == "cu" || text == "uniform") out = SignalModel::ContinuousUniform;
    else return false;
    return true;
}

int levels_per_component(SignalModel model) {
    switch (model) {
        case SignalModel::Bpsk:
        case SignalModel::Qpsk: return 2;
        case SignalModel::Qam16: return 4;
        case SignalModel::Qam64: return 8;
        default: return 0;
    }
}

double discrete_uniform_moment(int levels, double b, int k) {
    if (levels < 2) throw std::invalid_argument("discrete_uniform_moment: need at least 2 levels");
    if (b <= 0.0) throw std::invalid_argument("discrete_uniform_moment: b must be positive");
    if (k <= 0) throw std::invalid_argument("discrete_uniform_moment: k must be positive");
    if (k % 2 != 0) return 0.0;  // level set is symmetric about zero
    double sum = 0.0;
    for (int i = 0; i < levels; ++i) {
        const double level = static_cast<double>(levels - 2 * i - 1);
        sum += std::pow(level, k);
    }
    return std::pow(b, k) * sum / (levels * std::pow(static_cast<double>(levels - 1), k));
}

double continuous_uniform_moment(double b, int k) {
    if (b <= 0.0) throw std::invalid_argument("continuous_uniform_moment: b must be positive");
    if (k <= 0) throw std::invalid_argument("continuous_uniform_moment: k must be positive");
    if (k % 2 != 0) return 0.0;
    return std::pow(b, k) / (k + 1);
}

double gaussian_moment(double sigma, int k) {
    if (sigma <= 0.0) throw std::invalid_argument("gaussian_moment: sigma must be positive");
    if (k <= 0) throw std::invalid_argument("gaussian_moment: k must be positive");
    if (k % 2 != 0) return 0.0;
    double dfact = 1.0;
    for (int i = k - 1; i > 1; i -= 2) dfact *= i;
    return dfact * std::pow(sigma, k);
}

double fourth_moment_coefficient(SignalModel model) {
    switch (model) {
        case SignalModel::Bpsk:
        case SignalModel::Qpsk: return 4.0;
        case SignalModel::Qam16: return 132.0 / 25.0;
        case SignalModel::Qam64: return 116.0 / 21.0;
        case SignalModel::ContinuousUniform: return 28.0 / 5.0;
        case SignalModel::NoiseOnly: break;
    }
    throw std::invalid_argument("fourth_moment_coefficient: NoiseOnly has no signal row");
}

double analytic_m2(SignalModel, double beta, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("analytic_m2: sigma2 must be positive");
    if (beta < 0.0) throw std::invalid_argument("analytic_m2: beta must be nonnegative");
    return 2.0 * sigma2 * (beta + 1.0);
}

double analytic_m4(SignalModel model, double beta, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("analytic_m4: sigma2 must be positive");
    if (beta < 0.0) throw std::invalid_argument("analytic_m4: beta must be nonnegative");
    if (model == SignalModel::NoiseOnly) return 8.0 * sigma2 * sigma2;
    const double c = fourth_moment_coefficient(model);
    return sigma2 * sigma2 * (c * beta * beta + 16.0 * beta + 8.0);
}

double theoretical_ratio(SignalModel model, double beta) {
    if (model == SignalModel::NoiseOnly || beta == 0.0) return -2.0;
    if (beta < 0.0) throw std::invalid_argument("theoretical_ratio: beta must be nonnegative");
    const double c = fourth_moment_coefficient(model);
    const double denom = 2.0 * (beta + 1.0);
    return -(c * beta * beta + 16.0 * beta + 8.0) / (denom * denom);
}

double delta_method_variance(const MomentSet& m) {
    if (m.m2 <= 0.0) throw std::invalid_argument("delta_method_variance: m2 must be positive");
    const double m2 = m.m2, m4 = m.m4, m6 = m.m6, m8 = m.m8;
    const double num = 4.0 * m4 * m4 * m4 + m2 * m2 * m8 - 4.0 * m2 * m4 * m6 - m2 * m2 * m4 * m4;
    const double d2 = m2 * m2;
    return num / (d2 * d2 * d2);
}

double closed_form_variance(SignalModel model, double beta) {
    if (model == SignalModel::NoiseOnly || beta == 0.0) return 4.0;
    if (beta < 0.0) throw std::invalid_argument("closed_form_variance: beta must be nonnegative");
    const double b = beta;
    // Numerators are exact rationals, evaluated in double at call time; the
    // trailing 24 b + 4 is the kappa term shared by every row.
    double poly = 0.0;
    switch (model) {
        case SignalModel::Bpsk:
        case SignalModel::Qpsk:
            poly = ((8.0 * b + 32.0) * b + 40.0) * b * b;
            break;
        case SignalModel::Qam16:
            poly = ((((3648.0 / 15625.0) * b + 1728.0 / 625.0) * b + 10696.0 / 625.0) * b +
                    1056.0 / 25.0) * b + 232.0 / 5.0;
            poly *= b * b;
            break;
        case SignalModel::Qam64:
            poly = ((((19136.0 / 64827.0) * b + 236864.0 / 64827.0) * b + 181928.0 / 9261.0) * b +
                    138464.0 / 3087.0) * b + 1000.0 / 21.0;
            poly *= b * b;
            break;
        case SignalModel::ContinuousUniform:
            poly = ((((284.0 / 875.0) * b + 696.0 / 175.0) * b + 3588.0 / 175.0) * b +
                    320.0 / 7.0) * b + 48.0;
            poly *= b * b;
            break;
        case SignalModel::NoiseOnly:
            break;  // handled above
    }
    const double num = poly + 24.0 * b + 4.0;
    const double onep = 1.0 + b;
    const double d3 = onep * onep * onep;
    return num / (d3 * d3);
}

double mean_shift(SignalModel model, double beta, std::size_t n) {
    if (n < 1) throw std::invalid_argument("mean_shift: n must be at least 1");
    return std::sqrt(static_cast<double>(n)) * (theoretical_ratio(model, beta) + 2.0);
}

double q_function(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

namespace {
double standard_normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
}
}  // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("q_inverse: p must lie in (0, 1)");
    if (p == 0.5) return 0.0;
    // Bracket, then bisect until the interval is small enough for Newton to
    // converge monotonically (Q is decreasing, so lo maps to the upper value).
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 40; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (q_function(mid) > p) lo = mid; else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int i = 0; i < 60; ++i) {
        const double f = q_function(x) - p;
        const double d = -standard_normal_pdf(x);
        if (d == 0.0) break;
        double step = f / d;
        double next = x - step;
        if (next < lo || next > hi) next = 0.5 * (lo + hi);  // keep the bracket
        if (q_function(next) > p) lo = next; else hi = next;
        if (std::abs(next - x) < 1e-12 * (1.0 + std::abs(next))) { x = next; break; }
        x = next;
    }
    return x;
}

double threshold_for_pf(double pf) {
    if (!(pf > 0.0 && pf < 1.0)) throw std::invalid_argument("threshold_for_pf: pf must lie in (0, 1)");
    return 2.0 * q_inverse(pf);
}

double theoretical_pd(SignalModel model, double beta, std::size_t n, double lambda) {
    if (n < 1) throw std::invalid_argument("theoretical_pd: n must be at least 1");
    if (beta < 0.0) throw std::invalid_argument("theoretical_pd: beta must be nonnegative");
    const double mu = mean_shift(model, beta, n);
    const double sigma_tilde = std::sqrt(closed_form_variance(model, beta));
    return q_function((lambda - mu) / sigma_tilde);
}

}  // namespace momentsense
