#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace momentsense {

// Source distributions of the transmitted samples. NoiseOnly is its own kind
// so H0 code paths never touch signal constants.
enum class SignalModel { NoiseOnly, Bpsk, Qpsk, Qam16, Qam64, ContinuousUniform };

const char* to_string(SignalModel model);
bool parse_signal_model(std::string_view text, SignalModel& out);

// Levels per real component (2 for BPSK/QPSK, 4 for 16-QAM, 8 for 64-QAM);
// 0 for the continuous kinds.
int levels_per_component(SignalModel model);

// Absolute moments of |y|: m_k = E|y|^k for k = 2,4,6,8.
struct MomentSet {
    double m2;
    double m4;
    double m6;
    double m8;
};

// k-th moment of a zero-mean discrete uniform variable on P levels spread
// over [-b, b]: M_k = (b^k / (P (P-1)^k)) * sum_i (P - 2i - 1)^k, 0 for odd k.
double discrete_uniform_moment(int levels, double b, int k);

// k-th moment of U[-b, b]: b^k/(k+1) for even k, 0 for odd k.
double continuous_uniform_moment(double b, int k);

// k-th moment of N(0, sigma^2): (k-1)!! sigma^k for even k, 0 for odd k.
double gaussian_moment(double sigma, int k);

// Fourth-moment coefficient c of the modulation: E|y|^4 = sigma^4 (c b^2 + 16 b + 8).
// 4 for BPSK/QPSK, 132/25 for 16-QAM, 116/21 for 64-QAM, 28/5 for the
// continuous uniform source. Rejects NoiseOnly (no signal row).
double fourth_moment_coefficient(SignalModel model);

// E|y|^2 = 2 sigma^2 (beta + 1) for every source.
double analytic_m2(SignalModel model, double beta, double sigma2);

// E|y|^4 = sigma^4 (c beta^2 + 16 beta + 8); NoiseOnly is the beta = 0 case.
double analytic_m4(SignalModel model, double beta, double sigma2);

// T = -E|y|^4 / (E|y|^2)^2; independent of sigma^2, equals -2 iff beta = 0.
double theoretical_ratio(SignalModel model, double beta);

// Asymptotic variance of sqrt(N) (T_hat - T) from the delta method:
// (4 m4^3 + m2^2 m8 - 4 m2 m4 m6 - m2^2 m4^2) / m2^6.
double delta_method_variance(const MomentSet& moments);

// Closed-form asymptotic variance per modulation, a degree-6 polynomial in
// beta over (beta+1)^6 with constant tail 24 beta + 4; NoiseOnly gives 4.
double closed_form_variance(SignalModel model, double beta);

// Mean shift of the test statistic under H1: mu = sqrt(N) (T + 2).
double mean_shift(SignalModel model, double beta, std::size_t n);

// Gaussian tail probability Q(x) = P(Z > x), via the complementary error
// function (relative error around machine precision).
double q_function(double x);

// Inverse of q_function on (0, 1); bracketed Newton, 1e-12 absolute tolerance.
double q_inverse(double p);

// Detection threshold for a target false-alarm probability: lambda = 2 Q^{-1}(pf).
// Needs neither sigma^2 nor N -- the robustness property of the statistic.
double threshold_for_pf(double pf);

// Asymptotic detection probability Q((lambda - mu) / sigma_tilde) with
// mu = sqrt(N)(T+2) and sigma_tilde^2 the closed-form variance. At beta = 0
// this degenerates to the false-alarm expression Q(lambda / 2).
double theoretical_pd(SignalModel model, double beta, std::size_t n, double lambda);

}  // namespace momentsense
