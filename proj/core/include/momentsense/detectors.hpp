#pragma once

#include <complex>
#include <span>
#include <vector>

namespace momentsense {

enum class DetectorKind { Moment, Energy };

const char* to_string(DetectorKind kind);

// One detector evaluation: decide_h1 <=> statistic >= threshold (the boundary
// counts as H1).
struct DetectorOutcome {
    double statistic;
    double threshold;
    bool decide_h1;
    DetectorKind detector;
};

// Subtracts the complex sample mean (optional preprocessing; the signal model
// is zero-mean, so this is off by default everywhere).
std::vector<std::complex<double>> remove_mean(std::span<const std::complex<double>> samples);

// (1/N) sum |y|^k for k in {2, 4}.
double sample_absolute_moment(std::span<const std::complex<double>> samples, int k);

// Ts = sqrt(N) (T_hat + 2) with T_hat = -m4_hat / m2_hat^2. Scale invariant:
// multiplying the samples by any nonzero complex constant leaves it unchanged
// (up to floating-point rounding). Rejects all-zero input (undefined ratio)
// and N < 2.
double moment_statistic(std::span<const std::complex<double>> samples);

// lambda = 2 Q^{-1}(pf); requires no noise-variance input.
double moment_threshold(double pf);

// (1/N) sum |y|^2. Not scale invariant -- the baseline's vulnerability.
double energy_statistic(std::span<const std::complex<double>> samples);

// lambda_E = 2 sigma2_hat (1 + Q^{-1}(pf)/sqrt(n)), the Gaussian
// approximation built from the H0 mean 2 sigma^2 and standard deviation
// 2 sigma^2 / sqrt(n) of the energy statistic. The caller supplies the
// assumed variance; mismatch between it and the actual one is exactly the
// sensitivity the comparison experiments probe.
double energy_threshold(double pf, double assumed_sigma2, std::size_t n);

// H1 iff statistic >= threshold.
bool decide(double statistic, double threshold);

DetectorOutcome run_moment_detector(std::span<const std::complex<double>> samples, double threshold);
DetectorOutcome run_energy_detector(std::span<const std::complex<double>> samples, double threshold);

}  // namespace momentsense
