#include "momentsense/detectors.hpp"

#include <cmath>
#include <stdexcept>

#include "momentsense/stats_core.hpp"

namespace momentsense {

const char* to_string(DetectorKind kind) {
    return kind == DetectorKind::Moment ? "moment" : "energy";
}

std::vector<std::complex<double>> remove_mean(std::span<const std::complex<double>> samples) {
    if (samples.empty()) throw std::invalid_argument("remove_mean: empty input");
    std::complex<double> mean{0.0, 0.0};
    for (const auto& y : samples) mean += y;
    mean /= static_cast<double>(samples.size());
    std::vector<std::complex<double>> out(samples.begin(), samples.end());
    for (auto& y : out) y -= mean;
    return out;
}

double sample_absolute_moment(std::span<const std::complex<double>> samples, int k) {
    if (samples.empty()) throw std::invalid_argument("sample_absolute_moment: empty input");
    if (k != 2 && k != 4) throw std::invalid_argument("sample_absolute_moment: k must be 2 or 4");
    double sum = 0.0;
    if (k == 2) {
        for (const auto& y : samples) sum += std::norm(y);
    } else {
        for (const auto& y : samples) {
            const double a2 = std::norm(y);
            sum += a2 * a2;
        }
    }
    return sum / static_cast<double>(samples.size());
}

double moment_statistic(std::span<const std::complex<double>> samples) {
    const std::size_t n = samples.size();
    if (n < 2) throw std::invalid_argument("moment_statistic: need at least 2 samples");
    double s2 = 0.0, s4 = 0.0;
    for (const auto& y : samples) {
        const double a2 = std::norm(y);
        s2 += a2;
        s4 += a2 * a2;
    }
    const double m2 = s2 / static_cast<double>(n);
    if (m2 <= 0.0) throw std::domain_error("moment_statistic: degenerate all-zero input");
    const double m4 = s4 / static_cast<double>(n);
    const double t_hat = -m4 / (m2 * m2);
    return std::sqrt(static_cast<double>(n)) * (t_hat + 2.0);
}

double moment_threshold(double pf) { return threshold_for_pf(pf); }

double energy_statistic(std::span<const std::complex<double>> samples) {
    if (samples.empty()) throw std::invalid_argument("energy_statistic: empty input");
    double sum = 0.0;
    for (const auto& y : samples) sum += std::norm(y);
    return sum / static_cast<double>(samples.size());
}

double energy_threshold(double pf, double assumed_sigma2, std::size_t n) {
    if (!(pf > 0.0 && pf < 1.0)) throw std::invalid_argument("energy_threshold: pf must lie in (0, 1)");
    if (assumed_sigma2 <= 0.0)
        throw std::invalid_argument("energy_threshold: assumed variance must be positive");
    if (n < 1) throw std::invalid_argument("energy_threshold: n must be at least 1");
    return 2.0 * assumed_sigma2 * (1.0 + q_inverse(pf) / std::sqrt(static_cast<double>(n)));
}

bool decide(double statistic, double threshold) { return statistic >= threshold; }

DetectorOutcome run_moment_detector(std::span<const std::complex<double>> samples, double threshold) {
    const double ts = moment_statistic(samples);
    return {ts, threshold, decide(ts, threshold), DetectorKind::Moment};
}

DetectorOutcome run_energy_detector(std::span<const std::complex<double>> samples, double threshold) {
    const double e = energy_statistic(samples);
    return {e, threshold, decide(e, threshold), DetectorKind::Energy};
}

}  // namespace momentsense
