#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "momentsense/detectors.hpp"
#include "momentsense/stats_core.hpp"

using namespace momentsense;

TEST_CASE("sample absolute moments on a hand-computed vector") {
    const std::vector<std::complex<double>> y = {{3.0, 4.0}, {0.0, 1.0}, {-2.0, 0.0}};
    // |y|^2 = 25, 1, 4 -> m2 = 10; |y|^4 = 625, 1, 16 -> m4 = 214.
    CHECK(sample_absolute_moment(y, 2) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(sample_absolute_moment(y, 4) == doctest::Approx(214.0).epsilon(1e-15));
    CHECK(energy_statistic(y) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_THROWS_AS(sample_absolute_moment(y, 3), std::invalid_argument);
    CHECK_THROWS_AS(sample_absolute_moment(std::vector<std::complex<double>>{}, 2),
                    std::invalid_argument);
}

TEST_CASE("moment statistic on a hand-computed vector") {
    const std::vector<std::complex<double>> y = {{3.0, 4.0}, {0.0, 1.0}, {-2.0, 0.0}};
    // T_hat = -214/100, Ts = sqrt(3) (2 - 2.14).
    const double expected = std::sqrt(3.0) * (-214.0 / 100.0 + 2.0);
    CHECK(moment_statistic(y) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("moment statistic is scale invariant") {
    std::vector<std::complex<double>> y;
    for (int i = 0; i < 257; ++i)
        y.push_back({std::sin(0.37 * i) + 0.2, std::cos(1.91 * i) - 0.1});
    const double base = moment_statistic(y);
    for (const std::complex<double> scale : {std::complex<double>{13.0, 0.0},
                                             std::complex<double>{0.0, -0.03},
                                             std::complex<double>{2.0, 3.0}}) {
        std::vector<std::complex<double>> scaled = y;
        for (auto& v : scaled) v *= scale;
        CHECK(moment_statistic(scaled) == doctest::Approx(base).epsilon(1e-10));
    }
}

TEST_CASE("moment statistic rejects degenerate input") {
    CHECK_THROWS_AS(moment_statistic(std::vector<std::complex<double>>{}), std::invalid_argument);
    CHECK_THROWS_AS(moment_statistic(std::vector<std::complex<double>>{{1.0, 0.0}}),
                    std::invalid_argument);
    const std::vector<std::complex<double>> zeros(16, {0.0, 0.0});
    CHECK_THROWS_AS(moment_statistic(zeros), std::domain_error);
}

TEST_CASE("mean removal") {
    std::vector<std::complex<double>> y;
    const std::complex<double> bias{5.0, -3.0};
    for (int i = 0; i < 64; ++i)
        y.push_back(bias + std::complex<double>{std::sin(0.9 * i), std::cos(0.4 * i)});
    const auto centered = remove_mean(y);
    std::complex<double> mean{0.0, 0.0};
    for (const auto& v : centered) mean += v;
    CHECK(std::abs(mean) / 64.0 < 1e-14);
}

TEST_CASE("thresholds: frozen values and structure") {
    CHECK(moment_threshold(0.1) == doctest::Approx(2.5631031310892012).epsilon(1e-10));
    CHECK(moment_threshold(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    // Smaller target false alarm -> larger threshold.
    CHECK(moment_threshold(0.01) > moment_threshold(0.1));

    CHECK(energy_threshold(0.1, 1.0, 4096) == doctest::Approx(2.0400484864232689).epsilon(1e-12));
    // Scales linearly with the assumed variance, shrinks with N.
    CHECK(energy_threshold(0.1, 2.0, 4096) ==
          doctest::Approx(2.0 * 2.0400484864232689).epsilon(1e-12));
    CHECK(energy_threshold(0.1, 1.0, 1u << 16) < energy_threshold(0.1, 1.0, 4096));
    CHECK_THROWS_AS(energy_threshold(0.0, 1.0, 4096), std::invalid_argument);
    CHECK_THROWS_AS(energy_threshold(0.1, -1.0, 4096), std::invalid_argument);
}

TEST_CASE("decision rule includes the boundary") {
    CHECK(decide(1.0, 1.0));
    CHECK(decide(1.5, 1.0));
    CHECK_FALSE(decide(0.999999, 1.0));
}

TEST_CASE("detector wrappers label their outcomes") {
    const std::vector<std::complex<double>> y = {{3.0, 4.0}, {0.0, 1.0}, {-2.0, 0.0}, {1.0, 1.0}};
    const DetectorOutcome m = run_moment_detector(y, 0.0);
    CHECK(m.detector == DetectorKind::Moment);
    CHECK(m.threshold == 0.0);
    CHECK(m.statistic == doctest::Approx(moment_statistic(y)).epsilon(1e-15));
    CHECK(m.decide_h1 == decide(m.statistic, m.threshold));

    const DetectorOutcome e = run_energy_detector(y, 100.0);
    CHECK(e.detector == DetectorKind::Energy);
    CHECK(e.statistic == doctest::Approx(energy_statistic(y)).epsilon(1e-15));
    CHECK_FALSE(e.decide_h1);
}

TEST_CASE("detector kind names") {
    CHECK(std::string(to_string(DetectorKind::Moment)) == "moment");
    CHECK(std::string(to_string(DetectorKind::Energy)) == "energy");
}
