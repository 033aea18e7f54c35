#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "momentsense/config.hpp"
#include "momentsense/detectors.hpp"

namespace momentsense {

// One aggregated curve point: empirical detection (or false-alarm) frequency
// with its binomial standard error, paired with the analytic prediction where
// one exists (moment detector with the asymptotic formula applicable: H0
// always; H1 only for AWGN without pulse shaping at zero uncertainty).
struct CurvePoint {
    double sweep_value = 0.0;
    double p_hat = 0.0;
    double std_error = 0.0;
    std::optional<double> theoretical;
    DetectorKind detector = DetectorKind::Moment;
};

struct CellResult {
    CurvePoint moment;
    CurvePoint energy;
    std::uint64_t degenerate_trials = 0;  // expected zero
};

// Detection thresholds used for every trial of a cell. The moment threshold
// needs no variance knowledge. The energy threshold is the nominal-variance
// rule evaluated at the worst case of the uncertainty interval
// (eps * nominal); with delta_db = 0 that IS the nominal variance, and under
// uncertainty it is the sizing that keeps the baseline's false alarms bounded
// instead of letting them swamp the comparison.
struct CellThresholds {
    double moment;
    double energy;
};
CellThresholds cell_thresholds(const TrialConfig& config);

// Runs config.trials independent trials (stream id = trial index), evaluates
// both detectors on each observation, and aggregates decision counts.
// Deterministic: the result is bit-identical for any worker count because
// every trial owns an isolated RNG stream and only integer counts are merged.
CellResult run_cell(const TrialConfig& config, int threads = 1);

// Stable per-cell seed so extending a sweep never perturbs existing cells.
std::uint64_t cell_seed(std::uint64_t base_seed, SweepAxis axis, double value);

// Applies `axis = value` to a copy of the base config (reseeded per cell) and
// runs it; one CellResult per value.
std::vector<CellResult> sweep(const TrialConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int threads = 1);

// The trial loop body, exposed for callers that need the raw statistics
// (variance studies, tests): synthesizes observation `trial` of the config
// and returns both detector statistics.
struct TrialStatistics {
    double moment;
    double energy;
};
TrialStatistics run_trial(const TrialConfig& config, std::uint64_t trial);

}  // namespace momentsense
