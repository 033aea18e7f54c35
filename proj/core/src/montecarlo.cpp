#include "momentsense/montecarlo.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "momentsense/rng.hpp"
#include "momentsense/stats_core.hpp"
#include "momentsense/waveform.hpp"

namespace momentsense {

CellThresholds cell_thresholds(const TrialConfig& config) {
    const double nominal_sigma2 = 1.0;  // detectors assume the nominal, never sigma2_true
    const double assumed = config.uncertainty.epsilon() * nominal_sigma2;
    return {moment_threshold(config.target_pf),
            energy_threshold(config.target_pf, assumed, config.n)};
}

TrialStatistics run_trial(const TrialConfig& config, std::uint64_t trial) {
    RngStream rng(config.seed, trial);
    const SampleVec y = synthesize_observation(config, rng);
    return {moment_statistic(y), energy_statistic(y)};
}

namespace {

struct Counts {
    std::uint64_t moment_h1 = 0;
    std::uint64_t energy_h1 = 0;
    std::uint64_t degenerate = 0;
};

Counts count_range(const TrialConfig& config, const CellThresholds& thresholds,
                   std::uint64_t first, std::uint64_t last) {
    Counts counts;
    for (std::uint64_t t = first; t < last; ++t) {
        try {
            const TrialStatistics stats = run_trial(config, t);
            if (decide(stats.moment, thresholds.moment)) ++counts.moment_h1;
            if (decide(stats.energy, thresholds.energy)) ++counts.energy_h1;
        } catch (const std::domain_error&) {
            ++counts.degenerate;  // e.g. an all-zero observation; expected never
        }
    }
    return counts;
}

double binomial_std_error(double p_hat, std::uint64_t trials) {
    return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(trials));
}

std::optional<double> moment_theory(const TrialConfig& config) {
    if (config.hypothesis == Hypothesis::H0) return config.target_pf;
    const bool eq18_applies = config.channel == ChannelKind::Awgn && !config.pulse_shaping &&
                              config.uncertainty.delta_db == 0.0;
    if (!eq18_applies) return std::nullopt;
    return theoretical_pd(config.model, config.beta(), config.n,
                          moment_threshold(config.target_pf));
}

}  // namespace

CellResult run_cell(const TrialConfig& config, int threads) {
    if (config.trials < 1) throw std::invalid_argument("run_cell: trials must be positive");
    const CellThresholds thresholds = cell_thresholds(config);

    const std::uint64_t trials = config.trials;
    std::uint64_t workers = threads < 1 ? 1 : static_cast<std::uint64_t>(threads);
    if (workers > trials) workers = trials;

    std::vector<Counts> partial(workers);
    if (workers == 1) {
        partial[0] = count_range(config, thresholds, 0, trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (std::uint64_t w = 0; w < workers; ++w) {
            const std::uint64_t first = w * chunk;
            const std::uint64_t last = std::min(trials, first + chunk);
            pool.emplace_back([&, w, first, last] {
                partial[w] = count_range(config, thresholds, first, last);
            });
        }
        for (auto& worker : pool) worker.join();
    }

    Counts total;
    for (const Counts& c : partial) {
        total.moment_h1 += c.moment_h1;
        total.energy_h1 += c.energy_h1;
        total.degenerate += c.degenerate;
    }

    CellResult result;
    result.degenerate_trials = total.degenerate;
    const double p_moment = static_cast<double>(total.moment_h1) / static_cast<double>(trials);
    const double p_energy = static_cast<double>(total.energy_h1) / static_cast<double>(trials);
    result.moment = {config.snr_db, p_moment, binomial_std_error(p_moment, trials),
                     moment_theory(config), DetectorKind::Moment};
    result.energy = {config.snr_db, p_energy, binomial_std_error(p_energy, trials), std::nullopt,
                     DetectorKind::Energy};
    return result;
}

std::uint64_t cell_seed(std::uint64_t base_seed, SweepAxis axis, double value) {
    const std::uint64_t axis_tag = static_cast<std::uint64_t>(axis) + 1;
    return hash_combine(hash_combine(base_seed, axis_tag), std::bit_cast<std::uint64_t>(value));
}

std::vector<CellResult> sweep(const TrialConfig& base, SweepAxis axis,
                              const std::vector<double>& values, int threads) {
    if (values.empty()) throw std::invalid_argument("sweep: no sweep values");
    std::vector<CellResult> results;
    results.reserve(values.size());
    for (const double value : values) {
        TrialConfig config = base;
        switch (axis) {
            case SweepAxis::SnrDb:
                config.snr_db = value;
                break;
            case SweepAxis::N:
                if (value < 1.0) throw std::invalid_argument("sweep: N values must be positive");
                config.n = static_cast<std::size_t>(std::llround(value));
                break;
            case SweepAxis::DeltaDb:
                if (value < 0.0) throw std::invalid_argument("sweep: delta_db values must be nonnegative");
                config.uncertainty.delta_db = value;
                break;
        }
        config.seed = cell_seed(base.seed, axis, value);
        CellResult cell = run_cell(config, threads);
        cell.moment.sweep_value = value;
        cell.energy.sweep_value = value;
        results.push_back(std::move(cell));
    }
    return results;
}

}  // namespace momentsense
