#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "momentsense/config.hpp"
#include "momentsense/csv.hpp"
#include "momentsense/montecarlo.hpp"
#include "momentsense/rng.hpp"
#include "momentsense/stats_core.hpp"
#include "selfcheck.hpp"

namespace {

using namespace momentsense;

constexpr const char* kVersion = "1.0.0";

// Exit codes (see README): 0 ok, 1 I/O failure, 2 configuration error,
// 3 selftest failure.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitSelftest = 3;

struct GlobalOptions {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::string profile;
    bool profile_given = false;
    int threads = 1;
};

int config_failure(const std::string& path, const ConfigError& error) {
    if (error.line > 0)
        std::fprintf(stderr, "config error: %s:%d: %s\n", path.c_str(), error.line,
                     error.message.c_str());
    else if (!path.empty())
        std::fprintf(stderr, "config error: %s: %s\n", path.c_str(), error.message.c_str());
    else
        std::fprintf(stderr, "config error: %s\n", error.message.c_str());
    return kExitConfig;
}

int config_failure(const std::string& message) {
    std::fprintf(stderr, "config error: %s\n", message.c_str());
    return kExitConfig;
}

// Loads --config if given, then layers --profile and --seed on top. The
// profile flag re-applies the scale knobs, so it wins over explicit n/trials
// from the file; this is the documented precedence.
bool resolve_config(const GlobalOptions& opt, bool config_required, SimConfig& cfg, int& exit_code) {
    ConfigError error;
    if (!opt.config_path.empty()) {
        if (!parse_config_file(opt.config_path, cfg, error)) {
            exit_code = config_failure(opt.config_path, error);
            return false;
        }
    } else if (config_required) {
        exit_code = config_failure("this command needs --config PATH");
        return false;
    }
    if (opt.profile_given) {
        if (!apply_profile(cfg.base, opt.profile)) {
            exit_code = config_failure("unknown profile '" + opt.profile + "' (desk|paper)");
            return false;
        }
        cfg.profile = opt.profile;
    }
    if (opt.seed_given) cfg.base.seed = opt.seed;
    if (!validate(cfg, error)) {
        exit_code = config_failure(opt.config_path, error);
        return false;
    }
    return true;
}

void emit_manifest(CsvWriter& writer, const std::string& command, const SimConfig& cfg) {
    writer.comment("momentsense " + std::string(kVersion));
    writer.comment("command = " + command);
    writer.comment("config-begin");
    writer.comment_block(serialize_config(cfg));
    writer.comment("config-end");
}

int write_output(const CsvWriter& writer, const std::string& path) {
    try {
        writer.write(path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "output error: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}

std::string theory_cell(const std::optional<double>& value) {
    return value ? csv_number(*value) : std::string{};
}

void append_curve_rows(CsvWriter& writer, const std::vector<std::string>& prefix,
                       const char* axis, const CurvePoint& point) {
    std::vector<std::string> cells = prefix;
    cells.push_back(axis);
    cells.push_back(csv_number(point.sweep_value));
    cells.push_back(to_string(point.detector));
    cells.push_back(csv_number(point.p_hat));
    cells.push_back(csv_number(point.std_error));
    cells.push_back(theory_cell(point.theoretical));
    writer.row(cells);
}

struct TheoryOptions {
    std::string model_name = "qpsk";
    bool model_given = false;
    std::uint64_t n = std::uint64_t{1} << 16;
    bool n_given = false;
    double pf = 0.1;
    bool pf_given = false;
    double snr_min = -20.0;
    double snr_max = 0.0;
    double snr_step = 1.0;
    bool grid_given = false;
};

int cmd_theory(const GlobalOptions& opt, const TheoryOptions& theory) {
    SimConfig cfg;
    int exit_code = kExitOk;
    if (!resolve_config(opt, /*config_required=*/false, cfg, exit_code)) return exit_code;

    // Inline flags override whatever the config (or default) carries.
    if (theory.model_given && !parse_signal_model(theory.model_name, cfg.base.model))
        return config_failure("unknown model '" + theory.model_name + "'");
    if (theory.n_given) cfg.base.n = static_cast<std::size_t>(theory.n);
    if (theory.pf_given) cfg.base.target_pf = theory.pf;
    if (!(cfg.base.target_pf > 0.0 && cfg.base.target_pf < 1.0))
        return config_failure("target_pf must lie in (0, 1)");
    if (cfg.base.n < 1) return config_failure("n must be positive");

    const bool noise_only =
        cfg.base.model == SignalModel::NoiseOnly || cfg.base.hypothesis == Hypothesis::H0;
    if (noise_only) {
        cfg.base.model = SignalModel::NoiseOnly;
        cfg.base.hypothesis = Hypothesis::H0;
    }

    std::vector<double> grid;
    if (theory.grid_given) {
        if (!(theory.snr_step > 0.0)) return config_failure("--snr-step must be positive");
        if (theory.snr_min > theory.snr_max)
            return config_failure("--snr-min must not exceed --snr-max");
        for (double v = theory.snr_min; v <= theory.snr_max + 1e-9 * theory.snr_step;
             v += theory.snr_step)
            grid.push_back(v);
    } else if (cfg.sweep.axis == SweepAxis::SnrDb && !cfg.sweep.values.empty()) {
        grid = cfg.sweep.values;
    } else {
        for (double v = -20.0; v <= 0.0 + 1e-9; v += 1.0) grid.push_back(v);
    }
    cfg.sweep.axis = SweepAxis::SnrDb;
    cfg.sweep.values = grid;

    const double lambda = threshold_for_pf(cfg.base.target_pf);
    CsvWriter writer;
    emit_manifest(writer, "theory", cfg);
    writer.header({"snr_db", "t_ratio", "mu", "var_tilde", "lambda", "pd_theory"});
    for (const double snr : grid) {
        const double beta = noise_only ? 0.0 : std::pow(10.0, snr / 10.0);
        writer.row({csv_number(snr), csv_number(theoretical_ratio(cfg.base.model, beta)),
                    csv_number(mean_shift(cfg.base.model, beta, cfg.base.n)),
                    csv_number(closed_form_variance(cfg.base.model, beta)), csv_number(lambda),
                    csv_number(theoretical_pd(cfg.base.model, beta, cfg.base.n, lambda))});
    }
    return write_output(writer, opt.out_path);
}

int cmd_simulate(const GlobalOptions& opt) {
    SimConfig cfg;
    int exit_code = kExitOk;
    if (!resolve_config(opt, /*config_required=*/true, cfg, exit_code)) return exit_code;
    if (cfg.sweep.values.empty())
        return config_failure("sweep.values must list at least one value");

    const std::vector<CellResult> cells =
        sweep(cfg.base, cfg.sweep.axis, cfg.sweep.values, opt.threads);

    CsvWriter writer;
    emit_manifest(writer, "simulate", cfg);
    writer.header({"sweep_axis", "value", "detector", "p_hat", "std_err", "p_theory"});
    const char* axis = to_string(cfg.sweep.axis);
    for (const CellResult& cell : cells) {
        append_curve_rows(writer, {}, axis, cell.moment);
        append_curve_rows(writer, {}, axis, cell.energy);
    }
    return write_output(writer, opt.out_path);
}

int cmd_compare(const GlobalOptions& opt) {
    SimConfig cfg;
    int exit_code = kExitOk;
    if (!resolve_config(opt, /*config_required=*/true, cfg, exit_code)) return exit_code;
    if (cfg.sweep.values.empty())
        return config_failure("sweep.values must list at least one value");

    // The comparison always runs the shaped pipeline: the async legs need it,
    // and the sync legs must face the same waveform to be comparable.
    cfg.base.pulse_shaping = true;

    struct Combo {
        ChannelKind channel;
        SyncMode sync;
    };
    const Combo combos[] = {{ChannelKind::Awgn, SyncMode::Synchronized},
                            {ChannelKind::Awgn, SyncMode::Asynchronous},
                            {ChannelKind::RayleighBlock, SyncMode::Synchronized},
                            {ChannelKind::RayleighBlock, SyncMode::Asynchronous}};

    CsvWriter writer;
    emit_manifest(writer, "compare", cfg);
    writer.header(
        {"channel", "sync", "sweep_axis", "value", "detector", "p_hat", "std_err", "p_theory"});
    const char* axis = to_string(cfg.sweep.axis);
    std::uint64_t combo_index = 0;
    for (const Combo& combo : combos) {
        TrialConfig base = cfg.base;
        base.channel = combo.channel;
        base.sync = combo.sync;
        base.seed = hash_combine(cfg.base.seed, ++combo_index);
        const std::vector<CellResult> cells =
            sweep(base, cfg.sweep.axis, cfg.sweep.values, opt.threads);
        const std::vector<std::string> prefix = {to_string(combo.channel), to_string(combo.sync)};
        for (const CellResult& cell : cells) {
            append_curve_rows(writer, prefix, axis, cell.moment);
            append_curve_rows(writer, prefix, axis, cell.energy);
        }
    }
    return write_output(writer, opt.out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Moment-ratio spectrum sensing toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "Scenario config file (key = value lines)");
    app.add_option("--out", opt.out_path, "Output CSV path (default: stdout)");
    auto* seed_flag = app.add_option("--seed", opt.seed, "Override the base RNG seed");
    auto* profile_flag =
        app.add_option("--profile", opt.profile, "Scale profile: desk or paper")
            ->check(CLI::IsMember({"desk", "paper"}));
    auto* threads_flag = app.add_option("--threads", opt.threads, "Monte Carlo worker threads")
                             ->envname("MOMENTSENSE_THREADS")
                             ->check(CLI::Range(1, 1024));

    TheoryOptions theory;
    CLI::App* theory_cmd =
        app.add_subcommand("theory", "Analytic detection curves from the asymptotic formulas");
    auto* model_flag = theory_cmd->add_option("--model", theory.model_name,
                                              "Signal model: bpsk|qpsk|qam16|qam64|cu|noise");
    auto* n_flag = theory_cmd->add_option("--n", theory.n, "Samples per observation");
    auto* pf_flag = theory_cmd->add_option("--pf", theory.pf, "Target false-alarm probability");
    auto* snr_min_flag = theory_cmd->add_option("--snr-min", theory.snr_min, "Grid start (dB)");
    auto* snr_max_flag = theory_cmd->add_option("--snr-max", theory.snr_max, "Grid end (dB)");
    auto* snr_step_flag = theory_cmd->add_option("--snr-step", theory.snr_step, "Grid step (dB)");

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Monte Carlo sweep of both detectors over one axis");
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Moment vs energy across AWGN/Rayleigh and sync/async (shaped pipeline)");
    CLI::App* selftest_cmd =
        app.add_subcommand("selftest", "Run the built-in analytic cross-check battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    // CLI11 silently drops an env value that fails validation; surface that
    // as the config error it is (the flag, when given, still wins).
    if (threads_flag->count() == 0) {
        if (const char* env = std::getenv("MOMENTSENSE_THREADS"); env != nullptr && *env != '\0')
            return config_failure(std::string("MOMENTSENSE_THREADS='") + env +
                                  "' is not a valid thread count (1..1024)");
    }

    opt.seed_given = seed_flag->count() > 0;
    opt.profile_given = profile_flag->count() > 0;
    theory.model_given = model_flag->count() > 0;
    theory.n_given = n_flag->count() > 0;
    theory.pf_given = pf_flag->count() > 0;
    theory.grid_given =
        snr_min_flag->count() > 0 || snr_max_flag->count() > 0 || snr_step_flag->count() > 0;

    try {
        if (theory_cmd->parsed()) return cmd_theory(opt, theory);
        if (simulate_cmd->parsed()) return cmd_simulate(opt);
        if (compare_cmd->parsed()) return cmd_compare(opt);
        if (selftest_cmd->parsed())
            return momentsense::tools::run_selfcheck() ? kExitOk : kExitSelftest;
    } catch (const std::invalid_argument& e) {
        return config_failure(e.what());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}
