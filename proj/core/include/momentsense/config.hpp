#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "momentsense/stats_core.hpp"

namespace momentsense {

enum class Hypothesis { H0, H1 };
enum class ChannelKind { Awgn, RayleighBlock };
enum class SyncMode { Synchronized, Asynchronous };
enum class SweepAxis { SnrDb, N, DeltaDb };

// Bounded noise-variance uncertainty: the actual per-component variance of
// one observation is drawn uniformly from [sigma2/eps, eps*sigma2] with
// eps = 10^(delta_db/10); delta_db = 0 means the nominal value exactly.
struct UncertaintyModel {
    double delta_db = 0.0;

    double epsilon() const { return std::pow(10.0, delta_db / 10.0); }
};

// One Monte Carlo scenario. snr_db is the receiver SNR beta = E|s|^2 / E|w|^2
// in dB; sigma2_true is the true per-component noise variance (detectors only
// ever see the nominal 1.0, which is what the robustness experiments vary).
struct TrialConfig {
    Hypothesis hypothesis = Hypothesis::H1;
    SignalModel model = SignalModel::Qpsk;
    double snr_db = -10.0;
    std::size_t n = 1u << 12;
    ChannelKind channel = ChannelKind::Awgn;
    UncertaintyModel uncertainty{};
    bool pulse_shaping = false;
    SyncMode sync = SyncMode::Synchronized;
    double target_pf = 0.1;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    double sigma2_true = 1.0;
    double pulse_rolloff = 0.2;
    int pulse_oversampling = 4;

    double beta() const {
        return hypothesis == Hypothesis::H0 ? 0.0 : std::pow(10.0, snr_db / 10.0);
    }
};

struct SweepSpec {
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> values;
};

// A full simulation request: base scenario plus the sweep materializing one
// curve. profile applies the desk/paper scale before explicit keys.
struct SimConfig {
    TrialConfig base{};
    SweepSpec sweep{};
    std::string profile = "desk";
};

struct ConfigError {
    int line = 0;               // 0 when not tied to a specific line
    std::string message;
};

// Applies the named scale profile: "desk" (trials=2000, n=2^12) or "paper"
// (trials=10^4, n=2^16). Returns false for unknown names.
bool apply_profile(TrialConfig& config, const std::string& profile);

// Parses the flat key=value format ('#' comments, dotted section keys).
// On failure fills `error` with a line-anchored diagnostic and returns false.
bool parse_config(std::istream& in, SimConfig& out, ConfigError& error);
bool parse_config_file(const std::string& path, SimConfig& out, ConfigError& error);

// Serializes the fully resolved configuration as key=value lines; the result
// re-parses into an identical SimConfig (round-trip contract, and the body of
// every CSV header).
std::string serialize_config(const SimConfig& config);

const char* to_string(Hypothesis h);
const char* to_string(ChannelKind c);
const char* to_string(SyncMode s);
const char* to_string(SweepAxis a);
bool parse_sweep_axis(const std::string& text, SweepAxis& out);

// Validates cross-field invariants (async needs pulse shaping, positive
// counts, pf in (0,1), ...); returns false and fills `error` on violation.
bool validate(const SimConfig& config, ConfigError& error);

}  // namespace momentsense
