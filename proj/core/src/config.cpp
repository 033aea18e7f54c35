#include "momentsense/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace momentsense {

const char* to_string(Hypothesis h) { return h == Hypothesis::H0 ? "h0" : "h1"; }
const char* to_string(ChannelKind c) { return c == ChannelKind::Awgn ? "awgn" : "rayleigh"; }
const char* to_string(SyncMode s) { return s == SyncMode::Synchronized ? "sync" : "async"; }

const char* to_string(SweepAxis a) {
    switch (a) {
        case SweepAxis::SnrDb: return "snr_db";
        case SweepAxis::N: return "n";
        case SweepAxis::DeltaDb: return "delta_db";
    }
    return "?";
}

bool parse_sweep_axis(const std::string& text, SweepAxis& out) {
    if (text == "snr_db") out = SweepAxis::SnrDb;
    else if (text == "n") out = SweepAxis::N;
    else if (text == "delta_db") out = SweepAxis::DeltaDb;
    else return false;
    return true;
}

bool apply_profile(TrialConfig& config, const std::string& profile) {
    if (profile == "desk") {
        config.trials = 2000;
        config.n = std::size_t{1} << 12;
        return true;
    }
    if (profile == "paper") {
        config.trials = 10000;
        config.n = std::size_t{1} << 16;
        return true;
    }
    return false;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_u64(const std::string& text, std::uint64_t& out) {
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool parse_bool(const std::string& text, bool& out) {
    if (text == "true" || text == "1" || text == "on") out = true;
    else if (text == "false" || text == "0" || text == "off") out = false;
    else return false;
    return true;
}

bool parse_value_list(const std::string& text, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) return false;
        double v = 0.0;
        if (!parse_double(item, v)) return false;
        out.push_back(v);
    }
    return !out.empty();
}

struct RawEntry {
    std::string key;
    std::string value;
    int line;
};

bool fail(ConfigError& error, int line, std::string message) {
    error.line = line;
    error.message = std::move(message);
    return false;
}

}  // namespace

bool parse_config(std::istream& in, SimConfig& out, ConfigError& error) {
    // Two passes: collect entries first so the profile can be applied before
    // explicit keys override it, regardless of key order in the file.
    std::vector<RawEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            return fail(error, line_no, "expected key=value, got '" + stripped + "'");
        RawEntry entry{trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)), line_no};
        if (entry.key.empty()) return fail(error, line_no, "empty key");
        entries.push_back(std::move(entry));
    }

    SimConfig config;
    for (const RawEntry& e : entries) {
        if (e.key == "profile") {
            if (!apply_profile(config.base, e.value))
                return fail(error, e.line, "unknown profile '" + e.value + "' (desk|paper)");
            config.profile = e.value;
        }
    }

    bool have_sweep_axis = false;
    for (const RawEntry& e : entries) {
        const std::string& k = e.key;
        const std::string& v = e.value;
        if (k == "profile") continue;  // already applied
        if (k == "hypothesis") {
            if (v == "h0") config.base.hypothesis = Hypothesis::H0;
            else if (v == "h1") config.base.hypothesis = Hypothesis::H1;
            else return fail(error, e.line, "hypothesis must be h0 or h1");
        } else if (k == "model") {
            if (!parse_signal_model(v, config.base.model))
                return fail(error, e.line, "unknown model '" + v + "'");
        } else if (k == "snr_db") {
            if (!parse_double(v, config.base.snr_db)) return fail(error, e.line, "snr_db: not a number");
        } else if (k == "n") {
            std::uint64_t n = 0;
            if (!parse_u64(v, n) || n < 1) return fail(error, e.line, "n: not a positive integer");
            config.base.n = static_cast<std::size_t>(n);
        } else if (k == "channel") {
            if (v == "awgn") config.base.channel = ChannelKind::Awgn;
            else if (v == "rayleigh") config.base.channel = ChannelKind::RayleighBlock;
            else return fail(error, e.line, "channel must be awgn or rayleigh");
        } else if (k == "uncertainty.delta_db") {
            if (!parse_double(v, config.base.uncertainty.delta_db) ||
                config.base.uncertainty.delta_db < 0.0)
                return fail(error, e.line, "uncertainty.delta_db: not a nonnegative number");
        } else if (k == "pulse.enabled") {
            if (!parse_bool(v, config.base.pulse_shaping))
                return fail(error, e.line, "pulse.enabled: not a boolean");
        } else if (k == "pulse.rolloff") {
            if (!parse_double(v, config.base.pulse_rolloff) || config.base.pulse_rolloff <= 0.0 ||
                config.base.pulse_rolloff > 1.0)
                return fail(error, e.line, "pulse.rolloff: must lie in (0, 1]");
        } else if (k == "pulse.oversampling") {
            std::uint64_t s = 0;
            if (!parse_u64(v, s) || s < 1 || s > 64)
                return fail(error, e.line, "pulse.oversampling: not a positive integer");
            config.base.pulse_oversampling = static_cast<int>(s);
        } else if (k == "sync") {
            if (v == "sync") config.base.sync = SyncMode::Synchronized;
            else if (v == "async") config.base.sync = SyncMode::Asynchronous;
            else return fail(error, e.line, "sync must be sync or async");
        } else if (k == "target_pf") {
            if (!parse_double(v, config.base.target_pf)) return fail(error, e.line, "target_pf: not a number");
        } else if (k == "trials") {
            std::uint64_t t = 0;
            if (!parse_u64(v, t) || t < 1) return fail(error, e.line, "trials: not a positive integer");
            config.base.trials = static_cast<std::size_t>(t);
        } else if (k == "seed") {
            if (!parse_u64(v, config.base.seed)) return fail(error, e.line, "seed: not a 64-bit integer");
        } else if (k == "noise.sigma2_true") {
            if (!parse_double(v, config.base.sigma2_true) || config.base.sigma2_true <= 0.0)
                return fail(error, e.line, "noise.sigma2_true: must be positive");
        } else if (k == "sweep.axis") {
            if (!parse_sweep_axis(v, config.sweep.axis))
                return fail(error, e.line, "sweep.axis must be snr_db, n, or delta_db");
            have_sweep_axis = true;
        } else if (k == "sweep.values") {
            if (!parse_value_list(v, config.sweep.values))
                return fail(error, e.line, "sweep.values: expected a comma-separated number list");
        } else {
            return fail(error, e.line, "unknown key '" + k + "'");
        }
    }
    (void)have_sweep_axis;

    out = std::move(config);
    return true;
}

bool parse_config_file(const std::string& path, SimConfig& out, ConfigError& error) {
    std::ifstream in(path);
    if (!in) return fail(error, 0, "cannot open config file '" + path + "'");
    return parse_config(in, out, error);
}

namespace {

// Shortest representation that parses back to the identical double, so a
// serialized config (and the sweep seeds derived from its values) round-trips
// exactly.
std::string format_number(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

std::string serialize_config(const SimConfig& config) {
    std::ostringstream out;
    const TrialConfig& b = config.base;
    out << "profile = " << config.profile << '\n';
    out << "hypothesis = " << to_string(b.hypothesis) << '\n';
    out << "model = " << to_string(b.model) << '\n';
    out << "snr_db = " << format_number(b.snr_db) << '\n';
    out << "n = " << b.n << '\n';
    out << "channel = " << to_string(b.channel) << '\n';
    out << "uncertainty.delta_db = " << format_number(b.uncertainty.delta_db) << '\n';
    out << "pulse.enabled = " << (b.pulse_shaping ? "true" : "false") << '\n';
    out << "pulse.rolloff = " << format_number(b.pulse_rolloff) << '\n';
    out << "pulse.oversampling = " << b.pulse_oversampling << '\n';
    out << "sync = " << to_string(b.sync) << '\n';
    out << "target_pf = " << format_number(b.target_pf) << '\n';
    out << "trials = " << b.trials << '\n';
    out << "seed = " << b.seed << '\n';
    out << "noise.sigma2_true = " << format_number(b.sigma2_true) << '\n';
    out << "sweep.axis = " << to_string(config.sweep.axis) << '\n';
    if (!config.sweep.values.empty()) {
        out << "sweep.values = ";
        for (std::size_t i = 0; i < config.sweep.values.size(); ++i) {
            if (i) out << ", ";
            out << format_number(config.sweep.values[i]);
        }
        out << '\n';
    }
    return out.str();
}

bool validate(const SimConfig& config, ConfigError& error) {
    const TrialConfig& b = config.base;
    if (!(b.target_pf > 0.0 && b.target_pf < 1.0))
        return fail(error, 0, "target_pf must lie in (0, 1)");
    if (b.n < 2) return fail(error, 0, "n must be at least 2");
    if (b.trials < 1) return fail(error, 0, "trials must be positive");
    if (b.sync == SyncMode::Asynchronous && !b.pulse_shaping)
        return fail(error, 0, "asynchronous mode requires pulse.enabled = true");
    if (b.hypothesis == Hypothesis::H1 && b.model == SignalModel::NoiseOnly)
        return fail(error, 0, "an H1 run needs a signal model (hypothesis = h0 for noise-only)");
    if (b.sigma2_true <= 0.0) return fail(error, 0, "noise.sigma2_true must be positive");
    if (b.uncertainty.delta_db < 0.0) return fail(error, 0, "uncertainty.delta_db must be nonnegative");
    return true;
}

}  // namespace momentsense
