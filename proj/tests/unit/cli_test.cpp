#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "momentsense/config.hpp"

using namespace momentsense;

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "momentsense_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("stdout." + std::to_string(counter));
    const fs::path err = scratch_dir() / ("stderr." + std::to_string(counter));
    ++counter;
    const std::string command =
        std::string(MS_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
    const int status = std::system(command.c_str());
    CliResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    result.err = slurp(err);
    return result;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path path = scratch_dir() / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << text;
    return path;
}

struct Table {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

Table parse_table(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            table.comments.push_back(line);
            continue;
        }
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (!have_header) {
            table.columns = cells;
            have_header = true;
        } else {
            table.rows.push_back(cells);
        }
    }
    return table;
}

std::size_t column_index(const Table& table, const std::string& name) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        if (table.columns[i] == name) return i;
    REQUIRE_MESSAGE(false, ("missing column " + name));
    return 0;
}

std::string embedded_config(const std::string& text) {
    std::istringstream in(text);
    std::string line, config;
    bool inside = false;
    while (std::getline(in, line)) {
        if (line == "# config-begin") {
            inside = true;
            continue;
        }
        if (line == "# config-end") break;
        if (inside && line.size() >= 2) config += line.substr(2) + "\n";
    }
    return config;
}

}  // namespace

TEST_CASE("cli: help and usage errors") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("").exit_code == 2);                  // a subcommand is required
    CHECK(run_cli("transmogrify").exit_code == 2);      // unknown subcommand
    CHECK(run_cli("theory --bogus-flag").exit_code == 2);
    CHECK(run_cli("theory --threads 0").exit_code == 2);
    CHECK(run_cli("theory --profile lab").exit_code == 2);
}

TEST_CASE("cli: theory emits the analytic table") {
    const CliResult result = run_cli("theory");
    REQUIRE(result.exit_code == 0);
    const Table table = parse_table(result.out);
    REQUIRE_FALSE(table.comments.empty());
    CHECK(table.comments.front().rfind("# momentsense", 0) == 0);
    CHECK(table.columns ==
          std::vector<std::string>{"snr_db", "t_ratio", "mu", "var_tilde", "lambda", "pd_theory"});
    CHECK(table.rows.size() == 21);  // default grid -20..0 dB in 1 dB steps
}

TEST_CASE("cli: theory frozen curve point") {
    const CliResult result =
        run_cli("theory --model qpsk --n 65536 --pf 0.1 --snr-min -10 --snr-max -10");
    REQUIRE(result.exit_code == 0);
    const Table table = parse_table(result.out);
    REQUIRE(table.rows.size() == 1);
    const auto& row = table.rows[0];
    CHECK(std::stod(row[column_index(table, "snr_db")]) == doctest::Approx(-10.0));
    CHECK(std::stod(row[column_index(table, "t_ratio")]) ==
          doctest::Approx(-1.9917355371900827).epsilon(1e-10));
    CHECK(std::stod(row[column_index(table, "mu")]) ==
          doctest::Approx(2.115702479338843).epsilon(1e-10));
    CHECK(std::stod(row[column_index(table, "var_tilde")]) ==
          doctest::Approx(3.8569374692714504).epsilon(1e-10));
    CHECK(std::stod(row[column_index(table, "lambda")]) ==
          doctest::Approx(2.5631031310892012).epsilon(1e-9));
    CHECK(std::stod(row[column_index(table, "pd_theory")]) ==
          doctest::Approx(0.40989646034607974).epsilon(1e-9));
}

TEST_CASE("cli: theory noise-only rows degenerate to the false-alarm target") {
    const CliResult result = run_cli("theory --model noise --pf 0.2 --snr-min -4 --snr-max 0");
    REQUIRE(result.exit_code == 0);
    const Table table = parse_table(result.out);
    REQUIRE(table.rows.size() == 5);
    for (const auto& row : table.rows) {
        CHECK(std::stod(row[column_index(table, "pd_theory")]) ==
              doctest::Approx(0.2).epsilon(1e-9));
        CHECK(std::stod(row[column_index(table, "t_ratio")]) == doctest::Approx(-2.0));
        CHECK(std::stod(row[column_index(table, "var_tilde")]) == doctest::Approx(4.0));
    }
}

TEST_CASE("cli: theory rejects bad inline values") {
    CHECK(run_cli("theory --pf 1.5").exit_code == 2);
    CHECK(run_cli("theory --snr-min 0 --snr-max -10").exit_code == 2);
    CHECK(run_cli("theory --snr-min 0 --snr-max 1 --snr-step -1").exit_code == 2);
    CHECK(run_cli("theory --model qam1024").exit_code == 2);
}

TEST_CASE("cli: simulate needs a parseable config") {
    CHECK(run_cli("simulate").exit_code == 2);

    const fs::path broken = write_file("broken.cfg",
                                       "model = qpsk\n"
                                       "n = 512\n"
                                       "walrus = yes\n");
    const fs::path never = scratch_dir() / "never.csv";
    const CliResult result =
        run_cli("simulate --config " + broken.string() + " --out " + never.string());
    CHECK(result.exit_code == 2);
    CHECK(result.err.find(":3:") != std::string::npos);  // line-anchored diagnostic
    CHECK_FALSE(fs::exists(never));

    const fs::path no_sweep = write_file("no_sweep.cfg", "hypothesis = h0\nmodel = noise\n");
    const CliResult missing = run_cli("simulate --config " + no_sweep.string());
    CHECK(missing.exit_code == 2);
    CHECK(missing.err.find("sweep.values") != std::string::npos);
}

TEST_CASE("cli: simulate produces labeled curve points") {
    const fs::path cfg = write_file("quick_h0.cfg",
                                    "hypothesis = h0\n"
                                    "model = noise\n"
                                    "n = 256\n"
                                    "trials = 200\n"
                                    "target_pf = 0.1\n"
                                    "seed = 31\n"
                                    "sweep.axis = snr_db\n"
                                    "sweep.values = -10, -6\n");
    const fs::path out = scratch_dir() / "quick_h0.csv";
    const CliResult result = run_cli("simulate --config " + cfg.string() + " --out " + out.string());
    REQUIRE_MESSAGE(result.exit_code == 0, result.err);
    const Table table = parse_table(slurp(out));
    CHECK(table.columns ==
          std::vector<std::string>{"sweep_axis", "value", "detector", "p_hat", "std_err",
                                   "p_theory"});
    REQUIRE(table.rows.size() == 4);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        CHECK(row[0] == "snr_db");
        CHECK(row[2] == (i % 2 == 0 ? "moment" : "energy"));
        const double p_hat = std::stod(row[3]);
        CHECK(p_hat >= 0.0);
        CHECK(p_hat <= 1.0);
        if (i % 2 == 0) {
            CHECK(std::stod(row[5]) == doctest::Approx(0.1).epsilon(1e-9));
        } else {
            CHECK(row[5].empty());
        }
    }
}

TEST_CASE("cli: output header round-trips into the producing config") {
    const fs::path cfg = write_file("roundtrip.cfg",
                                    "hypothesis = h1\n"
                                    "model = qam16\n"
                                    "snr_db = -7.25\n"
                                    "n = 512\n"
                                    "trials = 64\n"
                                    "seed = 5\n"
                                    "sweep.axis = n\n"
                                    "sweep.values = 256, 512\n");
    const fs::path out = scratch_dir() / "roundtrip.csv";
    const CliResult result = run_cli("simulate --config " + cfg.string() + " --seed 777 --out " +
                                     out.string());
    REQUIRE_MESSAGE(result.exit_code == 0, result.err);

    std::istringstream header(embedded_config(slurp(out)));
    SimConfig reparsed;
    ConfigError error;
    REQUIRE_MESSAGE(parse_config(header, reparsed, error), error.message);
    CHECK(reparsed.base.model == SignalModel::Qam16);
    CHECK(reparsed.base.snr_db == -7.25);
    CHECK(reparsed.base.n == 512);
    CHECK(reparsed.base.trials == 64);
    CHECK(reparsed.base.seed == 777);  // the flag overrides the file
    CHECK(reparsed.sweep.axis == SweepAxis::N);
    CHECK(reparsed.sweep.values == std::vector<double>{256.0, 512.0});
}

TEST_CASE("cli: byte-identical output across runs, threads, and the env fallback") {
    const fs::path cfg = write_file("det.cfg",
                                    "hypothesis = h1\n"
                                    "model = qpsk\n"
                                    "snr_db = -8\n"
                                    "n = 512\n"
                                    "trials = 150\n"
                                    "seed = 12\n"
                                    "sweep.axis = snr_db\n"
                                    "sweep.values = -12, -8\n");
    auto run_to = [&](const std::string& extra, const std::string& name) {
        const fs::path out = scratch_dir() / name;
        const CliResult r =
            run_cli("simulate --config " + cfg.string() + " --out " + out.string() + " " + extra);
        REQUIRE_MESSAGE(r.exit_code == 0, r.err);
        return slurp(out);
    };
    const std::string a = run_to("--threads 1", "det_a.csv");
    const std::string b = run_to("--threads 1", "det_b.csv");
    const std::string c = run_to("--threads 4", "det_c.csv");
    CHECK(a == b);
    CHECK(a == c);

    ::setenv("MOMENTSENSE_THREADS", "4", 1);
    const std::string d = run_to("", "det_d.csv");
    ::unsetenv("MOMENTSENSE_THREADS");
    CHECK(a == d);

    ::setenv("MOMENTSENSE_THREADS", "banana", 1);
    const CliResult bad = run_cli("simulate --config " + cfg.string());
    ::unsetenv("MOMENTSENSE_THREADS");
    CHECK(bad.exit_code == 2);
}

TEST_CASE("cli: compare walks both channels and sync modes") {
    const fs::path cfg = write_file("compare.cfg",
                                    "hypothesis = h1\n"
                                    "model = qpsk\n"
                                    "n = 512\n"
                                    "trials = 60\n"
                                    "seed = 9\n"
                                    "uncertainty.delta_db = 1\n"
                                    "sweep.axis = snr_db\n"
                                    "sweep.values = -8\n");
    const fs::path out = scratch_dir() / "compare.csv";
    const CliResult result = run_cli("compare --config " + cfg.string() + " --out " + out.string());
    REQUIRE_MESSAGE(result.exit_code == 0, result.err);
    const Table table = parse_table(slurp(out));
    CHECK(table.columns ==
          std::vector<std::string>{"channel", "sync", "sweep_axis", "value", "detector", "p_hat",
                                   "std_err", "p_theory"});
    REQUIRE(table.rows.size() == 8);
    int awgn = 0, rayleigh = 0, sync = 0, async = 0;
    for (const auto& row : table.rows) {
        if (row[0] == "awgn") ++awgn;
        if (row[0] == "rayleigh") ++rayleigh;
        if (row[1] == "sync") ++sync;
        if (row[1] == "async") ++async;
    }
    CHECK(awgn == 4);
    CHECK(rayleigh == 4);
    CHECK(sync == 4);
    CHECK(async == 4);
}

TEST_CASE("cli: profile flag rescales the run") {
    const CliResult result = run_cli("theory --profile paper --snr-min -10 --snr-max -10");
    REQUIRE(result.exit_code == 0);
    const std::string config = embedded_config(result.out);
    CHECK(config.find("profile = paper\n") != std::string::npos);
    CHECK(config.find("n = 65536\n") != std::string::npos);
    CHECK(config.find("trials = 10000\n") != std::string::npos);
}

TEST_CASE("cli: selftest battery passes and reports") {
    const CliResult result = run_cli("selftest");
    CHECK(result.exit_code == 0);
    CHECK(result.out.find("all checks passed") != std::string::npos);
}
