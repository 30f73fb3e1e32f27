#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "anticorr/analytic.hpp"
#include "cli.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> const& args) {
    std::ostringstream out;
    std::ostringstream err;
    int const code = anticorr::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(std::string const& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') {
                quoted = !quoted;
            } else if (c == ',' && !quoted) {
                fields.push_back(field);
                field.clear();
            } else {
                field += c;
            }
        }
        fields.push_back(field);
        rows.push_back(fields);
    }
    return rows;
}

std::size_t column(std::vector<std::string> const& header, std::string const& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    ADD_FAILURE() << "missing column " << name;
    return 0;
}

// value after "key " on its own line of a diagnostics stream
double diagnostic(std::string const& err, std::string const& key) {
    std::istringstream in(err);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " ", 0) == 0) {
            return std::stod(line.substr(key.size() + 1));
        }
    }
    ADD_FAILURE() << "missing diagnostic " << key;
    return NAN;
}

bool type_matches(json const& v, std::string const& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
}

// Subset of JSON Schema used by the published schema: type, required,
// properties, const, enum.
void validate(json const& schema, json const& v, std::string const& path,
              std::vector<std::string>& problems) {
    if (schema.contains("type")) {
        auto const& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(v, t.get<std::string>());
        } else {
            for (auto const& alt : t) {
                ok = ok || type_matches(v, alt.get<std::string>());
            }
        }
        if (!ok) {
            problems.push_back(path + ": type " + t.dump() + " expected, got " + v.dump());
            return;
        }
    }
    if (schema.contains("const") && v != schema["const"]) {
        problems.push_back(path + ": const mismatch");
    }
    if (schema.contains("enum") &&
        std::find(schema["enum"].begin(), schema["enum"].end(), v) == schema["enum"].end()) {
        problems.push_back(path + ": not in enum");
    }
    if (schema.contains("required")) {
        for (auto const& key : schema["required"]) {
            if (!v.contains(key.get<std::string>())) {
                problems.push_back(path + ": missing " + key.get<std::string>());
            }
        }
    }
    if (schema.contains("properties") && v.is_object()) {
        for (auto const& [key, sub] : schema["properties"].items()) {
            if (v.contains(key)) {
                validate(sub, v[key], path + "." + key, problems);
            }
        }
    }
}

json simulate_schema() {
    std::ifstream in(std::string(ANTICORR_SCHEMA_DIR) + "/simulate.schema.json");
    return json::parse(in);
}

std::vector<std::string> const kThermal{"--p", "0.3", "--q", "0.3", "--thermal", "1.5"};

std::vector<std::string> concat(std::vector<std::string> a, std::vector<std::string> const& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

// =============================================================================
// Exit-code contract
// =============================================================================

TEST(CliExitCodes, UsageErrors) {
    EXPECT_EQ(run_cli({}).code, 2);
    EXPECT_EQ(run_cli({"bogus"}).code, 2);
    EXPECT_EQ(run_cli({"pmf", "--p", "0.3"}).code, 2);
    EXPECT_EQ(run_cli({"pmf", "--p", "0.3", "--q", "0.3"}).code, 2);
    EXPECT_EQ(run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--n", "2", "--poisson", "1"}).code, 2);
    EXPECT_EQ(run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--n", "2", "--frobnicate"}).code, 2);
    EXPECT_EQ(run_cli({"pmf", "--p", "abc", "--q", "0.3", "--n", "2"}).code, 2);
}

TEST(CliExitCodes, InvariantViolationIsUsageError) {
    auto const r = run_cli({"pmf", "--p", "0.7", "--q", "0.5", "--n", "2"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("DetectorModel"), std::string::npos) << r.err;
    EXPECT_EQ(run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--squeezed-a", "1",
                       "--squeezed-zeta", "1.5"})
                  .code,
              2);
}

TEST(CliExitCodes, NumericFailure) {
    // no weight table for nbar = 1e9 fits under the cutoff cap
    auto const r = run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--thermal", "1e9"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("numeric failure"), std::string::npos) << r.err;
}

TEST(CliExitCodes, HelpAndVersionSucceed) {
    EXPECT_EQ(run_cli({"--help"}).code, 0);
    EXPECT_EQ(run_cli({"simulate", "--help"}).code, 0);
    auto const v = run_cli({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find("0.1.0"), std::string::npos);
}

// =============================================================================
// pmf
// =============================================================================

TEST(CliPmf, FixedNumberRows) {
    auto const r = run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--n", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.find('\r'), std::string::npos);
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"m", "k", "probability"}));
    double total = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        total += std::stod(rows[i][2]);
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(CliPmf, PoissonFactorizationReported) {
    auto const r =
        run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--poisson", "2", "--max-count", "15"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(diagnostic(r.err, "factorization_residual"), 1e-10);
    auto const rows = parse_csv(r.out);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LE(std::stoi(rows[i][0]), 15);
        EXPECT_LE(std::stoi(rows[i][1]), 15);
    }
}

TEST(CliPmf, GfCheckNormalization) {
    auto const r = run_cli({"pmf", "--p", "0.2", "--q", "0.5", "--squeezed-a", "2",
                            "--squeezed-zeta", "0.5", "--gf-check"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_LT(diagnostic(r.err, "normalization_residual"), 1e-10);
}

TEST(CliPmf, WritesOutputFile) {
    auto const path = std::filesystem::temp_directory_path() / "anticorr_cli_pmf.csv";
    auto const r = run_cli({"pmf", "--p", "0.3", "--q", "0.3", "--n", "1", "-o", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "m,k,probability");
    std::filesystem::remove(path);
}

// =============================================================================
// moments
// =============================================================================

TEST(CliMoments, ThermalAgainstOracle) {
    auto const r = run_cli(concat({"moments", "--json"}, kThermal));
    ASSERT_EQ(r.code, 0) << r.err;
    auto const j = json::parse(r.out);
    EXPECT_EQ(j["schema"], 1);
    EXPECT_DOUBLE_EQ(j["analytic"]["g2"].get<double>(), 2.0);
    EXPECT_NEAR(j["analytic"]["corr"].get<double>(), 0.31034, 1e-5);
    EXPECT_LT(j["max_relative_discrepancy"].get<double>(), 1e-6);
}

TEST(CliMoments, TextReport) {
    auto const r = run_cli(concat({"moments"}, kThermal));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("gf_oracle"), std::string::npos);
    EXPECT_NE(r.out.find("0.310344827586"), std::string::npos);
}

TEST(CliMoments, Table1Csv) {
    auto const r = run_cli({"moments", "--table1", "--csv", "--p", "0.3", "--q", "0.3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 6u);
    auto const& h = rows[0];
    // number column: (p n, 1 - 1/n, -p/(1 - p)) at n = 10
    EXPECT_EQ(rows[1][column(h, "family")], "number");
    EXPECT_NEAR(std::stod(rows[1][column(h, "mean")]), 3.0, 1e-12);
    EXPECT_NEAR(std::stod(rows[1][column(h, "g2")]), 0.9, 1e-12);
    EXPECT_NEAR(std::stod(rows[1][column(h, "corr")]), -0.3 / 0.7, 1e-11);
    // poisson column: (p lambda, 1, 0)
    EXPECT_NEAR(std::stod(rows[2][column(h, "mean")]), 0.6, 1e-12);
    EXPECT_EQ(rows[2][column(h, "g2")], "1");
    EXPECT_EQ(rows[2][column(h, "corr")], "0");
    // thermal column: (p nbar, 2, p nbar / (1 + p nbar))
    EXPECT_EQ(rows[3][column(h, "g2")], "2");
    EXPECT_NEAR(std::stod(rows[3][column(h, "corr")]), 0.45 / 1.45, 1e-11);
    EXPECT_EQ(rows[5][column(h, "differs")], "true");
}

TEST(CliMoments, Table1TextAndOverrides) {
    auto const r = run_cli({"moments", "--table1", "--p", "0.3", "--q", "0.3", "--thermal", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("nbar=2"), std::string::npos);
    EXPECT_NE(r.out.find("differ"), std::string::npos);
}

TEST(CliMoments, Table1RejectsUnequalEfficiencies) {
    auto const r = run_cli({"moments", "--table1", "--p", "0.2", "--q", "0.3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("p = q"), std::string::npos) << r.err;
}

TEST(CliMoments, PhaseAsPrintedBanner) {
    std::vector<std::string> const base{"moments", "--p", "0.3", "--q", "0.3", "--phase", "1"};
    auto const exact = run_cli(base);
    auto const printed = run_cli(concat(base, {"--as-printed"}));
    ASSERT_EQ(exact.code, 0);
    ASSERT_EQ(printed.code, 0);
    EXPECT_EQ(exact.out.find("N=1 enumeration"), std::string::npos);
    EXPECT_NE(printed.out.find("N=1 enumeration"), std::string::npos);
    EXPECT_NE(printed.out.find("-0.0225"), std::string::npos);
}

TEST(CliMoments, HighSqueezeReport) {
    auto const r = run_cli({"moments", "--json", "--as-printed", "--p", "0.3", "--q", "0.3",
                            "--squeezed-a", "5", "--squeezed-epsilon", "0.01"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const j = json::parse(r.out);
    ASSERT_TRUE(j.contains("high_squeeze"));
    EXPECT_FALSE(j["high_squeeze"]["outside_regime"].get<bool>());
    EXPECT_GT(j["high_squeeze"]["g2_deviation"].get<double>(), 0.0);
}

// =============================================================================
// simulate
// =============================================================================

TEST(CliSimulate, JsonMatchesSchema) {
    auto const schema = simulate_schema();
    for (auto const& family : std::vector<std::vector<std::string>>{
             {"--n", "10"},
             {"--poisson", "2"},
             {"--thermal", "1.5"},
             {"--squeezed-a", "2", "--squeezed-zeta", "0.5"},
             {"--phase", "10"},
             {"--phase", "0"}}) {
        auto const r = run_cli(concat({"simulate", "--p", "0.3", "--q", "0.3", "-M", "5000",
                                       "--seed", "3"},
                                      family));
        ASSERT_EQ(r.code, 0) << r.err;
        std::vector<std::string> problems;
        validate(schema, json::parse(r.out), "$", problems);
        EXPECT_TRUE(problems.empty()) << family[0] << ": " << problems.front();
    }
}

TEST(CliSimulate, ThermalBunchingWithinThreeSigma) {
    auto const r = run_cli(concat({"simulate", "-M", "1000000", "--seed", "7"}, kThermal));
    ASSERT_EQ(r.code, 0) << r.err;
    auto const j = json::parse(r.out);
    EXPECT_LT(std::abs(j["z_scores"]["g2"].get<double>()), 3.0);
    EXPECT_EQ(j["samples"], 1000000);
    EXPECT_TRUE(j.contains("wall_time_s"));
}

TEST(CliSimulate, SqueezedAntibunched) {
    auto const r = run_cli({"simulate", "--p", "0.3", "--q", "0.3", "--squeezed-a", "2",
                            "--squeezed-zeta", "0.5", "-M", "1000000", "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const j = json::parse(r.out);
    EXPECT_LT(j["estimates"]["corr"].get<double>(), 0.0);
    EXPECT_LT(std::abs(j["z_scores"]["corr"].get<double>()), 3.0);
}

TEST(CliSimulate, ByteIdenticalAcrossRunsAndWorkers) {
    auto const args = concat({"simulate", "-M", "200000", "--seed", "42", "--no-wall-time"},
                             kThermal);
    auto const first = run_cli(args);
    ASSERT_EQ(first.code, 0) << first.err;
    EXPECT_EQ(run_cli(args).out, first.out);
    for (std::string w : {"2", "8"}) {
        EXPECT_EQ(run_cli(concat(args, {"--workers", w})).out, first.out) << "workers=" << w;
    }
}

TEST(CliSimulate, CsvRow) {
    auto const r = run_cli(concat({"simulate", "--csv", "-M", "1000", "--seed", "1"},
                                  {"--p", "0.3", "--q", "0.3", "--squeezed-a", "2",
                                   "--squeezed-zeta", "0.5"}));
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].size(), rows[1].size());
    EXPECT_EQ(rows[1][column(rows[0], "parameters")], "squeezed(a=2, zeta=0.5)");
    EXPECT_EQ(rows[0].back(), "wall_time_s");
}

TEST(CliSimulate, SeedFromEnvironment) {
    auto const args = concat({"simulate", "-M", "1000", "--no-wall-time"}, kThermal);
    ::setenv("ANTICORR_SEED", "99", 1);
    auto const from_env = run_cli(args);
    auto const overridden = run_cli(concat(args, {"--seed", "5"}));
    ::setenv("ANTICORR_SEED", "not-a-number", 1);
    auto const malformed = run_cli(args);
    ::unsetenv("ANTICORR_SEED");
    ASSERT_EQ(from_env.code, 0);
    EXPECT_EQ(json::parse(from_env.out)["config"]["seed"], 99);
    EXPECT_EQ(json::parse(overridden.out)["config"]["seed"], 5);
    EXPECT_EQ(malformed.code, 2);
}

TEST(CliSimulate, ConfigFileWithFlagOverride) {
    auto const path = std::filesystem::temp_directory_path() / "anticorr_cli_run.ini";
    {
        std::ofstream cfg(path);
        cfg << "[simulate]\np = 0.3\nq = 0.3\nthermal = 1.5\nseries = 2000\nseed = 5\n";
    }
    auto const from_file = run_cli({"--config", path.string(), "simulate", "--no-wall-time"});
    auto const overridden =
        run_cli({"--config", path.string(), "simulate", "--no-wall-time", "--seed", "6"});
    std::filesystem::remove(path);
    ASSERT_EQ(from_file.code, 0) << from_file.err;
    auto const j = json::parse(from_file.out);
    EXPECT_EQ(j["config"]["series_count"], 2000);
    EXPECT_EQ(j["config"]["seed"], 5);
    EXPECT_EQ(json::parse(overridden.out)["config"]["seed"], 6);
}

TEST(CliSimulate, RejectsTooFewRepetitions) {
    EXPECT_EQ(run_cli(concat({"simulate", "-M", "10"}, kThermal)).code, 2);
}

// =============================================================================
// sweep
// =============================================================================

TEST(CliSweep, SqueezingCrossesZeroAtBetaRoot) {
    auto const r = run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--squeezed-a", "2", "--param",
                            "zeta", "--from", "0.05", "--to", "0.95", "--step", "0.01"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 92u);
    auto const& h = rows[0];
    double const root = anticorr::squeezed_uncorrelated_zeta(2.0);
    int crossings = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double const corr = std::stod(rows[i][column(h, "corr")]);
        double const beta = std::stod(rows[i][column(h, "beta")]);
        EXPECT_EQ(corr > 0, beta > 0);
        if (i > 1) {
            double const prev = std::stod(rows[i - 1][column(h, "corr")]);
            if ((prev < 0) != (corr < 0)) {
                ++crossings;
                double const z0 = std::stod(rows[i - 1][column(h, "value")]);
                double const z1 = std::stod(rows[i][column(h, "value")]);
                EXPECT_LE(z0, root);
                EXPECT_GE(z1, root);
            }
        }
    }
    EXPECT_EQ(crossings, 1);
}

TEST(CliSweep, PhaseCorrelationRisesTowardOne) {
    auto const r = run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--param", "N", "--from", "1",
                            "--to", "200", "--step", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 201u);
    auto const idx = column(rows[0], "corr");
    for (std::size_t i = 2; i < rows.size(); ++i) {
        EXPECT_GT(std::stod(rows[i][idx]), std::stod(rows[i - 1][idx]));
    }
    EXPECT_GT(std::stod(rows.back()[idx]), 0.9);
}

TEST(CliSweep, NumberCorrelationIndependentOfLength) {
    auto const r = run_cli({"sweep", "--p", "0.2", "--q", "0.5", "--param", "n", "--from", "1",
                            "--to", "60", "--step", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    auto const idx = column(rows[0], "corr");
    double const expected = -std::sqrt(0.1 / (0.8 * 0.5));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_NEAR(std::stod(rows[i][idx]), expected, 1e-11);
    }
}

TEST(CliSweep, EmpiricalColumns) {
    auto const r = run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--param", "nbar", "--from",
                            "0.5", "--to", "1.5", "--step", "0.5", "-M", "2000", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].back(), "tail_bias_bound");
    EXPECT_EQ(rows[1].size(), rows[0].size());
}

TEST(CliSweep, RejectsBadGrid) {
    EXPECT_EQ(run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--param", "nbar", "--from", "1",
                       "--to", "0", "--step", "0.5"})
                  .code,
              2);
    EXPECT_EQ(run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--param", "N", "--from", "1",
                       "--to", "2", "--step", "0.5"})
                  .code,
              2);
    EXPECT_EQ(run_cli({"sweep", "--p", "0.3", "--q", "0.3", "--param", "gamma", "--from", "1",
                       "--to", "2", "--step", "0.5"})
                  .code,
              2);
}

// =============================================================================
// mehler
// =============================================================================

TEST(CliMehler, DefaultGridPasses) {
    auto const r = run_cli({"mehler"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    ASSERT_EQ(rows.size(), 28u);
    auto const rel = column(rows[0], "rel_error");
    auto const status = column(rows[0], "status");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_LT(std::stod(rows[i][rel]), 1e-8);
        EXPECT_EQ(rows[i][status], "ok");
    }
}

TEST(CliMehler, ZeroArgumentExactAndOrigin) {
    auto const r = run_cli({"mehler", "--alpha", "0,1", "--t", "0,0.5"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto const rows = parse_csv(r.out);
    auto const& h = rows[0];
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[1][column(h, "abs_error")], "0");  // alpha 0, t 0
    EXPECT_EQ(rows[3][column(h, "abs_error")], "0");  // alpha 1, t 0
    EXPECT_NEAR(std::stod(rows[2][column(h, "closed_form")]), 1.154701, 1e-6);
}

TEST(CliMehler, FailingToleranceGivesNonzeroExit) {
    auto const r = run_cli({"mehler", "--alpha", "2", "--t", "0.9", "--tol", "1e-18"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("failed"), std::string::npos);
}
