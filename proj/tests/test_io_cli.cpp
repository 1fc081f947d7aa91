// Copyright 2026 The flagbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "flagbayes/cli.hpp"
#include "flagbayes/metrics.hpp"
#include "support.hpp"

#include <unistd.h>

using namespace flagbayes;
using flagbayes::support::test_rng;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("flagbayes_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string config_error(const std::string& text) {
    try {
        cli::parse_config(text);
    } catch (const cli::ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

// metrics

TEST(Metrics, TvdExamplesAndMetricAxioms) {
    EXPECT_DOUBLE_EQ(tvd(std::vector<double>{1, 0}, std::vector<double>{0, 1}), 1.0);
    EXPECT_DOUBLE_EQ(tvd(std::vector<double>{0.5, 0.5}, std::vector<double>{0.25, 0.75}), 0.25);
    EXPECT_THROW(tvd(std::vector<double>{1}, std::vector<double>{0.5, 0.5}), DimensionError);
    auto rng = test_rng(80);
    for (int t = 0; t < 200; ++t) {
        auto a = support::random_rates(16, rng), b = support::random_rates(16, rng), c = support::random_rates(16, rng);
        EXPECT_EQ(tvd(a, a), 0.0);
        EXPECT_GT(tvd(a, b), 0.0);
        EXPECT_EQ(tvd(a, b), tvd(b, a));
        EXPECT_LE(tvd(a, c), tvd(a, b) + tvd(b, c) + 1e-15);
        EXPECT_LE(tvd(a, b), 1.0);
    }
}

TEST(Metrics, ConvergenceCurveSampling) {
    auto rng = test_rng(81);
    PauliChannel phys(2, support::random_rates(16, rng));
    auto prior = from_means(phys.rates(), 2000.0);
    Estimator est(prior, Rule::ExactMaximal, {0.0, kDefaultMixtureCap, true});
    auto rights = maximal_rights(2);
    auto res = run_experiment(phys, FixedStack{maximal_stack(CliffordGate::cnot())}, NoiseModel{}, 250, 3);
    for (const auto& r : res.records) est.observe(rights, r.outcomes);

    auto two = convergence_curve(est.trace(), phys, 250);
    ASSERT_EQ(two.size(), 2u);
    EXPECT_EQ(two[0].n, 0u);
    EXPECT_NEAR(two[0].tvd, 0.0, 1e-15);  // no drift: curve starts at zero
    EXPECT_EQ(two[1].n, 250u);
    auto every = convergence_curve(est.trace(), phys, 100);
    std::vector<std::size_t> ns;
    for (const auto& p : every) ns.push_back(p.n);
    EXPECT_EQ(ns, (std::vector<std::size_t>{0, 100, 200, 250}));
    for (const auto& p : every) EXPECT_LT(p.tvd, 0.05);
    EXPECT_THROW(convergence_curve(est.trace(), phys, 0), std::invalid_argument);
}

// serialization

TEST(Io, ChannelRoundTrip) {
    auto rng = test_rng(82);
    PauliChannel ch(2, support::random_rates(16, rng));
    auto text = io::channel_to_json(ch).dump();
    EXPECT_EQ(io::parse_channel(text).rates(), ch.rates());
    auto sparse = io::parse_channel(R"({"n_q": 1, "rates": {"I": 0.9, "Z": 0.1}})");
    EXPECT_EQ(sparse.rates(), (std::vector<double>{0.9, 0.0, 0.0, 0.1}));
    EXPECT_THROW(io::parse_channel("{"), ParseError);
    EXPECT_THROW(io::parse_channel(R"({"n_q": 1, "rates": {"XX": 1.0}})"), std::exception);
}

TEST(Io, ShotLineRoundTrip) {
    ShotRecord rec;
    rec.step = 7;
    rec.outcomes = {1, -1};
    rec.layers = {PauliOperator::from_string("XZ"), PauliOperator::from_string("YI")};
    rec.truth = PauliIndex{6};
    auto line = io::shot_to_line(rec, 2, {true, true});
    EXPECT_EQ(line, R"({"step":7,"outcomes":[1,-1],"layers":["XZ","YI"],"truth":"XY"})");
    EXPECT_EQ(io::shot_from_line(line), rec);
    auto bare = io::shot_to_line(rec, 2, {false, false});
    EXPECT_EQ(bare, R"({"step":7,"outcomes":[1,-1]})");
    EXPECT_TRUE(io::shot_from_line(bare).layers.empty());
}

TEST(Io, MalformedShotLines) {
    for (const char* bad : {"", "[1,-1]", R"({"outcomes":[1,0]})", R"({"outcomes":"++"})",
                            R"({"outcomes":[1],"layers":["X","Z"]})", R"({"outcomes":[1],"layers":[3]})",
                            R"({"outcomes":[1],"step":-2})", R"({"outcomes":[1],"layers":["Q"]})", "{oops"}) {
        EXPECT_THROW(io::shot_from_line(bad), ParseError) << bad;
    }
}

TEST(Io, SnapshotAndCsvSchemas) {
    Snapshot s{3, 2003.0, {0.5, 0.25, 0.125, 0.125}, {0.01, 0.04, 0.0, 0.0}, Rule::Mixture};
    auto j = io::snapshot_to_json(s);
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    EXPECT_EQ(keys, (std::vector<std::string>{"n", "alpha0_eff", "means", "variances", "rule"}));
    EXPECT_EQ(j["means"]["X"].get<double>(), 0.25);
    EXPECT_EQ(j["rule"], "mixture");
    EXPECT_EQ(io::snapshot_line(s).find('\n'), std::string::npos);

    auto hist = lines_of(io::histogram_csv({0.25, 0.25, 0.25, 0.25}, s, {0.4, 0.3, 0.2, 0.1}));
    ASSERT_EQ(hist.size(), 5u);
    EXPECT_EQ(hist[0], "label,prior,updated,updated_std,physical");
    EXPECT_EQ(hist[1], "I,0.25,0.5,0.10000000000000001,0.40000000000000002");
    EXPECT_EQ(hist[2].substr(0, 2), "X,");

    std::vector<ConvergencePoint> curve{{0, 0.5, Rule::Zeroth}, {10, 0.25, Rule::Zeroth}};
    auto rows = lines_of(io::curve_csv_header() + io::curve_csv_rows(curve, 0.01, 9));
    EXPECT_EQ(rows, (std::vector<std::string>{"n,tvd,rule,p,seed", "0,0.5,zeroth,0.01,9", "10,0.25,zeroth,0.01,9"}));
    EXPECT_EQ(io::format_double(0.1), "0.10000000000000001");
}

// config

TEST(Config, DefaultsAndRoundTrip) {
    auto c = cli::parse_config("{}");
    EXPECT_EQ(c.gate, "cnot");
    EXPECT_EQ(c.alpha0, 2000.0);
    EXPECT_EQ(c.effective_rule(), Rule::ExactMaximal);
    auto full = cli::parse_config(R"({"gate": "h", "stack": "random_single", "shots": 50, "seed": 4,
        "prior": {"I": 0.7, "X": 0.1, "Y": 0.1, "Z": 0.1}, "compare": ["zeroth", "mixture"], "curve_stride": 5})");
    EXPECT_EQ(full.effective_rule(), Rule::FirstOrder);
    EXPECT_EQ(full.prior->front(), 0.7);
    auto again = cli::parse_config(cli::config_to_json(full).dump());
    EXPECT_EQ(cli::config_to_json(again), cli::config_to_json(full));
}

TEST(Config, ErrorsNameTheLine) {
    std::string text = "{\n  \"gate\": \"cnot\",\n  \"shots\": 0\n}";
    EXPECT_NE(config_error(text).find("line 3"), std::string::npos) << config_error(text);
    EXPECT_NE(config_error("{\n\"seed\": 1,\n\n\"colour\": 2}").find("line 4"), std::string::npos);
    EXPECT_NE(config_error("{\n\"gate\": \"toffoli\"}").find("line 2"), std::string::npos);
    EXPECT_NE(config_error(R"({"stack": "random_single", "rule": "exact_maximal"})").find("exact_maximal"),
              std::string::npos);
    EXPECT_NE(config_error(R"({"prior": {"II": 0.5, "XX": 0.5}, "gate": "x"})"), "");
    EXPECT_NE(config_error(R"({"prior": {"II": -1.0}})"), "");
    EXPECT_NE(config_error("[1, 2]"), "");
    EXPECT_NE(config_error("{\"shots\": "), "");
    EXPECT_EQ(config_error(R"({"gate": "2:h 0;cx 0 1", "noise_p": 0.01})"), "");
}

// commands

TEST(Cli, TablesMatchFixtures) {
    EXPECT_EQ(cli::cmd_tables("x", "maximal"), support::read_fixture("table1.csv"));
    EXPECT_EQ(cli::cmd_tables("cnot", "maximal"), support::read_fixture("table2.csv"));
    EXPECT_EQ(cli::cmd_tables("cx", "single"), support::read_fixture("table3.csv"));
    EXPECT_THROW(cli::cmd_tables("cnot", "double"), cli::ConfigError);
    EXPECT_THROW(cli::cmd_tables("ccz", "maximal"), ParseError);
}

TEST(Cli, SimulateIsDeterministicAndReplayable) {
    for (const char* stack : {"maximal", "random_single"}) {
        cli::ExperimentConfig c;
        c.stack = stack;
        c.shots = 400;
        c.seed = 11;
        c.emit_every = 100;
        c.noise_p = 0.01;
        auto a = cli::cmd_simulate(c);
        auto b = cli::cmd_simulate(c);
        EXPECT_EQ(a.records, b.records);
        auto dir_a = scratch_dir(std::string("a_") + stack), dir_b = scratch_dir(std::string("b_") + stack);
        cli::write_simulation(a, dir_a);
        cli::write_simulation(b, dir_b);
        for (const char* f : {"config.json", "prior.json", "physical.json", "shots.jsonl", "estimates.json",
                              "estimates_stream.jsonl", "histogram.csv", "curve.csv"}) {
            ASSERT_TRUE(fs::exists(dir_a / f)) << f;
            EXPECT_EQ(cli::detail::read_file(dir_a / f), cli::detail::read_file(dir_b / f)) << f;
        }
        EXPECT_EQ(lines_of(cli::detail::read_file(dir_a / "estimates_stream.jsonl")).size(), 4u);

        std::ifstream shots(dir_a / "shots.jsonl");
        std::ostringstream stream, warn;
        auto prior = io::parse_channel(cli::detail::read_file(dir_a / "prior.json"));
        auto res = cli::cmd_update(prior, shots, c, cli::OnError::Abort, &stream, warn);
        EXPECT_EQ(res.accepted, 400u);
        EXPECT_EQ(io::snapshot_document(res.final), cli::detail::read_file(dir_a / "estimates.json"));
        EXPECT_EQ(stream.str(), cli::detail::read_file(dir_a / "estimates_stream.jsonl"));
        fs::remove_all(dir_a);
        fs::remove_all(dir_b);
    }
}

TEST(Cli, UpdateIsOrderIndependentForExactRule) {
    cli::ExperimentConfig c;
    c.shots = 300;
    c.seed = 5;
    auto sim = cli::cmd_simulate(c);
    std::vector<std::string> lines;
    for (const auto& r : sim.records) lines.push_back(io::shot_to_line(r, 2));
    auto rng = test_rng(83);
    std::shuffle(lines.begin(), lines.end(), rng);
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    std::istringstream in(joined);
    std::ostringstream warn;
    auto res = cli::cmd_update(sim.prior, in, c, cli::OnError::Abort, nullptr, warn);
    for (std::size_t j = 0; j < 16; ++j) EXPECT_NEAR(res.final.means[j], sim.rules[0].final.means[j], 1e-12);
}

TEST(Cli, UpdateEmptyStreamAndBadRecords) {
    cli::ExperimentConfig c;
    auto rng = test_rng(84);
    PauliChannel prior(2, support::random_rates(16, rng));
    std::istringstream empty("");
    std::ostringstream warn;
    auto res = cli::cmd_update(prior, empty, c, cli::OnError::Skip, nullptr, warn);
    EXPECT_EQ(res.final.n, 0u);
    EXPECT_EQ(res.final.means, from_means(prior.rates(), c.alpha0).means());

    std::string mixed = "{\"outcomes\":[1,1,1,1]}\n\nnot json\n{\"outcomes\":[1,1]}\n{\"outcomes\":[-1,-1,-1,-1]}\n";
    std::istringstream in(mixed);
    auto skipped = cli::cmd_update(prior, in, c, cli::OnError::Skip, nullptr, warn);
    EXPECT_EQ(skipped.accepted, 2u);
    EXPECT_EQ(skipped.skipped, 2u);
    EXPECT_NE(warn.str().find("line 3"), std::string::npos);
    EXPECT_NE(warn.str().find("line 4"), std::string::npos);

    std::istringstream again(mixed);
    try {
        cli::cmd_update(prior, again, c, cli::OnError::Abort, nullptr, warn);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }

    // a mixture that outgrows its cap is a numeric-contract failure, never skipped
    c.stack = "random_single";
    c.rule = Rule::Mixture;
    std::string big;
    for (const char* r : {"XI", "IX", "ZI", "IZ", "XX", "ZZ", "YI", "IY", "XZ", "ZX", "YZ", "ZY"})
        big += std::string(R"({"outcomes":[-1],"layers":[")") + r + "\"]}\n";
    std::istringstream blow(big + big + big);
    EXPECT_THROW(cli::cmd_update(prior, blow, c, cli::OnError::Skip, nullptr, warn), MixtureBlowupError);
}

TEST(Cli, Presets) {
    auto fig4 = cli::preset("fig4", std::nullopt);
    ASSERT_EQ(fig4.runs.size(), 1u);
    EXPECT_EQ(fig4.runs[0].shots, 10000u);
    EXPECT_EQ(fig4.runs[0].noise_p, 0.0);
    EXPECT_EQ(cli::preset("fig7", 3).runs[0].noise_p, 0.01);
    auto fig9 = cli::preset("fig9", 2);
    ASSERT_EQ(fig9.runs.size(), 4u);
    EXPECT_EQ(fig9.runs[3].noise_p, 0.05);
    EXPECT_EQ(fig9.runs[0].shots, 20000u);
    EXPECT_THROW(cli::preset("fig5", std::nullopt), cli::ConfigError);

    auto dir = scratch_dir("fig6");
    cli::cmd_reproduce("fig6", 2, dir);
    auto curve = lines_of(cli::detail::read_file(dir / "curve.csv"));
    EXPECT_EQ(curve[0], "n,tvd,rule,p,seed");
    // 101 points per rule, two rules
    EXPECT_EQ(curve.size(), 1u + 2u * 101u);
    EXPECT_TRUE(fs::exists(dir / "estimates_zeroth.json"));
    fs::remove_all(dir);
}
