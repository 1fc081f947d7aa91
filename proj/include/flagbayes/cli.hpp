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

#ifndef FLAGBAYES_CLI_HPP
#define FLAGBAYES_CLI_HPP

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flagbayes/io.hpp"

namespace flagbayes::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum ExitCode : int { kOk = 0, kConfig = 2, kData = 3, kNumeric = 4 };

struct ExperimentConfig {
    std::string gate = "cnot";
    std::string stack = "maximal";  // maximal | random_single
    double noise_p = 0.0;
    std::size_t shots = 10000;
    std::uint64_t seed = 1;
    double alpha0 = 2000.0;
    double delta = 0.02;
    std::optional<std::vector<double>> prior;  // nullopt: sampled
    std::optional<Rule> rule;                  // default follows the stack
    std::size_t emit_every = 0;
    std::size_t curve_stride = 100;
    double assumed_p = 0.0;  // readout flip rate assumed by mixture / noisy_single
    bool parallel = false;
    std::vector<Rule> compare;  // extra rules run on the same records

    Rule effective_rule() const {
        if (rule) {
            return *rule;
        }
        return stack == "maximal" ? Rule::ExactMaximal : Rule::FirstOrder;
    }
};

namespace detail {

inline std::size_t line_of(const std::string& text, const std::string& key) {
    auto pos = text.find("\"" + key + "\"");
    if (pos == std::string::npos) {
        return 1;
    }
    return 1 + std::size_t(std::count(text.begin(), text.begin() + std::ptrdiff_t(pos), '\n'));
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + p.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + p.string());
    }
    out << content;
}

}  // namespace detail

/// Checks the fields that do not depend on how the config was produced.
inline void validate(const ExperimentConfig& c) {
    CliffordGate gate = parse_gate(c.gate);
    if (gate.num_qubits() > kMaxChannelQubits) {
        throw ConfigError("gate acts on more than " + std::to_string(kMaxChannelQubits) + " qubits");
    }
    if (c.stack != "maximal" && c.stack != "random_single") {
        throw ConfigError("stack must be \"maximal\" or \"random_single\"");
    }
    if (c.shots < 1) {
        throw ConfigError("shots must be at least 1");
    }
    if (!(c.noise_p >= 0.0 && c.noise_p <= 1.0)) {
        throw ConfigError("noise_p must lie in [0, 1]");
    }
    if (!(c.alpha0 > 0.0)) {
        throw ConfigError("alpha0 must be positive");
    }
    if (!(c.delta >= 0.0)) {
        throw ConfigError("delta must be nonnegative");
    }
    if (!(c.assumed_p >= 0.0 && c.assumed_p <= 0.5)) {
        throw ConfigError("assumed_p must lie in [0, 0.5]");
    }
    if (c.curve_stride < 1) {
        throw ConfigError("curve_stride must be at least 1");
    }
    if (c.parallel && c.noise_p > 0.0) {
        throw ConfigError("parallel shots require noise_p = 0");
    }
    std::vector<Rule> rules{c.effective_rule()};
    rules.insert(rules.end(), c.compare.begin(), c.compare.end());
    for (Rule r : rules) {
        if (r == Rule::ExactMaximal && c.stack != "maximal") {
            throw ConfigError("rule exact_maximal requires the maximal stack");
        }
        if (r == Rule::NoisySingle && c.stack != "random_single") {
            throw ConfigError("rule noisy_single requires the random_single stack");
        }
    }
    if (c.prior && c.prior->size() != pauli_count(gate.num_qubits())) {
        throw ConfigError("inline prior has the wrong number of rates for the gate");
    }
}

/// Parses a JSON experiment config. Messages name the offending line.
inline ExperimentConfig parse_config(const std::string& text) {
    io::json j;
    try {
        j = io::json::parse(text);
    } catch (const io::json::parse_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) {
        throw ConfigError("config line 1: top level must be an object");
    }
    ExperimentConfig c;
    const io::json* prior = nullptr;
    auto fail = [&](const std::string& key, const std::string& what) {
        throw ConfigError("config line " + std::to_string(detail::line_of(text, key)) + ": '" + key + "' " + what);
    };
    auto number = [&](const std::string& key, const io::json& v) {
        if (!v.is_number()) fail(key, "must be a number");
        return v.get<double>();
    };
    auto count = [&](const std::string& key, const io::json& v) {
        if (!v.is_number_unsigned()) fail(key, "must be a nonnegative integer");
        return v.get<std::uint64_t>();
    };
    auto string = [&](const std::string& key, const io::json& v) {
        if (!v.is_string()) fail(key, "must be a string");
        return v.get<std::string>();
    };
    auto rule = [&](const std::string& key, const io::json& v) {
        try {
            return parse_rule(string(key, v));
        } catch (const ParseError& e) {
            fail(key, e.what());
        }
        return Rule::ExactMaximal;
    };
    for (const auto& [key, v] : j.items()) {
        if (key == "gate") {
            c.gate = string(key, v);
            try {
                parse_gate(c.gate);
            } catch (const ParseError& e) {
                fail(key, e.what());
            }
        } else if (key == "stack") {
            c.stack = string(key, v);
            if (c.stack != "maximal" && c.stack != "random_single") fail(key, "must be \"maximal\" or \"random_single\"");
        } else if (key == "noise_p") {
            c.noise_p = number(key, v);
            if (!(c.noise_p >= 0.0 && c.noise_p <= 1.0)) fail(key, "must lie in [0, 1]");
        } else if (key == "shots") {
            c.shots = count(key, v);
            if (c.shots < 1) fail(key, "must be at least 1");
        } else if (key == "seed") {
            c.seed = count(key, v);
        } else if (key == "alpha0") {
            c.alpha0 = number(key, v);
            if (!(c.alpha0 > 0.0)) fail(key, "must be positive");
        } else if (key == "delta") {
            c.delta = number(key, v);
            if (!(c.delta >= 0.0)) fail(key, "must be nonnegative");
        } else if (key == "prior") {
            if (!(v.is_string() && v.get<std::string>() == "sample") && !v.is_object()) {
                fail(key, "must be \"sample\" or an object of rates");
            }
            prior = &v;
        } else if (key == "rule") {
            c.rule = rule(key, v);
        } else if (key == "compare") {
            if (!v.is_array()) fail(key, "must be an array of rule names");
            for (const auto& r : v) c.compare.push_back(rule(key, r));
        } else if (key == "emit_every") {
            c.emit_every = count(key, v);
        } else if (key == "curve_stride") {
            c.curve_stride = count(key, v);
            if (c.curve_stride < 1) fail(key, "must be at least 1");
        } else if (key == "assumed_p") {
            c.assumed_p = number(key, v);
            if (!(c.assumed_p >= 0.0 && c.assumed_p <= 0.5)) fail(key, "must lie in [0, 0.5]");
        } else if (key == "parallel") {
            if (!v.is_boolean()) fail(key, "must be true or false");
            c.parallel = v.get<bool>();
        } else {
            fail(key, "is not a recognized key");
        }
    }
    // rates are keyed by labels whose length depends on the gate
    if (prior != nullptr && prior->is_object()) {
        try {
            std::size_t n_q = parse_gate(c.gate).num_qubits();
            c.prior = io::rates_from_json(n_q, *prior);
            PauliChannel check(n_q, *c.prior);
        } catch (const std::exception& e) {
            fail("prior", e.what());
        }
    }
    try {
        validate(c);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return c;
}

inline io::json config_to_json(const ExperimentConfig& c) {
    io::json j;
    j["gate"] = c.gate;
    j["stack"] = c.stack;
    j["noise_p"] = c.noise_p;
    j["shots"] = c.shots;
    j["seed"] = c.seed;
    j["alpha0"] = c.alpha0;
    j["delta"] = c.delta;
    if (c.prior) {
        j["prior"] = io::labeled(*c.prior);
    } else {
        j["prior"] = "sample";
    }
    j["rule"] = std::string(rule_name(c.effective_rule()));
    if (!c.compare.empty()) {
        io::json cmp = io::json::array();
        for (Rule r : c.compare) cmp.push_back(std::string(rule_name(r)));
        j["compare"] = cmp;
    }
    j["emit_every"] = c.emit_every;
    j["curve_stride"] = c.curve_stride;
    j["assumed_p"] = c.assumed_p;
    j["parallel"] = c.parallel;
    return j;
}

struct RuleOutput {
    Snapshot final;
    std::vector<Snapshot> stream;  // every emit_every shots
    std::vector<ConvergencePoint> curve;
};

struct SimulationOutput {
    ExperimentConfig config;
    std::size_t n_q = 0;
    PauliChannel prior;
    PauliChannel physical;
    std::vector<ShotRecord> records;
    std::vector<RuleOutput> rules;  // effective rule first, then compare
    std::size_t floored = 0;
};

inline std::vector<PauliOperator> configured_rights(const ExperimentConfig& c) {
    if (c.stack != "maximal") {
        return {};
    }
    return maximal_rights(parse_gate(c.gate).num_qubits());
}

inline Estimator::Options estimator_options(const ExperimentConfig& c) {
    Estimator::Options o;
    o.meas_p = c.assumed_p;
    o.record_trace = true;
    return o;
}

/// Feeds records in order. Records without layers use the configured stack.
inline RuleOutput estimate(const DirichletState& prior, Rule rule, const ExperimentConfig& c,
                           const std::vector<ShotRecord>& records, const PauliChannel* physical) {
    Estimator est(prior, rule, estimator_options(c));
    auto rights = configured_rights(c);
    RuleOutput out;
    for (const auto& rec : records) {
        const auto& layers = rec.layers.empty() ? rights : rec.layers;
        est.observe(layers, rec.outcomes);
        if (c.emit_every > 0 && est.steps() % c.emit_every == 0) {
            out.stream.push_back(est.snapshot());
        }
    }
    out.final = est.snapshot();
    if (physical != nullptr) {
        out.curve = convergence_curve(est.trace(), *physical, c.curve_stride);
    }
    return out;
}

/// Whole in-process pipeline: prior, drifted physical channel, shots, estimates.
inline SimulationOutput cmd_simulate(const ExperimentConfig& c) {
    validate(c);
    CliffordGate gate = parse_gate(c.gate);
    std::size_t n_q = gate.num_qubits();
    std::size_t k = pauli_count(n_q);
    SimulationOutput out;
    out.config = c;
    out.n_q = n_q;
    if (c.prior) {
        out.prior = PauliChannel(n_q, *c.prior);
    } else {
        Rng rng = substream(c.seed, StreamTag::Prior);
        out.prior = PauliChannel(n_q, sample_prior_means(k, rng));
    }
    {
        Rng rng = substream(c.seed, StreamTag::Drift);
        out.physical = perturb_channel(n_q, out.prior.rates(), c.delta, rng);
    }
    StackSource source = c.stack == "maximal" ? StackSource(FixedStack{maximal_stack(gate)})
                                              : StackSource(RandomSingleLayer{gate});
    auto noise = NoiseModel::uniform(c.noise_p);
    auto result = run_experiment(out.physical, source, noise, c.shots, c.seed,
                                 c.parallel ? ExecutionMode::Parallel : ExecutionMode::Sequential);
    out.records = std::move(result.records);
    DirichletState prior = from_means(out.prior.rates(), c.alpha0, &out.floored);
    out.rules.push_back(estimate(prior, c.effective_rule(), c, out.records, &out.physical));
    for (Rule r : c.compare) {
        out.rules.push_back(estimate(prior, r, c, out.records, &out.physical));
    }
    return out;
}

inline void write_simulation(const SimulationOutput& s, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& c = s.config;
    detail::write_file(dir / "config.json", config_to_json(c).dump(2) + "\n");
    detail::write_file(dir / "prior.json", io::channel_to_json(s.prior).dump(2) + "\n");
    detail::write_file(dir / "physical.json", io::channel_to_json(s.physical).dump(2) + "\n");
    io::ShotLineOptions opts;
    opts.layers = c.stack != "maximal";
    std::string shots;
    for (const auto& rec : s.records) {
        shots += io::shot_to_line(rec, s.n_q, opts) + "\n";
    }
    detail::write_file(dir / "shots.jsonl", shots);
    std::string curve = io::curve_csv_header();
    for (std::size_t r = 0; r < s.rules.size(); ++r) {
        const auto& ro = s.rules[r];
        std::string suffix = r == 0 ? "" : "_" + std::string(rule_name(ro.final.rule));
        detail::write_file(dir / ("estimates" + suffix + ".json"), io::snapshot_document(ro.final));
        detail::write_file(dir / ("histogram" + suffix + ".csv"),
                           io::histogram_csv(s.prior.rates(), ro.final, s.physical.rates()));
        if (!ro.stream.empty()) {
            std::string lines;
            for (const auto& snap : ro.stream) lines += io::snapshot_line(snap) + "\n";
            detail::write_file(dir / ("estimates_stream" + suffix + ".jsonl"), lines);
        }
        curve += io::curve_csv_rows(ro.curve, c.noise_p, c.seed);
    }
    detail::write_file(dir / "curve.csv", curve);
}

enum class OnError { Skip, Abort };

struct UpdateResult {
    Snapshot final;
    std::size_t accepted = 0;
    std::size_t skipped = 0;
};

/// Streams shot records through an estimator. Snapshots go to `stream` every
/// emit_every accepted shots; malformed records are skipped with a warning or
/// abort with ParseError.
inline UpdateResult cmd_update(const PauliChannel& prior_channel, std::istream& shots, const ExperimentConfig& c,
                               OnError on_error, std::ostream* stream, std::ostream& warn) {
    validate(c);
    if (prior_channel.num_qubits() != parse_gate(c.gate).num_qubits()) {
        throw DimensionError("prior channel and gate act on different qubit counts");
    }
    std::size_t floored = 0;
    DirichletState prior = from_means(prior_channel.rates(), c.alpha0, &floored);
    if (floored > 0) {
        warn << "warning: " << floored << " zero prior rates floored to keep alpha positive\n";
    }
    auto opts = estimator_options(c);
    opts.record_trace = false;
    Estimator est(prior, c.effective_rule(), opts);
    auto rights = configured_rights(c);
    UpdateResult res;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(shots, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            ShotRecord rec = io::shot_from_line(line);
            if (rec.layers.empty()) {
                if (rights.empty()) {
                    throw ParseError("record has no 'layers' and the configured stack is not fixed");
                }
                if (rec.outcomes.size() != rights.size()) {
                    throw ParseError("record has " + std::to_string(rec.outcomes.size()) + " outcomes, stack has " +
                                     std::to_string(rights.size()) + " layers");
                }
                est.observe(rights, rec.outcomes);
            } else {
                est.observe(rec.layers, rec.outcomes);
            }
        } catch (const NumericContractError&) {
            throw;
        } catch (const std::exception& e) {
            if (on_error == OnError::Abort) {
                throw ParseError("shots line " + std::to_string(line_no) + ": " + e.what());
            }
            warn << "warning: skipping shots line " << line_no << ": " << e.what() << "\n";
            ++res.skipped;
            continue;
        }
        ++res.accepted;
        if (stream != nullptr && c.emit_every > 0 && est.steps() % c.emit_every == 0) {
            *stream << io::snapshot_line(est.snapshot()) << "\n";
        }
    }
    res.final = est.snapshot();
    return res;
}

/// Outcome tables: "maximal" lists every outcome pattern of the maximal
/// stack, "single" every single-layer gadget with its L and both sets.
inline std::string cmd_tables(const std::string& gate_spec, const std::string& mode) {
    CliffordGate gate = parse_gate(gate_spec);
    if (mode == "maximal") {
        return io::outcome_table_csv(maximal_rights(gate.num_qubits()));
    }
    if (mode == "single") {
        return io::single_layer_table_csv(gate);
    }
    throw ConfigError("table stack must be \"maximal\" or \"single\"");
}

struct Preset {
    std::vector<ExperimentConfig> runs;
    bool write_records = true;
};

inline Preset preset(const std::string& name, std::optional<std::uint64_t> seed) {
    ExperimentConfig c;
    c.gate = "cnot";
    c.alpha0 = 2000.0;
    c.delta = 0.02;
    c.seed = seed.value_or(1);
    Preset p;
    if (name == "fig4" || name == "fig7") {
        c.stack = "maximal";
        c.shots = 10000;
        c.noise_p = name == "fig4" ? 0.0 : 0.01;
        c.rule = Rule::ExactMaximal;
        p.runs.push_back(c);
    } else if (name == "fig6") {
        c.stack = "random_single";
        c.shots = 1000;
        c.curve_stride = 10;
        c.rule = Rule::FirstOrder;
        c.compare = {Rule::Zeroth};
        p.runs.push_back(c);
    } else if (name == "fig9") {
        c.stack = "maximal";
        c.shots = 20000;
        c.rule = Rule::ExactMaximal;
        for (double noise : {0.0, 0.01, 0.02, 0.05}) {
            c.noise_p = noise;
            p.runs.push_back(c);
        }
        p.write_records = false;
    } else {
        throw ConfigError("unknown preset '" + name + "' (fig4, fig6, fig7, fig9)");
    }
    return p;
}

/// Runs a preset and writes its files. Multi-run presets share one curve.csv.
inline void cmd_reproduce(const std::string& name, std::optional<std::uint64_t> seed,
                          const std::filesystem::path& dir) {
    Preset p = preset(name, seed);
    if (p.write_records) {
        for (const auto& c : p.runs) {
            write_simulation(cmd_simulate(c), dir);
        }
        return;
    }
    std::filesystem::create_directories(dir);
    std::string curve = io::curve_csv_header();
    for (const auto& c : p.runs) {
        auto s = cmd_simulate(c);
        for (const auto& ro : s.rules) {
            curve += io::curve_csv_rows(ro.curve, c.noise_p, c.seed);
        }
    }
    detail::write_file(dir / "curve.csv", curve);
}

}  // namespace flagbayes::cli

#endif
