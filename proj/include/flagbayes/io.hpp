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

#ifndef FLAGBAYES_IO_HPP
#define FLAGBAYES_IO_HPP

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "flagbayes/estimator.hpp"
#include "flagbayes/gadget.hpp"
#include "flagbayes/metrics.hpp"
#include "flagbayes/sim.hpp"

namespace flagbayes::io {

using json = nlohmann::ordered_json;

inline std::string label(std::size_t n_q, std::size_t i) { return PauliOperator::from_index(n_q, PauliIndex{i}).str(); }

inline std::size_t qubits_for(std::size_t k) {
    for (std::size_t n = 1; n <= kMaxQubits; ++n) {
        if (pauli_count(n) == k) {
            return n;
        }
    }
    throw DimensionError("vector length " + std::to_string(k) + " is not a power of four");
}

/// {"II": v0, "IX": v1, ...} in index order.
inline json labeled(const std::vector<double>& v) {
    std::size_t n_q = qubits_for(v.size());
    json out = json::object();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[label(n_q, i)] = v[i];
    }
    return out;
}

// channel: {"n_q": 2, "rates": {"II": 0.9, ...}}; absent labels are zero

inline json channel_to_json(const PauliChannel& ch) {
    json j;
    j["n_q"] = ch.num_qubits();
    j["rates"] = labeled(ch.rates());
    return j;
}

inline std::vector<double> rates_from_json(std::size_t n_q, const json& rates) {
    if (!rates.is_object()) {
        throw ParseError("rates must be an object keyed by Pauli labels");
    }
    std::vector<double> out(pauli_count(n_q), 0.0);
    for (const auto& [key, value] : rates.items()) {
        PauliOperator p = PauliOperator::from_string(key);
        if (p.num_qubits() != n_q || p.phase() != 0) {
            throw ParseError("rate label '" + key + "' is not an unsigned " + std::to_string(n_q) + "-qubit Pauli");
        }
        if (!value.is_number()) {
            throw ParseError("rate for '" + key + "' is not a number");
        }
        out[p.index().value] = value.get<double>();
    }
    return out;
}

inline PauliChannel channel_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n_q") || !j.contains("rates")) {
        throw ParseError("channel JSON needs 'n_q' and 'rates'");
    }
    if (!j["n_q"].is_number_unsigned()) {
        throw ParseError("'n_q' must be a positive integer");
    }
    std::size_t n_q = j["n_q"].get<std::size_t>();
    if (n_q < 1 || n_q > kMaxChannelQubits) {
        throw ParseError("'n_q' out of range");
    }
    return PauliChannel(n_q, rates_from_json(n_q, j["rates"]));
}

inline PauliChannel parse_channel(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("channel file: ") + e.what());
    }
    return channel_from_json(j);
}

// shot records, one JSON object per line

struct ShotLineOptions {
    bool layers = false;
    bool truth = true;
};

inline std::string shot_to_line(const ShotRecord& rec, std::size_t n_q, ShotLineOptions opts = {}) {
    json j;
    j["step"] = rec.step;
    j["outcomes"] = rec.outcomes;
    if (opts.layers) {
        json ls = json::array();
        for (const auto& r : rec.layers) {
            ls.push_back(r.str());
        }
        j["layers"] = ls;
    }
    if (opts.truth && rec.truth) {
        j["truth"] = label(n_q, rec.truth->value);
    }
    return j.dump();
}

/// Parses one line. Layers stay empty when the record carries none.
inline ShotRecord shot_from_line(const std::string& line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed shot record: ") + e.what());
    }
    if (!j.is_object() || !j.contains("outcomes") || !j["outcomes"].is_array()) {
        throw ParseError("shot record needs an 'outcomes' array");
    }
    ShotRecord rec;
    if (j.contains("step")) {
        if (!j["step"].is_number_unsigned()) {
            throw ParseError("'step' must be a nonnegative integer");
        }
        rec.step = j["step"].get<std::size_t>();
    }
    for (const auto& o : j["outcomes"]) {
        if (!o.is_number_integer() || (o.get<int>() != 1 && o.get<int>() != -1)) {
            throw ParseError("outcomes must be +1 or -1");
        }
        rec.outcomes.push_back(o.get<int>());
    }
    if (j.contains("layers")) {
        if (!j["layers"].is_array()) {
            throw ParseError("'layers' must be an array of Pauli strings");
        }
        for (const auto& r : j["layers"]) {
            if (!r.is_string()) {
                throw ParseError("'layers' must be an array of Pauli strings");
            }
            rec.layers.push_back(PauliOperator::from_string(r.get<std::string>()));
        }
        if (rec.layers.size() != rec.outcomes.size()) {
            throw ParseError("'layers' and 'outcomes' differ in length");
        }
    }
    if (j.contains("truth")) {
        if (!j["truth"].is_string()) {
            throw ParseError("'truth' must be a Pauli label");
        }
        rec.truth = PauliOperator::from_string(j["truth"].get<std::string>()).index();
    }
    return rec;
}

// estimates

inline json snapshot_to_json(const Snapshot& s) {
    json j;
    j["n"] = s.n;
    j["alpha0_eff"] = s.alpha0_eff;
    j["means"] = labeled(s.means);
    j["variances"] = labeled(s.variances);
    j["rule"] = std::string(rule_name(s.rule));
    return j;
}

inline std::string snapshot_line(const Snapshot& s) { return snapshot_to_json(s).dump(); }

inline std::string snapshot_document(const Snapshot& s) { return snapshot_to_json(s).dump(2) + "\n"; }

// CSV

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline std::string curve_csv_header() { return "n,tvd,rule,p,seed\n"; }

inline std::string curve_csv_rows(const std::vector<ConvergencePoint>& curve, double p, std::uint64_t seed) {
    std::string out;
    for (const auto& pt : curve) {
        out += std::to_string(pt.n) + "," + format_double(pt.tvd) + "," + std::string(rule_name(pt.rule)) + "," +
               format_double(p) + "," + std::to_string(seed) + "\n";
    }
    return out;
}

inline std::string histogram_csv(const std::vector<double>& prior, const Snapshot& updated,
                                 const std::vector<double>& physical) {
    if (prior.size() != updated.means.size() || prior.size() != physical.size()) {
        throw DimensionError("histogram columns differ in length");
    }
    std::size_t n_q = qubits_for(prior.size());
    std::string out = "label,prior,updated,updated_std,physical\n";
    for (std::size_t i = 0; i < prior.size(); ++i) {
        out += label(n_q, i) + "," + format_double(prior[i]) + "," + format_double(updated.means[i]) + "," +
               format_double(std::sqrt(updated.variances[i])) + "," + format_double(physical[i]) + "\n";
    }
    return out;
}

/// Maximal-type table: one +-1 column per layer (named m_<R>), then the
/// compatible set as space-separated labels.
inline std::string outcome_table_csv(const std::vector<PauliOperator>& rights) {
    std::string out;
    for (const auto& r : rights) {
        out += "m_" + r.str() + ",";
    }
    out += "members\n";
    std::size_t n_q = rights.front().num_qubits();
    for (const auto& row : outcome_table(rights)) {
        for (int b : row.outcomes) {
            out += (b > 0 ? "+1," : "-1,");
        }
        std::string members;
        for (auto i : row.set.indices()) {
            members += (members.empty() ? "" : " ") + label(n_q, i);
        }
        out += members + "\n";
    }
    return out;
}

/// Every single-layer gadget of a gate: R, derived L, then [g] for m = +1 and
/// m = -1 as 1-based label numbers.
inline std::string single_layer_table_csv(const CliffordGate& gate) {
    std::size_t n_q = gate.num_qubits();
    std::string out = "R,L,g_plus,g_minus\n";
    auto numbers = [](const CompatibleSet& g) {
        std::string s;
        for (auto i : g.indices()) {
            s += (s.empty() ? "" : " ") + std::to_string(i + 1);
        }
        return s;
    };
    for (std::size_t i = 1; i < pauli_count(n_q); ++i) {
        auto layer = GadgetLayer::for_gate(gate, PauliOperator::from_index(n_q, PauliIndex{i}));
        std::vector<PauliOperator> rs{layer.r};
        std::vector<int> plus{+1}, minus{-1};
        out += layer.r.str() + "," + layer.l.str() + "," + numbers(compatible_set(rs, plus)) + "," +
               numbers(compatible_set(rs, minus)) + "\n";
    }
    return out;
}

}  // namespace flagbayes::io

#endif
