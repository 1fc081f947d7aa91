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

#ifndef FLAGBAYES_GADGET_HPP
#define FLAGBAYES_GADGET_HPP

#include <random>
#include <vector>

#include "flagbayes/channel.hpp"
#include "flagbayes/clifford.hpp"

namespace flagbayes {

/// Controlled-L before the gate and controlled-R after it, on one ancilla.
struct GadgetLayer {
    PauliOperator r;
    PauliOperator l;

    static GadgetLayer for_gate(const CliffordGate& gate, const PauliOperator& r) {
        if (r.num_qubits() != gate.num_qubits()) {
            throw DimensionError("layer Pauli and gate act on different qubit counts");
        }
        if (r.is_identity()) {
            throw std::invalid_argument("gadget layer R must be a non-identity Pauli");
        }
        if (!r.is_hermitian()) {
            throw std::invalid_argument("gadget layer R must be Hermitian");
        }
        return GadgetLayer{r, derive_left(gate, r)};
    }

    friend bool operator==(const GadgetLayer&, const GadgetLayer&) = default;
};

/// Layers attached to one Clifford gate. Layer 0 is innermost: its R acts
/// first after the gate and its L acts last before it.
class GadgetStack {
   public:
    GadgetStack(CliffordGate gate, std::vector<GadgetLayer> layers) : gate_(std::move(gate)), layers_(std::move(layers)) {
        if (layers_.empty() || layers_.size() > 2 * gate_.num_qubits()) {
            throw std::invalid_argument("a gadget stack needs 1..2n_q layers");
        }
        for (const auto& layer : layers_) {
            if (!(layer == GadgetLayer::for_gate(gate_, layer.r))) {
                throw std::invalid_argument("layer L does not satisfy R U L = U");
            }
        }
    }

    static GadgetStack from_rights(const CliffordGate& gate, const std::vector<PauliOperator>& rights) {
        std::vector<GadgetLayer> layers;
        for (const auto& r : rights) {
            layers.push_back(GadgetLayer::for_gate(gate, r));
        }
        return GadgetStack(gate, std::move(layers));
    }

    const CliffordGate& gate() const { return gate_; }
    const std::vector<GadgetLayer>& layers() const { return layers_; }
    std::size_t size() const { return layers_.size(); }
    std::size_t num_qubits() const { return gate_.num_qubits(); }

    std::vector<PauliOperator> rights() const {
        std::vector<PauliOperator> out;
        for (const auto& layer : layers_) {
            out.push_back(layer.r);
        }
        return out;
    }

   private:
    CliffordGate gate_;
    std::vector<GadgetLayer> layers_;
};

/// Right unitaries X_1, Z_1, X_2, Z_2, ... of the maximal stack.
inline std::vector<PauliOperator> maximal_rights(std::size_t n_q) {
    std::vector<PauliOperator> out;
    for (std::size_t s = 0; s < n_q; ++s) {
        out.push_back(PauliOperator::single(n_q, s, 'X'));
        out.push_back(PauliOperator::single(n_q, s, 'Z'));
    }
    return out;
}

inline GadgetStack maximal_stack(const CliffordGate& gate) {
    return GadgetStack::from_rights(gate, maximal_rights(gate.num_qubits()));
}

/// R drawn uniformly from the 4^n_q - 1 non-identity Paulis.
template <class Rng>
GadgetLayer random_single_layer(const CliffordGate& gate, Rng& rng) {
    std::size_t n_q = gate.num_qubits();
    std::uniform_int_distribution<std::size_t> pick(1, pauli_count(n_q) - 1);
    return GadgetLayer::for_gate(gate, PauliOperator::from_index(n_q, PauliIndex{pick(rng)}));
}

/// One row of an outcome table. outcomes[q] is the +-1 result of layer q.
struct OutcomeRow {
    std::vector<int> outcomes;
    CompatibleSet set;  // empty when the pattern is impossible (dependent layers)
};

/// Outcome pattern number k (0 <= k < 2^l): layer 0 is the most significant
/// bit and a set bit means -1.
inline std::vector<int> outcome_pattern(std::size_t layers, std::size_t k) {
    std::vector<int> out(layers);
    for (std::size_t q = 0; q < layers; ++q) {
        out[q] = ((k >> (layers - 1 - q)) & 1u) ? -1 : +1;
    }
    return out;
}

inline std::size_t pattern_number(const std::vector<int>& outcomes) {
    std::size_t k = 0;
    for (int b : outcomes) {
        k = (k << 1) | (b < 0 ? 1u : 0u);
    }
    return k;
}

/// Every outcome pattern with its compatible set, in pattern-number order.
inline std::vector<OutcomeRow> outcome_table(const std::vector<PauliOperator>& rights) {
    if (rights.empty()) {
        throw std::invalid_argument("outcome table needs at least one layer");
    }
    std::size_t n_q = rights.front().num_qubits();
    std::size_t l = rights.size();
    std::vector<std::vector<std::size_t>> members(std::size_t{1} << l);
    for (std::size_t i = 0; i < pauli_count(n_q); ++i) {
        PauliOperator p = PauliOperator::from_index(n_q, PauliIndex{i});
        std::vector<int> pattern;
        for (const auto& r : rights) {
            pattern.push_back(commutes(p, r));
        }
        members[pattern_number(pattern)].push_back(i);
    }
    std::vector<OutcomeRow> table;
    for (std::size_t k = 0; k < members.size(); ++k) {
        table.push_back(OutcomeRow{outcome_pattern(l, k), CompatibleSet(n_q, members[k])});
    }
    return table;
}

inline std::vector<OutcomeRow> outcome_table(const GadgetStack& stack) { return outcome_table(stack.rights()); }

}  // namespace flagbayes

#endif
