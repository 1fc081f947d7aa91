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

#ifndef FLAGBAYES_TESTS_SUPPORT_HPP
#define FLAGBAYES_TESTS_SUPPORT_HPP

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flagbayes/channel.hpp"
#include "flagbayes/clifford.hpp"
#include "flagbayes/rng.hpp"

namespace flagbayes::support {

inline Rng test_rng(std::uint64_t index) { return substream(20261015, StreamTag::Test, index); }

/// Random circuit over H, S, Sdg, CX and Paulis.
inline CliffordGate random_gate(std::size_t n, Rng& rng, std::size_t depth = 12) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::vector<ElementaryGate> seq;
    for (std::size_t d = 0; d < depth; ++d) {
        int k = kind(rng);
        std::size_t a = qubit(rng);
        if (k == 6 && n > 1) {
            std::size_t b = qubit(rng);
            while (b == a) b = qubit(rng);
            seq.push_back({GateKind::CX, a, b});
        } else {
            static constexpr GateKind single[] = {GateKind::H, GateKind::S, GateKind::Sdg,
                                                  GateKind::X, GateKind::Y, GateKind::Z, GateKind::H};
            seq.push_back({single[k], a, 0});
        }
    }
    return CliffordGate(n, std::move(seq), "random");
}

inline PauliOperator random_pauli(std::size_t n, Rng& rng, bool signed_ = true) {
    std::uniform_int_distribution<std::size_t> idx(0, pauli_count(n) - 1);
    auto p = PauliOperator::from_index(n, PauliIndex{idx(rng)});
    if (signed_ && (rng() & 1u)) p = p.negated();
    return p;
}

inline std::vector<double> random_rates(std::size_t k, Rng& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> v(k);
    double s = 0.0;
    for (double& x : v) s += (x = e(rng));
    for (double& x : v) x /= s;
    return v;
}

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(FLAGBAYES_FIXTURE_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace flagbayes::support

#endif
