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

#ifndef FLAGBAYES_CLIFFORD_HPP
#define FLAGBAYES_CLIFFORD_HPP

#include <algorithm>
#include <cctype>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "flagbayes/pauli.hpp"

namespace flagbayes {

enum class GateKind { H, S, Sdg, CX, X, Y, Z };

/// One elementary Clifford in a gate's construction sequence.
struct ElementaryGate {
    GateKind kind;
    std::size_t q0 = 0;
    std::size_t q1 = 0;  // target, CX only

    friend bool operator==(const ElementaryGate&, const ElementaryGate&) = default;
};

/// Conjugates a Pauli in place: P -> g P g^dagger (Aaronson-Gottesman rules).
inline PauliOperator conjugate_elementary(const ElementaryGate& g, const PauliOperator& p) {
    std::uint32_t x = p.x_bits();
    std::uint32_t z = p.z_bits();
    int phase = p.phase();
    auto bit = [](std::uint32_t v, std::size_t q) { return static_cast<int>((v >> q) & 1u); };
    const std::uint32_t m0 = 1u << g.q0;
    switch (g.kind) {
        case GateKind::H: {
            phase += 2 * (bit(x, g.q0) & bit(z, g.q0));
            bool xb = x & m0;
            bool zb = z & m0;
            x = (x & ~m0) | (zb ? m0 : 0u);
            z = (z & ~m0) | (xb ? m0 : 0u);
            break;
        }
        case GateKind::S:
            phase += 2 * (bit(x, g.q0) & bit(z, g.q0));
            if (x & m0) {
                z ^= m0;
            }
            break;
        case GateKind::Sdg:
            // S^3: X -> -Y, Y -> X.
            if (x & m0) {
                phase += 2 * (1 - bit(z, g.q0));
                z ^= m0;
            }
            break;
        case GateKind::CX: {
            const std::uint32_t m1 = 1u << g.q1;
            int xc = bit(x, g.q0);
            int zc = bit(z, g.q0);
            int xt = bit(x, g.q1);
            int zt = bit(z, g.q1);
            phase += 2 * (xc & zt & (xt ^ zc ^ 1));
            if (xc) {
                x ^= m1;
            }
            if (zt) {
                z ^= m0;
            }
            break;
        }
        case GateKind::X: phase += 2 * bit(z, g.q0); break;
        case GateKind::Z: phase += 2 * bit(x, g.q0); break;
        case GateKind::Y: phase += 2 * (bit(x, g.q0) ^ bit(z, g.q0)); break;
    }
    return PauliOperator(p.num_qubits(), x, z, phase);
}

inline ElementaryGate inverse_of(const ElementaryGate& g) {
    ElementaryGate inv = g;
    if (g.kind == GateKind::S) {
        inv.kind = GateKind::Sdg;
    } else if (g.kind == GateKind::Sdg) {
        inv.kind = GateKind::S;
    }
    return inv;
}

enum class Direction { Forward, Inverse };

/// A Clifford unitary U on n_q qubits, stored as its construction sequence
/// plus the tableaus of U.P.U^dagger and U^dagger.P.U on the generators.
class CliffordGate {
   public:
    CliffordGate() : CliffordGate(1, {}) {}

    CliffordGate(std::size_t n_q, std::vector<ElementaryGate> sequence, std::string name = {})
        : n_q_(n_q), sequence_(std::move(sequence)), name_(std::move(name)) {
        if (n_q == 0 || n_q > kMaxQubits) {
            throw DimensionError("gate qubit count out of range");
        }
        for (const auto& g : sequence_) {
            if (g.q0 >= n_q || (g.kind == GateKind::CX && (g.q1 >= n_q || g.q1 == g.q0))) {
                throw DimensionError("elementary gate qubit out of range");
            }
        }
        forward_ = build_images(sequence_);
        std::vector<ElementaryGate> inverse_seq;
        for (auto it = sequence_.rbegin(); it != sequence_.rend(); ++it) {
            inverse_seq.push_back(inverse_of(*it));
        }
        inverse_ = build_images(inverse_seq);
    }

    static CliffordGate identity(std::size_t n_q) { return CliffordGate(n_q, {}, "id" + std::to_string(n_q)); }

    /// CNOT with control 0 and target 1.
    static CliffordGate cnot() { return CliffordGate(2, {{GateKind::CX, 0, 1}}, "cnot"); }

    std::size_t num_qubits() const { return n_q_; }
    const std::vector<ElementaryGate>& sequence() const { return sequence_; }
    const std::string& name() const { return name_; }

    /// Image of generator X_s (is_z = false) or Z_s (is_z = true).
    const PauliOperator& image(std::size_t s, bool is_z, Direction dir = Direction::Forward) const {
        const auto& table = (dir == Direction::Forward) ? forward_ : inverse_;
        return table[2 * s + (is_z ? 1 : 0)];
    }

    PauliOperator conjugate(const PauliOperator& p, Direction dir = Direction::Forward) const {
        if (p.num_qubits() != n_q_) {
            throw DimensionError("Pauli and gate act on different qubit counts");
        }
        // P = i^(phase + #Y) * prod_s X_s^x Z_s^z
        int y_count = std::popcount(p.x_bits() & p.z_bits());
        PauliOperator out(n_q_, 0, 0, p.phase() + y_count);
        for (std::size_t s = 0; s < n_q_; ++s) {
            if (p.x(s)) {
                out *= image(s, false, dir);
            }
            if (p.z(s)) {
                out *= image(s, true, dir);
            }
        }
        return out;
    }

   private:
    std::vector<PauliOperator> build_images(const std::vector<ElementaryGate>& seq) const {
        std::vector<PauliOperator> images;
        images.reserve(2 * n_q_);
        for (std::size_t s = 0; s < n_q_; ++s) {
            images.push_back(PauliOperator::single(n_q_, s, 'X'));
            images.push_back(PauliOperator::single(n_q_, s, 'Z'));
        }
        for (const auto& g : seq) {
            for (auto& img : images) {
                img = conjugate_elementary(g, img);
            }
        }
        return images;
    }

    std::size_t n_q_;
    std::vector<ElementaryGate> sequence_;
    std::string name_;
    std::vector<PauliOperator> forward_;
    std::vector<PauliOperator> inverse_;
};

inline PauliOperator conjugate(const CliffordGate& g, const PauliOperator& p, Direction dir = Direction::Forward) {
    return g.conjugate(p, dir);
}

/// L = U^dagger R^dagger U, the left unitary satisfying R U L = U.
inline PauliOperator derive_left(const CliffordGate& g, const PauliOperator& r) {
    return g.conjugate(r.adjoint(), Direction::Inverse);
}

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace detail

/// Builds a gate from a registry name ("cnot", "cx", "cz", "swap", "h", "s",
/// "sdg", "x", "y", "z", "id1", "id2") or a circuit string
/// "<n_q>:<op> <qubits>;<op> <qubits>;..." with 0-based qubits, e.g. "2:h 0;cx 0 1".
inline CliffordGate parse_gate(std::string_view spec) {
    std::string name = detail::lower(detail::trim(spec));
    using K = GateKind;
    if (name == "cnot" || name == "cx") {
        return CliffordGate::cnot();
    }
    if (name == "cz") {
        return CliffordGate(2, {{K::H, 1}, {K::CX, 0, 1}, {K::H, 1}}, "cz");
    }
    if (name == "swap") {
        return CliffordGate(2, {{K::CX, 0, 1}, {K::CX, 1, 0}, {K::CX, 0, 1}}, "swap");
    }
    if (name == "h") return CliffordGate(1, {{K::H, 0}}, "h");
    if (name == "s") return CliffordGate(1, {{K::S, 0}}, "s");
    if (name == "sdg") return CliffordGate(1, {{K::Sdg, 0}}, "sdg");
    if (name == "x") return CliffordGate(1, {{K::X, 0}}, "x");
    if (name == "y") return CliffordGate(1, {{K::Y, 0}}, "y");
    if (name == "z") return CliffordGate(1, {{K::Z, 0}}, "z");
    if (name.size() == 3 && name.starts_with("id") && name[2] >= '1' && name[2] <= '8') {
        return CliffordGate::identity(static_cast<std::size_t>(name[2] - '0'));
    }

    auto colon = name.find(':');
    if (colon == std::string::npos) {
        throw ParseError("unsupported gate '" + std::string(spec) + "'");
    }
    std::size_t n_q = 0;
    try {
        n_q = std::stoul(name.substr(0, colon));
    } catch (const std::exception&) {
        throw ParseError("bad qubit count in gate spec '" + std::string(spec) + "'");
    }
    if (n_q == 0 || n_q > kMaxQubits) {
        throw ParseError("gate qubit count out of range in '" + std::string(spec) + "'");
    }
    std::vector<ElementaryGate> seq;
    std::stringstream body(name.substr(colon + 1));
    std::string item;
    while (std::getline(body, item, ';')) {
        item = detail::trim(item);
        if (item.empty()) {
            continue;
        }
        std::stringstream tokens(item);
        std::string op;
        tokens >> op;
        std::vector<std::size_t> qubits;
        std::size_t q;
        while (tokens >> q) {
            qubits.push_back(q);
        }
        if (!tokens.eof()) {
            throw ParseError("bad qubit list in '" + item + "'");
        }
        auto need = [&](std::size_t k) {
            if (qubits.size() != k) {
                throw ParseError("op '" + op + "' expects " + std::to_string(k) + " qubit(s)");
            }
            for (auto v : qubits) {
                if (v >= n_q) {
                    throw ParseError("qubit " + std::to_string(v) + " out of range in '" + item + "'");
                }
            }
        };
        if (op == "cx" || op == "cnot") {
            need(2);
            if (qubits[0] == qubits[1]) {
                throw ParseError("cx control equals target");
            }
            seq.push_back({K::CX, qubits[0], qubits[1]});
        } else if (op == "h" || op == "s" || op == "sdg" || op == "x" || op == "y" || op == "z") {
            need(1);
            K kind = op == "h" ? K::H : op == "s" ? K::S : op == "sdg" ? K::Sdg : op == "x" ? K::X : op == "y" ? K::Y : K::Z;
            seq.push_back({kind, qubits[0]});
        } else {
            throw ParseError("unknown op '" + op + "' in gate spec");
        }
    }
    return CliffordGate(n_q, std::move(seq), std::string(spec));
}

}  // namespace flagbayes

#endif
