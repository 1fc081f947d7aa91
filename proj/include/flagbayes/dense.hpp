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

// Brute-force density-matrix reference for the gadget circuit. Shares no
// propagation code with the Pauli-frame simulator: every gate and channel is
// applied as an explicit matrix.

#ifndef FLAGBAYES_DENSE_HPP
#define FLAGBAYES_DENSE_HPP

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "flagbayes/channel.hpp"
#include "flagbayes/gadget.hpp"
#include "flagbayes/sim.hpp"

namespace flagbayes::dense {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;   // row-major
using Mat4 = std::array<cplx, 16>;  // row-major, first qubit is the high bit

inline constexpr std::size_t kMaxDenseQubits = 7;

inline Mat2 pauli_matrix(char letter) {
    const cplx i{0.0, 1.0};
    switch (letter) {
        case 'X': return {0, 1, 1, 0};
        case 'Y': return {0, -i, i, 0};
        case 'Z': return {1, 0, 0, -1};
        default: return {1, 0, 0, 1};
    }
}

inline Mat2 elementary_matrix(GateKind kind) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i{0.0, 1.0};
    switch (kind) {
        case GateKind::H: return {r, r, r, -r};
        case GateKind::S: return {1, 0, 0, i};
        case GateKind::Sdg: return {1, 0, 0, -i};
        case GateKind::X: return pauli_matrix('X');
        case GateKind::Y: return pauli_matrix('Y');
        case GateKind::Z: return pauli_matrix('Z');
        default: throw std::logic_error("not a single-qubit gate");
    }
}

/// |0><0| (x) I + |1><1| (x) P on (control, target).
inline Mat4 controlled(const Mat2& p) {
    Mat4 m{};
    m[0] = 1;
    m[5] = 1;
    m[10] = p[0];
    m[11] = p[1];
    m[14] = p[2];
    m[15] = p[3];
    return m;
}

inline Mat4 cnot_matrix() { return controlled(pauli_matrix('X')); }

/// Dense density matrix over N qubits; qubit j is bit (N-1-j) of the index.
class DensityMatrix {
   public:
    explicit DensityMatrix(std::size_t n) : n_(n), dim_(std::size_t{1} << n), rho_(dim_ * dim_) {
        if (n == 0 || n > kMaxDenseQubits) {
            throw DimensionError("dense simulation limited to " + std::to_string(kMaxDenseQubits) + " qubits");
        }
        rho_[0] = 1.0;
    }

    std::size_t num_qubits() const { return n_; }
    std::size_t dim() const { return dim_; }
    cplx& at(std::size_t r, std::size_t c) { return rho_[r * dim_ + c]; }
    cplx at(std::size_t r, std::size_t c) const { return rho_[r * dim_ + c]; }

    double trace() const {
        double t = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            t += rho_[k * dim_ + k].real();
        }
        return t;
    }

    /// rho -> G rho G^dagger
    void apply(std::size_t q, const Mat2& g) {
        std::size_t b = bit(q);
        for (std::size_t c = 0; c < dim_; ++c) {
            for (std::size_t r0 = 0; r0 < dim_; ++r0) {
                if (r0 & b) continue;
                std::size_t r1 = r0 | b;
                cplx v0 = at(r0, c), v1 = at(r1, c);
                at(r0, c) = g[0] * v0 + g[1] * v1;
                at(r1, c) = g[2] * v0 + g[3] * v1;
            }
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c0 = 0; c0 < dim_; ++c0) {
                if (c0 & b) continue;
                std::size_t c1 = c0 | b;
                cplx v0 = at(r, c0), v1 = at(r, c1);
                at(r, c0) = v0 * std::conj(g[0]) + v1 * std::conj(g[1]);
                at(r, c1) = v0 * std::conj(g[2]) + v1 * std::conj(g[3]);
            }
        }
    }

    /// rho -> G rho G^dagger for a two-qubit G on (qa, qb), qa the high bit of G.
    void apply(std::size_t qa, std::size_t qb, const Mat4& g) {
        std::size_t ba = bit(qa), bb = bit(qb);
        auto idx = [&](std::size_t base, std::size_t k) {
            return base | ((k & 2u) ? ba : 0u) | ((k & 1u) ? bb : 0u);
        };
        for (std::size_t c = 0; c < dim_; ++c) {
            for (std::size_t base = 0; base < dim_; ++base) {
                if (base & (ba | bb)) continue;
                std::array<cplx, 4> v;
                for (std::size_t k = 0; k < 4; ++k) v[k] = at(idx(base, k), c);
                for (std::size_t k = 0; k < 4; ++k) {
                    cplx s = 0;
                    for (std::size_t m = 0; m < 4; ++m) s += g[4 * k + m] * v[m];
                    at(idx(base, k), c) = s;
                }
            }
        }
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t base = 0; base < dim_; ++base) {
                if (base & (ba | bb)) continue;
                std::array<cplx, 4> v;
                for (std::size_t k = 0; k < 4; ++k) v[k] = at(r, idx(base, k));
                for (std::size_t k = 0; k < 4; ++k) {
                    cplx s = 0;
                    for (std::size_t m = 0; m < 4; ++m) s += v[m] * std::conj(g[4 * k + m]);
                    at(r, idx(base, k)) = s;
                }
            }
        }
    }

    /// rho -> P rho P for a Pauli string on the listed qubits.
    void apply_pauli(const std::vector<std::size_t>& qubits, const std::string& letters) {
        for (std::size_t k = 0; k < qubits.size(); ++k) {
            if (letters[k] != 'I') apply(qubits[k], pauli_matrix(letters[k]));
        }
    }

    /// rho -> sum_k w_k P_k rho P_k over Pauli strings on the listed qubits.
    void pauli_mixture(const std::vector<std::size_t>& qubits, const std::vector<double>& weights) {
        std::vector<cplx> acc(rho_.size(), 0.0);
        std::vector<cplx> original = rho_;
        std::size_t m = qubits.size();
        for (std::size_t k = 0; k < weights.size(); ++k) {
            if (weights[k] == 0.0) continue;
            rho_ = original;
            std::string letters(m, 'I');
            std::size_t v = k;
            for (std::size_t j = m; j-- > 0;) {
                letters[j] = "IXYZ"[v & 3u];
                v >>= 2;
            }
            apply_pauli(qubits, letters);
            for (std::size_t e = 0; e < acc.size(); ++e) acc[e] += weights[k] * rho_[e];
        }
        rho_ = std::move(acc);
    }

    /// Probability of each X-basis outcome pattern on the listed qubits
    /// (pattern bit set = outcome -1, first listed qubit most significant).
    std::vector<double> x_outcome_distribution(const std::vector<std::size_t>& qubits) const {
        DensityMatrix rotated = *this;
        for (auto q : qubits) rotated.apply(q, elementary_matrix(GateKind::H));
        std::vector<double> dist(std::size_t{1} << qubits.size(), 0.0);
        for (std::size_t k = 0; k < dim_; ++k) {
            std::size_t pattern = 0;
            for (auto q : qubits) pattern = (pattern << 1) | ((k & rotated.bit(q)) ? 1u : 0u);
            dist[pattern] += rotated.at(k, k).real();
        }
        return dist;
    }

   private:
    std::size_t bit(std::size_t q) const { return std::size_t{1} << (n_ - 1 - q); }

    std::size_t n_;
    std::size_t dim_;
    std::vector<cplx> rho_;
};

/// Data-register input: prep applied to |0...0>, then an accumulated Pauli frame.
struct InputSpec {
    std::optional<CliffordGate> prep;
    std::optional<PauliOperator> frame;
};

inline void apply_sequence(DensityMatrix& rho, const CliffordGate& gate) {
    for (const auto& g : gate.sequence()) {
        if (g.kind == GateKind::CX) {
            rho.apply(g.q0, g.q1, cnot_matrix());
        } else {
            rho.apply(g.q0, elementary_matrix(g.kind));
        }
    }
}

/// Exact outcome distribution (indexed by pattern_number) of one repetition
/// of the gadget circuit, including all noise channels.
inline std::vector<double> dense_outcome_distribution(const PauliChannel& phys, const std::vector<GadgetLayer>& layers,
                                                      const CliffordGate& gate, const NoiseModel& noise,
                                                      const InputSpec& input = {}) {
    std::size_t n_q = gate.num_qubits();
    std::size_t l = layers.size();
    if (n_q + l > kMaxDenseQubits) {
        throw DimensionError("data plus ancilla qubits exceed the dense limit");
    }
    if (phys.num_qubits() != n_q) {
        throw DimensionError("channel and gate qubit counts differ");
    }
    DensityMatrix rho(n_q + l);
    auto anc = [&](std::size_t q) { return n_q + q; };
    if (input.prep) apply_sequence(rho, *input.prep);
    if (input.frame) {
        for (std::size_t s = 0; s < n_q; ++s) {
            char c = input.frame->letter(s);
            if (c != 'I') rho.apply(s, pauli_matrix(c));
        }
    }
    for (std::size_t q = 0; q < l; ++q) rho.apply(anc(q), elementary_matrix(GateKind::H));

    auto flip = [&](std::size_t q, double p) {
        if (p > 0.0) rho.pauli_mixture({anc(q)}, {1.0 - p, 0.0, 0.0, p});
    };
    std::vector<double> depol(16, noise.p_cx / 15.0);
    depol[0] = 1.0 - noise.p_cx;
    auto controlled_pauli = [&](std::size_t q, const PauliOperator& p) {
        if (p.phase() % 2 != 0) throw std::logic_error("controlled non-Hermitian Pauli");
        for (std::size_t s = 0; s < n_q; ++s) {
            char c = p.letter(s);
            if (c == 'I') continue;
            rho.apply(anc(q), s, controlled(pauli_matrix(c)));
            if (noise.p_cx > 0.0) rho.pauli_mixture({anc(q), s}, depol);
        }
        if (p.phase() == 2) rho.apply(anc(q), pauli_matrix('Z'));
    };

    for (std::size_t q = 0; q < l; ++q) flip(q, noise.p_prep);
    for (std::size_t k = l; k-- > 0;) controlled_pauli(k, layers[k].l);
    apply_sequence(rho, gate);
    std::vector<std::size_t> data(n_q);
    for (std::size_t s = 0; s < n_q; ++s) data[s] = s;
    rho.pauli_mixture(data, phys.rates());
    for (std::size_t k = 0; k < l; ++k) controlled_pauli(k, layers[k].r);
    for (std::size_t q = 0; q < l; ++q) flip(q, noise.p_meas);

    std::vector<std::size_t> ancillas(l);
    for (std::size_t q = 0; q < l; ++q) ancillas[q] = anc(q);
    return rho.x_outcome_distribution(ancillas);
}

/// Dense matrix of a Hermitian Pauli (with sign) on n qubits.
inline std::vector<cplx> pauli_dense(const PauliOperator& p) {
    std::size_t n = p.num_qubits();
    std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> m(dim * dim, 0.0);
    const cplx phases[4] = {1.0, cplx{0, 1}, -1.0, cplx{0, -1}};
    for (std::size_t c = 0; c < dim; ++c) {
        cplx amp = phases[p.phase()];
        std::size_t r = c;
        for (std::size_t s = 0; s < n; ++s) {
            std::size_t b = std::size_t{1} << (n - 1 - s);
            Mat2 g = pauli_matrix(p.letter(s));
            std::size_t in = (c & b) ? 1 : 0;
            std::size_t out = (p.x(s) ? 1 - in : in);
            amp *= g[2 * out + in];
            r = out ? (r | b) : (r & ~b);
        }
        m[r * dim + c] = amp;
    }
    return m;
}

/// Dense unitary of a Clifford from its construction sequence.
inline std::vector<cplx> unitary_dense(const CliffordGate& gate) {
    std::size_t n = gate.num_qubits();
    std::size_t dim = std::size_t{1} << n;
    std::vector<cplx> u(dim * dim, 0.0);
    for (std::size_t k = 0; k < dim; ++k) u[k * dim + k] = 1.0;
    auto bit = [&](std::size_t q) { return std::size_t{1} << (n - 1 - q); };
    for (const auto& g : gate.sequence()) {
        // left-multiply each column by the elementary gate
        for (std::size_t c = 0; c < dim; ++c) {
            if (g.kind == GateKind::CX) {
                std::vector<cplx> col(dim);
                for (std::size_t r = 0; r < dim; ++r) {
                    std::size_t dst = (r & bit(g.q0)) ? (r ^ bit(g.q1)) : r;
                    col[dst] = u[r * dim + c];
                }
                for (std::size_t r = 0; r < dim; ++r) u[r * dim + c] = col[r];
            } else {
                Mat2 m = elementary_matrix(g.kind);
                std::size_t b = bit(g.q0);
                for (std::size_t r0 = 0; r0 < dim; ++r0) {
                    if (r0 & b) continue;
                    cplx v0 = u[r0 * dim + c], v1 = u[(r0 | b) * dim + c];
                    u[r0 * dim + c] = m[0] * v0 + m[1] * v1;
                    u[(r0 | b) * dim + c] = m[2] * v0 + m[3] * v1;
                }
            }
        }
    }
    return u;
}

inline std::vector<cplx> matmul(const std::vector<cplx>& a, const std::vector<cplx>& b, std::size_t dim) {
    std::vector<cplx> out(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t k = 0; k < dim; ++k)
            for (std::size_t j = 0; j < dim; ++j) out[i * dim + j] += a[i * dim + k] * b[k * dim + j];
    return out;
}

}  // namespace flagbayes::dense

#endif
