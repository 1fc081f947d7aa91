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

#ifndef FLAGBAYES_PAULI_HPP
#define FLAGBAYES_PAULI_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "flagbayes/errors.hpp"

namespace flagbayes {

inline constexpr std::size_t kMaxQubits = 8;

/// Position of a Pauli in the dense rate vector.
///
/// Base-4 digits with qubit 0 as the most significant digit and the digit
/// order I=0, X=1, Y=2, Z=3, so for two qubits II=0, IX=1, ..., ZZ=15.
struct PauliIndex {
    std::size_t value = 0;

    friend constexpr bool operator==(PauliIndex, PauliIndex) = default;
    friend constexpr auto operator<=>(PauliIndex, PauliIndex) = default;
};

constexpr std::size_t pauli_count(std::size_t n_q) { return std::size_t{1} << (2 * n_q); }

/// An n-qubit Pauli operator in binary-symplectic form.
///
/// Represents i^phase * (sigma_0 (x) ... (x) sigma_{n-1}) where sigma_s is
/// I, X, Z or Y for bits (x_s, z_s) = (0,0), (1,0), (0,1), (1,1). Y is the
/// Hermitian Y, so Hermitian operators have even phase and sign() = (-1)^(phase/2).
/// Qubit 0 is the leftmost letter of the text form.
class PauliOperator {
   public:
    PauliOperator() = default;

    explicit PauliOperator(std::size_t n_q) : n_q_(n_q) { check_size(n_q); }

    PauliOperator(std::size_t n_q, std::uint32_t x_bits, std::uint32_t z_bits, int phase = 0)
        : n_q_(n_q), x_(x_bits), z_(z_bits), phase_(static_cast<std::uint8_t>(((phase % 4) + 4) % 4)) {
        check_size(n_q);
        std::uint32_t mask = (n_q == 32) ? ~0u : ((1u << n_q) - 1u);
        if ((x_bits & ~mask) || (z_bits & ~mask)) {
            throw DimensionError("Pauli bit vectors exceed qubit count");
        }
    }

    static PauliOperator identity(std::size_t n_q) { return PauliOperator(n_q); }

    /// Single-qubit Pauli 'letter' (one of IXYZ) on qubit q.
    static PauliOperator single(std::size_t n_q, std::size_t q, char letter) {
        if (q >= n_q) {
            throw DimensionError("qubit index out of range");
        }
        PauliOperator p(n_q);
        p.set_letter(q, letter);
        return p;
    }

    /// Parses "XZ", "-YY", "+IX", "iZ", "-iX". Letter 0 acts on qubit 0.
    static PauliOperator from_string(std::string_view text) {
        int phase = 0;
        if (!text.empty() && (text.front() == '+' || text.front() == '-')) {
            if (text.front() == '-') {
                phase = 2;
            }
            text.remove_prefix(1);
        }
        if (!text.empty() && text.front() == 'i') {
            phase += 1;
            text.remove_prefix(1);
        }
        if (text.empty() || text.size() > kMaxQubits) {
            throw ParseError("Pauli string must have 1.." + std::to_string(kMaxQubits) + " letters");
        }
        PauliOperator p(text.size());
        for (std::size_t q = 0; q < text.size(); ++q) {
            char c = text[q];
            if (c == '_') {
                c = 'I';
            }
            if (c != 'I' && c != 'X' && c != 'Y' && c != 'Z') {
                throw ParseError(std::string("invalid Pauli letter '") + text[q] + "'");
            }
            p.set_letter(q, c);
        }
        p.phase_ = static_cast<std::uint8_t>(phase);
        return p;
    }

    static PauliOperator from_index(std::size_t n_q, PauliIndex index) {
        check_size(n_q);
        if (index.value >= pauli_count(n_q)) {
            throw DimensionError("Pauli index out of range");
        }
        PauliOperator p(n_q);
        std::size_t v = index.value;
        for (std::size_t k = 0; k < n_q; ++k) {
            std::size_t q = n_q - 1 - k;
            p.set_letter(q, "IXYZ"[v & 3u]);
            v >>= 2;
        }
        return p;
    }

    /// Sign-stripped index.
    PauliIndex index() const {
        std::size_t v = 0;
        for (std::size_t q = 0; q < n_q_; ++q) {
            v = (v << 2) | digit(q);
        }
        return PauliIndex{v};
    }

    std::size_t num_qubits() const { return n_q_; }
    std::uint32_t x_bits() const { return x_; }
    std::uint32_t z_bits() const { return z_; }
    bool x(std::size_t q) const { return (x_ >> q) & 1u; }
    bool z(std::size_t q) const { return (z_ >> q) & 1u; }
    int phase() const { return phase_; }

    char letter(std::size_t q) const { return "IXYZ"[digit(q)]; }

    bool is_identity() const { return x_ == 0 && z_ == 0; }
    bool is_hermitian() const { return (phase_ & 1u) == 0; }

    /// +1 or -1. Only defined for Hermitian operators.
    int sign() const {
        if (!is_hermitian()) {
            throw std::logic_error("sign() of a non-Hermitian Pauli");
        }
        return phase_ == 0 ? +1 : -1;
    }

    /// Number of non-identity tensor factors.
    std::size_t weight() const { return static_cast<std::size_t>(std::popcount(x_ | z_)); }

    PauliOperator stripped() const { return PauliOperator(n_q_, x_, z_, 0); }
    PauliOperator negated() const { return PauliOperator(n_q_, x_, z_, phase_ + 2); }
    PauliOperator adjoint() const { return PauliOperator(n_q_, x_, z_, (4 - phase_) % 4); }

    /// Operator product (*this) * rhs, with exact phase.
    PauliOperator operator*(const PauliOperator& rhs) const {
        check_same(*this, rhs);
        int ph = phase_ + rhs.phase_;
        for (std::size_t q = 0; q < n_q_; ++q) {
            ph += product_phase(x(q), z(q), rhs.x(q), rhs.z(q));
        }
        return PauliOperator(n_q_, x_ ^ rhs.x_, z_ ^ rhs.z_, ph);
    }

    PauliOperator& operator*=(const PauliOperator& rhs) { return *this = *this * rhs; }

    friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

    bool equal_up_to_phase(const PauliOperator& other) const {
        return n_q_ == other.n_q_ && x_ == other.x_ && z_ == other.z_;
    }

    /// Text form, e.g. "XZ", "-YY", "iX", "-iZ".
    std::string str() const {
        std::string out;
        switch (phase_) {
            case 1: out = "i"; break;
            case 2: out = "-"; break;
            case 3: out = "-i"; break;
            default: break;
        }
        for (std::size_t q = 0; q < n_q_; ++q) {
            out += letter(q);
        }
        return out;
    }

    /// Sparse 1-based form used in the CNOT tables: "X1Z2", "-Y1Y2", "I".
    std::string sparse_str() const {
        std::string out = (phase_ == 2) ? "-" : (phase_ == 1 ? "i" : (phase_ == 3 ? "-i" : ""));
        bool any = false;
        for (std::size_t q = 0; q < n_q_; ++q) {
            if (letter(q) != 'I') {
                out += letter(q);
                out += std::to_string(q + 1);
                any = true;
            }
        }
        if (!any) {
            out += 'I';
        }
        return out;
    }

    /// Exponent k in sigma_a sigma_b = i^k sigma_(a xor b), single qubit.
    static int product_phase(bool x1, bool z1, bool x2, bool z2) {
        if (!x1 && !z1) {
            return 0;
        }
        if (x1 && z1) {
            return int(z2) - int(x2);
        }
        if (x1) {
            return int(z2) * (2 * int(x2) - 1);
        }
        return int(x2) * (1 - 2 * int(z2));
    }

   private:
    static void check_size(std::size_t n_q) {
        if (n_q == 0 || n_q > kMaxQubits) {
            throw DimensionError("qubit count must be in 1.." + std::to_string(kMaxQubits));
        }
    }

    static void check_same(const PauliOperator& a, const PauliOperator& b) {
        if (a.n_q_ != b.n_q_) {
            throw DimensionError("Pauli operators act on different qubit counts");
        }
    }

    std::size_t digit(std::size_t q) const {
        bool xq = x(q);
        bool zq = z(q);
        return xq ? (zq ? 2u : 1u) : (zq ? 3u : 0u);
    }

    void set_letter(std::size_t q, char letter) {
        std::uint32_t bit = 1u << q;
        x_ &= ~bit;
        z_ &= ~bit;
        if (letter == 'X' || letter == 'Y') {
            x_ |= bit;
        }
        if (letter == 'Z' || letter == 'Y') {
            z_ |= bit;
        }
    }

    std::size_t n_q_ = 1;
    std::uint32_t x_ = 0;
    std::uint32_t z_ = 0;
    std::uint8_t phase_ = 0;

    friend int commutes(const PauliOperator& p, const PauliOperator& q);
    friend std::size_t hamming_wt(const PauliOperator& p, const PauliOperator& q);
};

/// +1 if p and q commute, -1 if they anticommute.
inline int commutes(const PauliOperator& p, const PauliOperator& q) {
    PauliOperator::check_same(p, q);
    unsigned form = static_cast<unsigned>(std::popcount((p.x_ & q.z_) ^ (p.z_ & q.x_)));
    return (form & 1u) ? -1 : +1;
}

/// Number of differing entries of the (x || z) binary representations.
inline std::size_t hamming_wt(const PauliOperator& p, const PauliOperator& q) {
    PauliOperator::check_same(p, q);
    return static_cast<std::size_t>(std::popcount(p.x_ ^ q.x_) + std::popcount(p.z_ ^ q.z_));
}

inline std::string pauli_label(std::size_t n_q, PauliIndex index) {
    return PauliOperator::from_index(n_q, index).str();
}

}  // namespace flagbayes

#endif
