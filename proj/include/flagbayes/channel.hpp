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

#ifndef FLAGBAYES_CHANNEL_HPP
#define FLAGBAYES_CHANNEL_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "flagbayes/pauli.hpp"

namespace flagbayes {

inline constexpr std::size_t kMaxChannelQubits = 4;
inline constexpr double kChannelTolerance = 1e-12;

/// Stochastic Pauli channel: applies P_i with probability rates[i].
class PauliChannel {
   public:
    PauliChannel() : PauliChannel(1, {1.0, 0.0, 0.0, 0.0}) {}

    /// Rates must be nonnegative. A sum off by more than 1e-12 is
    /// renormalized here (and only here); adjustment() reports by how much.
    PauliChannel(std::size_t n_q, std::vector<double> rates) : n_q_(n_q), rates_(std::move(rates)) {
        if (n_q == 0 || n_q > kMaxChannelQubits) {
            throw DimensionError("channel qubit count must be in 1.." + std::to_string(kMaxChannelQubits));
        }
        if (rates_.size() != pauli_count(n_q)) {
            throw DimensionError("channel needs " + std::to_string(pauli_count(n_q)) + " rates, got " +
                                 std::to_string(rates_.size()));
        }
        double sum = 0.0;
        for (double r : rates_) {
            if (!(r >= 0.0) || !std::isfinite(r)) {
                throw std::invalid_argument("channel rates must be finite and nonnegative");
            }
            sum += r;
        }
        if (!(sum > 0.0)) {
            throw std::invalid_argument("channel rates sum to zero");
        }
        adjustment_ = std::abs(sum - 1.0);
        if (adjustment_ > kChannelTolerance) {
            for (double& r : rates_) {
                r /= sum;
            }
        }
    }

    static PauliChannel identity(std::size_t n_q) {
        std::vector<double> r(pauli_count(n_q), 0.0);
        r[0] = 1.0;
        return PauliChannel(n_q, std::move(r));
    }

    static PauliChannel uniform(std::size_t n_q) {
        return PauliChannel(n_q, std::vector<double>(pauli_count(n_q), 1.0 / double(pauli_count(n_q))));
    }

    static PauliChannel deterministic(std::size_t n_q, PauliIndex which) {
        std::vector<double> r(pauli_count(n_q), 0.0);
        r.at(which.value) = 1.0;
        return PauliChannel(n_q, std::move(r));
    }

    std::size_t num_qubits() const { return n_q_; }
    std::size_t size() const { return rates_.size(); }
    const std::vector<double>& rates() const { return rates_; }
    double rate(PauliIndex i) const { return rates_.at(i.value); }
    double adjustment() const { return adjustment_; }

   private:
    std::size_t n_q_;
    std::vector<double> rates_;
    double adjustment_ = 0.0;
};

/// Indices of Pauli errors consistent with a gadget stack's outcomes.
class CompatibleSet {
   public:
    CompatibleSet() = default;

    CompatibleSet(std::size_t n_q, std::vector<std::size_t> indices) : n_q_(n_q), mask_(pauli_count(n_q), 0) {
        for (auto i : indices) {
            if (i >= mask_.size()) {
                throw DimensionError("compatible-set index out of range");
            }
            mask_[i] = 1;
        }
        for (std::size_t i = 0; i < mask_.size(); ++i) {
            if (mask_[i]) {
                indices_.push_back(i);
            }
        }
    }

    static CompatibleSet full(std::size_t n_q) {
        std::vector<std::size_t> all(pauli_count(n_q));
        std::iota(all.begin(), all.end(), std::size_t{0});
        return CompatibleSet(n_q, std::move(all));
    }

    static CompatibleSet singleton(std::size_t n_q, PauliIndex i) { return CompatibleSet(n_q, {i.value}); }

    std::size_t num_qubits() const { return n_q_; }
    std::size_t universe() const { return mask_.size(); }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    const std::vector<std::size_t>& indices() const { return indices_; }
    bool contains(std::size_t i) const { return i < mask_.size() && mask_[i]; }

    friend bool operator==(const CompatibleSet& a, const CompatibleSet& b) {
        return a.n_q_ == b.n_q_ && a.indices_ == b.indices_;
    }

   private:
    std::size_t n_q_ = 1;
    std::vector<char> mask_;
    std::vector<std::size_t> indices_;
};

/// Rank over GF(2) of the symplectic rows (x || z) of the given Paulis.
inline std::size_t gf2_rank(std::span<const PauliOperator> layers) {
    std::vector<std::uint64_t> rows;
    for (const auto& p : layers) {
        rows.push_back((std::uint64_t{p.x_bits()} << 32) | p.z_bits());
    }
    std::size_t rank = 0;
    for (int bit = 63; bit >= 0; --bit) {
        std::uint64_t m = std::uint64_t{1} << bit;
        auto pivot = std::find_if(rows.begin() + rank, rows.end(), [m](std::uint64_t r) { return r & m; });
        if (pivot == rows.end()) {
            continue;
        }
        std::swap(*pivot, rows[rank]);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k != rank && (rows[k] & m)) {
                rows[k] ^= rows[rank];
            }
        }
        ++rank;
    }
    return rank;
}

/// All i with commutes(P_i, R_q) == b_q for every layer q.
inline CompatibleSet compatible_set(std::span<const PauliOperator> layers, std::span<const int> outcomes) {
    if (layers.empty() || layers.size() != outcomes.size()) {
        throw DimensionError("need equally many layers and outcomes (at least one)");
    }
    std::size_t n_q = layers.front().num_qubits();
    if (n_q > kMaxChannelQubits) {
        throw DimensionError("compatible sets limited to " + std::to_string(kMaxChannelQubits) + " qubits");
    }
    for (std::size_t q = 0; q < layers.size(); ++q) {
        if (layers[q].num_qubits() != n_q) {
            throw DimensionError("layers act on different qubit counts");
        }
        if (layers[q].is_identity()) {
            throw std::invalid_argument("gadget layer R must be a non-identity Pauli");
        }
        if (outcomes[q] != 1 && outcomes[q] != -1) {
            throw std::invalid_argument("layer outcomes must be +1 or -1");
        }
    }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < pauli_count(n_q); ++i) {
        PauliOperator p = PauliOperator::from_index(n_q, PauliIndex{i});
        bool ok = true;
        for (std::size_t q = 0; q < layers.size() && ok; ++q) {
            ok = commutes(p, layers[q]) == outcomes[q];
        }
        if (ok) {
            members.push_back(i);
        }
    }
    if (members.empty()) {
        throw ContradictionError("layer outcomes are inconsistent: no Pauli error is compatible");
    }
    return CompatibleSet(n_q, std::move(members));
}

/// Sum of rates over the set; the likelihood of the observed outcome pattern.
inline double outcome_probability(const PauliChannel& ch, const CompatibleSet& g) {
    if (g.universe() != ch.size()) {
        throw DimensionError("compatible set and channel sizes differ");
    }
    double sum = 0.0;
    for (auto i : g.indices()) {
        sum += ch.rates()[i];
    }
    return sum;
}

/// Effective channel conditioned on the outcome, and its normalization.
inline std::pair<PauliChannel, double> post_selected_channel(const PauliChannel& ch, const CompatibleSet& g) {
    double norm = outcome_probability(ch, g);
    if (!(norm > 0.0)) {
        throw ImpossibleOutcomeError("post-selection on an outcome of zero probability");
    }
    std::vector<double> rates(ch.size(), 0.0);
    for (auto i : g.indices()) {
        rates[i] = ch.rates()[i] / norm;
    }
    return {PauliChannel(ch.num_qubits(), std::move(rates)), norm};
}

/// Draws Pauli indices with probability rates[i] by inverse-CDF lookup.
class ChannelSampler {
   public:
    explicit ChannelSampler(const PauliChannel& ch) : cdf_(ch.size()) {
        std::partial_sum(ch.rates().begin(), ch.rates().end(), cdf_.begin());
        last_nonzero_ = 0;
        for (std::size_t i = 0; i < ch.size(); ++i) {
            if (ch.rates()[i] > 0.0) {
                last_nonzero_ = i;
            }
        }
    }

    template <class Rng>
    PauliIndex operator()(Rng& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, cdf_.back())(rng);
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - cdf_.begin());
        return PauliIndex{std::min(i, last_nonzero_)};
    }

   private:
    std::vector<double> cdf_;
    std::size_t last_nonzero_;
};

template <class Rng>
PauliIndex sample_error(const PauliChannel& ch, Rng& rng) {
    return ChannelSampler(ch)(rng);
}

}  // namespace flagbayes

#endif
