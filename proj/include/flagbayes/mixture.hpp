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

#ifndef FLAGBAYES_MIXTURE_HPP
#define FLAGBAYES_MIXTURE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "flagbayes/dirichlet.hpp"
#include "flagbayes/rng.hpp"

namespace flagbayes {

inline constexpr std::size_t kDefaultMixtureCap = 1'000'000;
inline constexpr double kMixturePruneWeight = 1e-15;

/// Convex combination of D(alpha + m_c) over integer offsets m_c.
class PosteriorMixture {
   public:
    struct Component {
        double weight;
        std::vector<std::uint32_t> offset;
    };

    explicit PosteriorMixture(DirichletState base, std::size_t cap = kDefaultMixtureCap)
        : base_(std::move(base)), cap_(cap), weights_{1.0}, offsets_(base_.size(), 0), hashes_{0} {}

    const DirichletState& base() const { return base_; }
    std::size_t size() const { return weights_.size(); }
    std::size_t cap() const { return cap_; }
    std::size_t steps() const { return steps_; }

    std::vector<Component> components() const {
        std::size_t k = base_.size();
        std::vector<Component> out;
        for (std::size_t c = 0; c < size(); ++c) {
            out.push_back({weights_[c], {offsets_.begin() + c * k, offsets_.begin() + (c + 1) * k}});
        }
        return out;
    }

    /// Likelihood sum_j c_j lambda_j. Children of component c get weight
    /// proportional to w_c c_i <lambda_i>_c, normalized over the whole mixture.
    /// Children with equal offsets merge.
    void update(std::span<const double> coefficients) {
        std::size_t k = base_.size();
        if (coefficients.size() != k) {
            throw DimensionError("likelihood coefficients and prior sizes differ");
        }
        std::vector<std::size_t> support;
        for (std::size_t i = 0; i < k; ++i) {
            if (coefficients[i] < 0.0 || !std::isfinite(coefficients[i])) {
                throw std::invalid_argument("likelihood coefficients must be finite and nonnegative");
            }
            if (coefficients[i] > 0.0) {
                support.push_back(i);
            }
        }
        if (size() * support.size() > cap_) {
            throw MixtureBlowupError("mixture would exceed " + std::to_string(cap_) +
                                     " components; switch to an approximate rule");
        }
        double denom = base_.alpha0() + double(steps_);
        std::vector<double> weights;
        std::vector<std::uint32_t> offsets;
        std::vector<std::uint64_t> hashes;
        std::vector<std::uint32_t> slots(std::bit_ceil(std::max<std::size_t>(16, 4 * size())), kEmpty);
        auto insert_slot = [&](std::uint32_t idx) {
            std::size_t mask = slots.size() - 1;
            std::size_t pos = splitmix64(hashes[idx]) & mask;
            while (slots[pos] != kEmpty) pos = (pos + 1) & mask;
            slots[pos] = idx;
        };
        double total = 0.0;
        for (std::size_t c = 0; c < size(); ++c) {
            const std::uint32_t* parent = offsets_.data() + c * k;
            for (auto i : support) {
                double w = weights_[c] * coefficients[i] * (base_.alpha(i) + double(parent[i])) / denom;
                total += w;
                std::uint64_t h = hashes_[c] + salt(i);
                std::size_t mask = slots.size() - 1;
                std::size_t pos = splitmix64(h) & mask;
                bool found = false;
                for (; slots[pos] != kEmpty; pos = (pos + 1) & mask) {
                    std::uint32_t idx = slots[pos];
                    if (hashes[idx] == h && is_child(offsets.data() + std::size_t(idx) * k, parent, i, k)) {
                        weights[idx] += w;
                        found = true;
                        break;
                    }
                }
                if (found) continue;
                auto idx = static_cast<std::uint32_t>(weights.size());
                weights.push_back(w);
                offsets.insert(offsets.end(), parent, parent + k);
                ++offsets[std::size_t(idx) * k + i];
                hashes.push_back(h);
                slots[pos] = idx;
                if (2 * weights.size() > slots.size()) {
                    slots.assign(2 * slots.size(), kEmpty);
                    for (std::uint32_t j = 0; j < weights.size(); ++j) insert_slot(j);
                }
            }
        }
        if (!(total > 0.0)) {
            throw ImpossibleOutcomeError("observed outcome has zero posterior probability");
        }
        std::size_t kept = 0;
        double mass = 0.0;
        for (std::size_t c = 0; c < weights.size(); ++c) {
            if (weights[c] / total < kMixturePruneWeight) continue;
            weights[kept] = weights[c];
            hashes[kept] = hashes[c];
            std::copy_n(offsets.begin() + c * k, k, offsets.begin() + kept * k);
            mass += weights[c];
            ++kept;
        }
        weights.resize(kept);
        hashes.resize(kept);
        offsets.resize(kept * k);
        for (double& w : weights) {
            w /= mass;
        }
        weights_ = std::move(weights);
        offsets_ = std::move(offsets);
        hashes_ = std::move(hashes);
        ++steps_;
    }

    void update(const CompatibleSet& g) {
        if (g.universe() != base_.size()) {
            throw DimensionError("compatible set and prior sizes differ");
        }
        std::vector<double> c(base_.size(), 0.0);
        for (auto i : g.indices()) {
            c[i] = 1.0;
        }
        update(std::span<const double>(c));
    }

    /// sum_c w_c (alpha_j + m_cj) / (alpha0 + n)
    std::vector<double> means() const {
        std::size_t k = base_.size();
        double denom = base_.alpha0() + double(steps_);
        std::vector<double> out(k, 0.0);
        for (std::size_t c = 0; c < size(); ++c) {
            for (std::size_t j = 0; j < k; ++j) {
                out[j] += weights_[c] * (base_.alpha(j) + double(offsets_[c * k + j]));
            }
        }
        for (double& v : out) {
            v /= denom;
        }
        return out;
    }

    std::vector<double> variances() const {
        std::size_t k = base_.size();
        double a = base_.alpha0() + double(steps_);
        std::vector<double> second(k, 0.0);
        for (std::size_t c = 0; c < size(); ++c) {
            for (std::size_t j = 0; j < k; ++j) {
                double aj = base_.alpha(j) + double(offsets_[c * k + j]);
                second[j] += weights_[c] * aj * (aj + 1.0) / (a * (a + 1.0));
            }
        }
        auto m = means();
        for (std::size_t j = 0; j < k; ++j) {
            second[j] = std::max(0.0, second[j] - m[j] * m[j]);
        }
        return second;
    }

   private:
    static constexpr std::uint32_t kEmpty = std::numeric_limits<std::uint32_t>::max();

    // offset hash is sum_j m_j salt(j), so a child's hash is its parent's plus salt(i)
    static std::uint64_t salt(std::size_t i) { return splitmix64(i + 1) | 1u; }

    static bool is_child(const std::uint32_t* candidate, const std::uint32_t* parent, std::size_t i, std::size_t k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (candidate[j] != parent[j] + (j == i ? 1u : 0u)) return false;
        }
        return true;
    }

    DirichletState base_;
    std::size_t cap_;
    std::size_t steps_ = 0;
    std::vector<double> weights_;
    std::vector<std::uint32_t> offsets_;  // size() rows of K counts
    std::vector<std::uint64_t> hashes_;
};

inline PosteriorMixture mixture_update(PosteriorMixture mix, const CompatibleSet& g) {
    mix.update(g);
    return mix;
}

inline std::vector<double> exact_means(const PosteriorMixture& mix) { return mix.means(); }

}  // namespace flagbayes

#endif
