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

#ifndef FLAGBAYES_DIRICHLET_HPP
#define FLAGBAYES_DIRICHLET_HPP

#include <cmath>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "flagbayes/channel.hpp"

namespace flagbayes {

/// Dirichlet distribution over a K-component rate vector.
class DirichletState {
   public:
    DirichletState() = default;

    explicit DirichletState(std::vector<double> alphas) : alphas_(std::move(alphas)) {
        if (alphas_.size() < 2) {
            throw DimensionError("a Dirichlet state needs at least two components");
        }
        for (double a : alphas_) {
            if (!(a > 0.0) || !std::isfinite(a)) {
                throw std::invalid_argument("Dirichlet hyperparameters must be positive and finite");
            }
        }
        alpha0_ = std::accumulate(alphas_.begin(), alphas_.end(), 0.0);
    }

    std::size_t size() const { return alphas_.size(); }
    const std::vector<double>& alphas() const { return alphas_; }
    double alpha(std::size_t j) const { return alphas_.at(j); }
    double alpha0() const { return alpha0_; }

    std::vector<double> means() const {
        std::vector<double> m(alphas_.size());
        for (std::size_t j = 0; j < m.size(); ++j) {
            m[j] = alphas_[j] / alpha0_;
        }
        return m;
    }

    /// ln B(alpha) = sum ln Gamma(alpha_j) - ln Gamma(alpha0)
    double log_beta() const {
        double s = -std::lgamma(alpha0_);
        for (double a : alphas_) {
            s += std::lgamma(a);
        }
        return s;
    }

   private:
    std::vector<double> alphas_;
    double alpha0_ = 0.0;
};

struct Moments {
    std::vector<double> means;
    std::vector<double> variances;
    std::vector<double> covariance;  // K x K, row-major

    double cov(std::size_t i, std::size_t j) const { return covariance[i * means.size() + j]; }
};

inline Moments moments(const DirichletState& state) {
    Moments m;
    m.means = state.means();
    std::size_t k = state.size();
    double denom = state.alpha0() + 1.0;
    m.variances.resize(k);
    m.covariance.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        m.variances[i] = m.means[i] * (1.0 - m.means[i]) / denom;
        for (std::size_t j = 0; j < k; ++j) {
            double delta = (i == j) ? m.means[j] : 0.0;
            m.covariance[i * k + j] = (delta - m.means[i] * m.means[j]) / denom;
        }
    }
    return m;
}

/// E[lambda_{i_1} ... lambda_{i_k}] = B(alpha + sum_t e_{i_t}) / B(alpha),
/// evaluated in log-gamma space.
inline double higher_moment(const DirichletState& state, std::span<const std::size_t> indices) {
    if (indices.empty()) {
        throw std::invalid_argument("higher_moment needs at least one index");
    }
    std::map<std::size_t, std::size_t> mult;
    for (auto i : indices) {
        if (i >= state.size()) {
            throw DimensionError("moment index out of range");
        }
        ++mult[i];
    }
    double log_ratio = std::lgamma(state.alpha0()) - std::lgamma(state.alpha0() + double(indices.size()));
    for (auto [i, m] : mult) {
        double a = state.alpha(i);
        log_ratio += std::lgamma(a + double(m)) - std::lgamma(a);
    }
    return std::exp(log_ratio);
}

inline double higher_moment(const DirichletState& state, std::initializer_list<std::size_t> indices) {
    std::vector<std::size_t> v(indices);
    return higher_moment(state, std::span<const std::size_t>(v));
}

inline constexpr double kMeanFloor = 1e-9;

/// alpha_j = alpha0 * mean_j. Nonpositive means are floored at 1e-9 * alpha0
/// and the vector rescaled to keep the total alpha0; *floored counts them.
inline DirichletState from_means(std::span<const double> means, double alpha0, std::size_t* floored = nullptr) {
    if (!(alpha0 > 0.0)) {
        throw std::invalid_argument("alpha0 must be positive");
    }
    if (means.size() < 2) {
        throw DimensionError("need at least two means");
    }
    std::vector<double> alphas(means.size());
    std::size_t n_floored = 0;
    double sum = 0.0;
    for (std::size_t j = 0; j < means.size(); ++j) {
        if (!(means[j] >= 0.0) || !std::isfinite(means[j])) {
            throw std::invalid_argument("means must be finite and nonnegative");
        }
        alphas[j] = alpha0 * means[j];
        if (!(alphas[j] > 0.0)) {
            alphas[j] = kMeanFloor * alpha0;
            ++n_floored;
        }
        sum += alphas[j];
    }
    if (n_floored > 0) {
        for (double& a : alphas) {
            a *= alpha0 / sum;
        }
    }
    if (floored != nullptr) {
        *floored = n_floored;
    }
    return DirichletState(std::move(alphas));
}

inline DirichletState from_means(const std::vector<double>& means, double alpha0, std::size_t* floored = nullptr) {
    return from_means(std::span<const double>(means), alpha0, floored);
}

/// Conjugate update for a maximal-stack outcome: alpha_singled += 1.
inline DirichletState update_maximal(const DirichletState& state, PauliIndex singled) {
    if (singled.value >= state.size()) {
        throw DimensionError("singled index out of range");
    }
    std::vector<double> a = state.alphas();
    a[singled.value] += 1.0;
    return DirichletState(std::move(a));
}

struct MeansAndVariances {
    std::vector<double> means;
    std::vector<double> variances;
};

/// Posterior means and variances after n maximal-stack outcomes, in closed form.
inline MeansAndVariances closed_form_maximal(const DirichletState& prior, std::span<const CompatibleSet> sets) {
    std::size_t k = prior.size();
    std::vector<double> counts(k, 0.0);
    for (const auto& g : sets) {
        if (g.size() != 1) {
            throw std::invalid_argument("closed_form_maximal requires singleton compatible sets");
        }
        if (g.universe() != k) {
            throw DimensionError("compatible set and prior sizes differ");
        }
        counts[g.indices().front()] += 1.0;
    }
    double a0 = prior.alpha0();
    double n = double(sets.size());
    MeansAndVariances out;
    out.means.resize(k);
    out.variances.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
        double prior_mean = prior.alpha(j) / a0;
        out.means[j] = a0 / (a0 + n) * prior_mean + counts[j] / (a0 + n);
        out.variances[j] = out.means[j] * (1.0 - out.means[j]) / (a0 + n + 1.0);
    }
    return out;
}

inline double set_mass(std::span<const double> means, const CompatibleSet& g) {
    if (g.universe() != means.size()) {
        throw DimensionError("compatible set and mean vector sizes differ");
    }
    double s = 0.0;
    for (auto i : g.indices()) {
        s += means[i];
    }
    return s;
}

/// Exact posterior means after one outcome with compatible set g.
inline std::vector<double> single_step_general(const DirichletState& prior, const CompatibleSet& g) {
    auto mu = prior.means();
    double mass = set_mass(mu, g);
    if (!(mass > 0.0)) {
        throw ImpossibleOutcomeError("observed outcome has zero prior probability");
    }
    double a0 = prior.alpha0();
    std::vector<double> out(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        out[j] = a0 * mu[j] / (a0 + 1.0) + (g.contains(j) ? mu[j] / mass : 0.0) / (a0 + 1.0);
    }
    return out;
}

/// Generic-prior update: mean_j += sum_{i in g} Cov(j, i) / sum_{i in g} mean_i.
inline std::vector<double> covariance_form_step(std::span<const double> means, std::span<const double> covariance,
                                                const CompatibleSet& g) {
    std::size_t k = means.size();
    if (covariance.size() != k * k) {
        throw DimensionError("covariance must be K x K");
    }
    double mass = set_mass(means, g);
    if (!(mass > 0.0)) {
        throw ImpossibleOutcomeError("observed outcome has zero prior probability");
    }
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        double s = 0.0;
        for (auto i : g.indices()) {
            s += covariance[j * k + i];
        }
        out[j] = means[j] + s / mass;
    }
    return out;
}

}  // namespace flagbayes

#endif
