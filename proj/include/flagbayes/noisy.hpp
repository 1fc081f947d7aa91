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

#ifndef FLAGBAYES_NOISY_HPP
#define FLAGBAYES_NOISY_HPP

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "flagbayes/dirichlet.hpp"

namespace flagbayes {

namespace detail {

inline void check_flip_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("flip probability must lie in [0, 1]");
    }
}

}  // namespace detail

/// Outcome likelihood coefficients when every ancilla readout flips
/// independently with probability p: c_j = p^d (1-p)^(l-d), d the number of
/// layers whose ideal outcome under P_j differs from the observed one.
inline std::vector<double> pattern_likelihood(std::span<const PauliOperator> layers, std::span<const int> outcomes,
                                              double p) {
    detail::check_flip_probability(p);
    if (layers.empty() || layers.size() != outcomes.size()) {
        throw DimensionError("layers and outcomes must be nonempty and equally long");
    }
    std::size_t n_q = layers.front().num_qubits();
    std::size_t l = layers.size();
    std::vector<double> c(pauli_count(n_q));
    for (std::size_t j = 0; j < c.size(); ++j) {
        auto pj = PauliOperator::from_index(n_q, PauliIndex{j});
        std::size_t d = 0;
        for (std::size_t q = 0; q < l; ++q) {
            if (commutes(pj, layers[q]) != outcomes[q]) {
                ++d;
            }
        }
        c[j] = std::pow(p, double(d)) * std::pow(1.0 - p, double(l - d));
    }
    return c;
}

/// Maximal stack: c_j = p^wt (1-p)^(2n_q - wt), wt the Hamming distance
/// between the singled Pauli and P_j.
inline std::vector<double> noisy_likelihood_maximal(std::size_t n_q, double p, PauliIndex singled) {
    detail::check_flip_probability(p);
    if (singled.value >= pauli_count(n_q)) {
        throw DimensionError("singled index out of range");
    }
    auto pi = PauliOperator::from_index(n_q, singled);
    std::vector<double> c(pauli_count(n_q));
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::size_t wt = hamming_wt(pi, PauliOperator::from_index(n_q, PauliIndex{j}));
        c[j] = std::pow(p, double(wt)) * std::pow(1.0 - p, double(2 * n_q - wt));
    }
    return c;
}

/// Single layer: likelihood a + b sum_{i in g} lambda_i.
inline std::pair<double, double> noisy_likelihood_single(double p) {
    detail::check_flip_probability(p);
    return {p, 1.0 - 2.0 * p};
}

/// Exact posterior means of a Dirichlet prior after one noisy single-layer
/// outcome: w prior + (1 - w) noiseless step, w = p / (p + (1-2p) S).
inline std::vector<double> noisy_single_layer_step(const DirichletState& prior, const CompatibleSet& g, double p) {
    auto [a, b] = noisy_likelihood_single(p);
    auto mu = prior.means();
    double mass = set_mass(mu, g);
    double denom = a + b * mass;
    if (!(denom > 0.0)) {
        throw ImpossibleOutcomeError("observed outcome has zero probability under the noisy likelihood");
    }
    double w = a / denom;
    if (w >= 1.0) {
        return mu;
    }
    auto exact = single_step_general(prior, g);
    std::vector<double> out(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        out[j] = w * mu[j] + (1.0 - w) * exact[j];
    }
    return out;
}

}  // namespace flagbayes

#endif
