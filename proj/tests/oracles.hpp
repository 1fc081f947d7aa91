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

// Reference computations written straight from the definitions, sharing no
// code with the library beyond its value types.

#ifndef FLAGBAYES_TESTS_ORACLES_HPP
#define FLAGBAYES_TESTS_ORACLES_HPP

#include <functional>
#include <vector>

#include "flagbayes/dirichlet.hpp"

namespace flagbayes::oracle {

/// E[prod_i lambda_i^c_i] under Dir(alpha) as a ratio of rising factorials.
inline double dirichlet_moment(const std::vector<double>& alpha, const std::vector<int>& counts) {
    double a0 = 0.0;
    for (double a : alpha) a0 += a;
    double num = 1.0, den = 1.0;
    int total = 0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        for (int t = 0; t < counts[i]; ++t) num *= alpha[i] + t;
        total += counts[i];
    }
    for (int t = 0; t < total; ++t) den *= a0 + t;
    return num / den;
}

/// Posterior means and second moments after outcomes with likelihoods
/// sum_j c_t[j] lambda_j, by expanding the product over all index tuples.
struct TupleResult {
    std::vector<double> means;
    std::vector<double> second;
};

inline TupleResult tuple_posterior(const std::vector<double>& alpha, const std::vector<std::vector<double>>& coeffs) {
    std::size_t k = alpha.size();
    std::vector<int> counts(k, 0);
    double z = 0.0;
    std::vector<double> m1(k, 0.0), m2(k, 0.0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t t, double w) {
        if (t == coeffs.size()) {
            z += w * dirichlet_moment(alpha, counts);
            for (std::size_t j = 0; j < k; ++j) {
                ++counts[j];
                m1[j] += w * dirichlet_moment(alpha, counts);
                ++counts[j];
                m2[j] += w * dirichlet_moment(alpha, counts);
                counts[j] -= 2;
            }
            return;
        }
        for (std::size_t i = 0; i < k; ++i) {
            if (coeffs[t][i] == 0.0) continue;
            ++counts[i];
            rec(t + 1, w * coeffs[t][i]);
            --counts[i];
        }
    };
    rec(0, 1.0);
    for (std::size_t j = 0; j < k; ++j) {
        m1[j] /= z;
        m2[j] /= z;
    }
    return {m1, m2};
}

inline std::vector<double> indicator(const CompatibleSet& g) {
    std::vector<double> c(g.universe(), 0.0);
    for (auto i : g.indices()) c[i] = 1.0;
    return c;
}

/// First-order expansion evaluated literally from its definition, O(n^3 K).
inline std::vector<double> first_order_literal(const std::vector<double>& mu, double a0,
                                               const std::vector<CompatibleSet>& sets) {
    std::size_t n = sets.size(), k = mu.size();
    std::vector<double> S(n, 0.0);
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < k; ++i)
            if (sets[t].contains(i)) S[t] += mu[i];
    auto s = [&](std::size_t a, std::size_t b) {
        double v = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            if (sets[a].contains(i) && sets[b].contains(i)) v += mu[i];
        return v / (S[a] * S[b]);
    };
    double y2 = 0.0;
    for (std::size_t kk = 0; kk < n; ++kk)
        for (std::size_t q = 0; q < kk; ++q) y2 += s(kk, q);
    std::vector<double> out(k);
    for (std::size_t j = 0; j < k; ++j) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double dt = sets[t].contains(j) ? 1.0 : 0.0;
            double x1 = mu[j] * dt / S[t];
            double inner = 0.0;
            for (std::size_t kk = 0; kk < n; ++kk) {
                if (kk == t) continue;
                inner += (sets[kk].contains(j) ? 1.0 : 0.0) / S[kk];
                for (std::size_t q = 0; q < kk; ++q) {
                    if (q == t) continue;
                    inner += s(kk, q);
                }
            }
            double x2 = x1 * inner;
            acc += (x1 + x2 / a0) / (1.0 + y2 / a0);
        }
        out[j] = a0 / (a0 + double(n)) * mu[j] + acc / (a0 + double(n));
    }
    return out;
}

}  // namespace flagbayes::oracle

#endif
