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

#ifndef FLAGBAYES_APPROX_HPP
#define FLAGBAYES_APPROX_HPP

#include <span>
#include <string>
#include <vector>

#include "flagbayes/dirichlet.hpp"

namespace flagbayes {

/// Large-alpha0 expansion of the posterior means to first order in 1/alpha0.
///
/// With S_t the prior mass of g_t and s_kq = sum_{i in g_k & g_q} mu_i / (S_k S_q):
///   Y2      = sum_{q<k} s_kq
///   X1(t)_j = mu_j [j in g_t] / S_t
///   X2(t)_j = X1(t)_j sum_{k != t} ([j in g_k] / S_k + sum_{q<k, q != t} s_kq)
/// Summed over t, X2 collapses to mu_j (A_j^2 - B_j + Y2 A_j - C_j) with
/// A_j = sum_t [j in g_t]/S_t, B_j = sum_t [j in g_t]/S_t^2 and
/// C_j = sum_t [j in g_t] r_t / S_t, r_t = sum_{k != t} s_tk.
/// Keeping these running makes each new outcome O(n K).
class FirstOrderAccumulator {
   public:
    explicit FirstOrderAccumulator(const DirichletState& prior)
        : mu_(prior.means()), alpha0_(prior.alpha0()), a_(mu_.size(), 0.0), b_(mu_.size(), 0.0), c_(mu_.size(), 0.0) {}

    std::size_t steps() const { return sets_.size(); }
    double alpha0() const { return alpha0_; }
    const std::vector<double>& prior_means() const { return mu_; }

    void add(const CompatibleSet& g) {
        if (double(sets_.size() + 1) >= alpha0_) {
            throw StrongCouplingError("first-order expansion needs n < alpha0 (n = " + std::to_string(sets_.size() + 1) +
                                      ", alpha0 = " + std::to_string(alpha0_) + ")");
        }
        double s_new = set_mass(mu_, g);
        if (!(s_new > 0.0)) {
            throw ImpossibleOutcomeError("observed outcome has zero prior probability");
        }
        // s between the new set and every earlier one
        double r_new = 0.0;
        for (std::size_t t = 0; t < sets_.size(); ++t) {
            double overlap = 0.0;
            for (auto i : g.indices()) {
                if (sets_[t].contains(i)) {
                    overlap += mu_[i];
                }
            }
            double s = overlap / (mass_[t] * s_new);
            if (s == 0.0) {
                continue;
            }
            y2_ += s;
            r_new += s;
            for (auto j : sets_[t].indices()) {
                c_[j] += s / mass_[t];
            }
        }
        for (auto j : g.indices()) {
            a_[j] += 1.0 / s_new;
            b_[j] += 1.0 / (s_new * s_new);
            c_[j] += r_new / s_new;
        }
        sets_.push_back(g);
        mass_.push_back(s_new);
    }

    double y2() const { return y2_; }

    std::vector<double> means() const {
        double n = double(sets_.size());
        std::vector<double> out(mu_.size());
        double norm = 1.0 + y2_ / alpha0_;
        for (std::size_t j = 0; j < mu_.size(); ++j) {
            double x1 = mu_[j] * a_[j];
            double x2 = mu_[j] * (a_[j] * a_[j] - b_[j] + y2_ * a_[j] - c_[j]);
            out[j] = alpha0_ / (alpha0_ + n) * mu_[j] + (x1 + x2 / alpha0_) / norm / (alpha0_ + n);
        }
        return out;
    }

   private:
    std::vector<double> mu_;
    double alpha0_;
    std::vector<double> a_, b_, c_;
    double y2_ = 0.0;
    std::vector<CompatibleSet> sets_;
    std::vector<double> mass_;
};

inline std::vector<double> approx_first_order(const DirichletState& prior, std::span<const CompatibleSet> sets) {
    FirstOrderAccumulator acc(prior);
    for (const auto& g : sets) {
        acc.add(g);
    }
    return acc.means();
}

/// One step of the zeroth-order recursion. t is 1-based; the weights use the
/// prior means, not the running ones.
inline std::vector<double> approx_zeroth_order_step(std::span<const double> running, std::span<const double> prior,
                                                    double alpha0, std::size_t t, const CompatibleSet& g) {
    if (t < 1) {
        throw std::invalid_argument("step index is 1-based");
    }
    if (running.size() != prior.size()) {
        throw DimensionError("running and prior means differ in size");
    }
    double mass = set_mass(prior, g);
    if (!(mass > 0.0)) {
        throw ImpossibleOutcomeError("observed outcome has zero prior probability");
    }
    double a = alpha0 + double(t);
    std::vector<double> out(running.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = (a - 1.0) / a * running[j] + (g.contains(j) ? prior[j] / mass : 0.0) / a;
    }
    return out;
}

/// Batch zeroth order: alpha0/(alpha0+n) mu_j + sum_t X1(t)_j / (alpha0+n).
inline std::vector<double> approx_zeroth_order(const DirichletState& prior, std::span<const CompatibleSet> sets) {
    auto mu = prior.means();
    double a0 = prior.alpha0();
    double n = double(sets.size());
    std::vector<double> x1(mu.size(), 0.0);
    for (const auto& g : sets) {
        double mass = set_mass(mu, g);
        if (!(mass > 0.0)) {
            throw ImpossibleOutcomeError("observed outcome has zero prior probability");
        }
        for (auto j : g.indices()) {
            x1[j] += mu[j] / mass;
        }
    }
    std::vector<double> out(mu.size());
    for (std::size_t j = 0; j < mu.size(); ++j) {
        out[j] = a0 / (a0 + n) * mu[j] + x1[j] / (a0 + n);
    }
    return out;
}

}  // namespace flagbayes

#endif
