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

#ifndef FLAGBAYES_ESTIMATOR_HPP
#define FLAGBAYES_ESTIMATOR_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flagbayes/approx.hpp"
#include "flagbayes/dirichlet.hpp"
#include "flagbayes/mixture.hpp"
#include "flagbayes/noisy.hpp"

namespace flagbayes {

enum class Rule { ExactMaximal, Zeroth, FirstOrder, Mixture, NoisySingle };

inline std::string_view rule_name(Rule r) {
    switch (r) {
        case Rule::ExactMaximal: return "exact_maximal";
        case Rule::Zeroth: return "zeroth";
        case Rule::FirstOrder: return "first_order";
        case Rule::Mixture: return "mixture";
        case Rule::NoisySingle: return "noisy_single";
    }
    return "?";
}

inline Rule parse_rule(std::string_view s) {
    for (Rule r : {Rule::ExactMaximal, Rule::Zeroth, Rule::FirstOrder, Rule::Mixture, Rule::NoisySingle}) {
        if (rule_name(r) == s) {
            return r;
        }
    }
    throw ParseError("unknown update rule '" + std::string(s) + "'");
}

struct Snapshot {
    std::size_t n = 0;
    double alpha0_eff = 0.0;
    std::vector<double> means;
    std::vector<double> variances;
    Rule rule = Rule::ExactMaximal;
};

/// means[t] is the estimate after t shots; means[0] is the prior.
struct UpdateTrace {
    Rule rule = Rule::ExactMaximal;
    std::vector<CompatibleSet> sets;
    std::vector<std::vector<double>> means;
    double alpha0_eff = 0.0;

    const std::vector<double>& final_means() const { return means.back(); }
};

/// Sequential estimator: one owner feeds shots in arrival order.
class Estimator {
   public:
    struct Options {
        double meas_p = 0.0;  // readout flip probability assumed by mixture and noisy_single
        std::size_t mixture_cap = kDefaultMixtureCap;
        bool record_trace = false;
    };

    Estimator(DirichletState prior, Rule rule) : Estimator(std::move(prior), rule, Options{}) {}

    Estimator(DirichletState prior, Rule rule, Options opts)
        : prior_(std::move(prior)), rule_(rule), opts_(opts), state_(prior_), running_(prior_.means()) {
        if (!(opts_.meas_p >= 0.0 && opts_.meas_p <= 0.5)) {
            throw std::invalid_argument("assumed readout flip probability must lie in [0, 0.5]");
        }
        if (rule_ == Rule::FirstOrder) {
            first_.emplace(prior_);
        }
        if (rule_ == Rule::Mixture) {
            mixture_.emplace(prior_, opts_.mixture_cap);
        }
        if (opts_.record_trace) {
            trace_.rule = rule_;
            trace_.means.push_back(running_);
            trace_.alpha0_eff = prior_.alpha0();
        }
    }

    Rule rule() const { return rule_; }
    std::size_t steps() const { return n_; }
    const DirichletState& prior() const { return prior_; }

    void observe(std::span<const PauliOperator> layers, std::span<const int> outcomes) {
        if (layers.empty() || pauli_count(layers.front().num_qubits()) != prior_.size()) {
            throw DimensionError("shot layers do not match the prior dimension");
        }
        CompatibleSet g = compatible_set(layers, outcomes);
        switch (rule_) {
            case Rule::ExactMaximal:
                if (g.size() != 1) {
                    throw std::invalid_argument("exact_maximal needs outcomes that single out one Pauli");
                }
                state_ = update_maximal(state_, PauliIndex{g.indices().front()});
                running_ = state_.means();
                break;
            case Rule::Zeroth:
                running_ = approx_zeroth_order_step(running_, prior_.means(), prior_.alpha0(), n_ + 1, g);
                break;
            case Rule::FirstOrder:
                first_->add(g);
                running_ = first_->means();
                break;
            case Rule::Mixture:
                if (opts_.meas_p > 0.0) {
                    auto c = pattern_likelihood(layers, outcomes, opts_.meas_p);
                    mixture_->update(std::span<const double>(c));
                } else {
                    mixture_->update(g);
                }
                running_ = mixture_->means();
                break;
            case Rule::NoisySingle: {
                if (layers.size() != 1) {
                    throw std::invalid_argument("noisy_single needs single-layer shots");
                }
                // moment-matched projection back onto the Dirichlet family
                auto m = noisy_single_layer_step(state_, g, opts_.meas_p);
                state_ = from_means(m, state_.alpha0() + 1.0);
                running_ = std::move(m);
                break;
            }
        }
        ++n_;
        if (opts_.record_trace) {
            trace_.sets.push_back(g);
            trace_.means.push_back(running_);
            trace_.alpha0_eff = alpha0_eff();
        }
    }

    void observe(const std::vector<PauliOperator>& layers, const std::vector<int>& outcomes) {
        observe(std::span<const PauliOperator>(layers), std::span<const int>(outcomes));
    }

    double alpha0_eff() const { return prior_.alpha0() + double(n_); }

    const std::vector<double>& means() const { return running_; }

    Snapshot snapshot() const {
        Snapshot s;
        s.n = n_;
        s.alpha0_eff = alpha0_eff();
        s.means = running_;
        s.rule = rule_;
        if (rule_ == Rule::Mixture) {
            s.variances = mixture_->variances();
        } else if (rule_ == Rule::ExactMaximal) {
            s.variances = moments(state_).variances;
        } else {
            s.variances.resize(running_.size());
            for (std::size_t j = 0; j < running_.size(); ++j) {
                s.variances[j] = std::max(0.0, running_[j] * (1.0 - running_[j]) / (s.alpha0_eff + 1.0));
            }
        }
        return s;
    }

    const UpdateTrace& trace() const {
        if (!opts_.record_trace) {
            throw std::logic_error("trace recording was not enabled");
        }
        return trace_;
    }

   private:
    DirichletState prior_;
    Rule rule_;
    Options opts_;
    DirichletState state_;
    std::vector<double> running_;
    std::optional<FirstOrderAccumulator> first_;
    std::optional<PosteriorMixture> mixture_;
    std::size_t n_ = 0;
    UpdateTrace trace_;
};

}  // namespace flagbayes

#endif
