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

#ifndef FLAGBAYES_METRICS_HPP
#define FLAGBAYES_METRICS_HPP

#include <cmath>
#include <span>
#include <vector>

#include "flagbayes/estimator.hpp"

namespace flagbayes {

/// Total variation distance, 1/2 sum |a_i - b_i|.
inline double tvd(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) {
        throw DimensionError("tvd of vectors with different lengths");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::abs(a[i] - b[i]);
    }
    return 0.5 * s;
}

inline double tvd(const std::vector<double>& a, const std::vector<double>& b) {
    return tvd(std::span<const double>(a), std::span<const double>(b));
}

struct ConvergencePoint {
    std::size_t n;
    double tvd;
    Rule rule;
};

/// TVD against phys at n = 0, stride, 2 stride, ... and always at the last step.
inline std::vector<ConvergencePoint> convergence_curve(const UpdateTrace& trace, const PauliChannel& phys,
                                                       std::size_t stride) {
    if (trace.means.empty()) {
        throw std::invalid_argument("convergence curve of an empty trace");
    }
    if (stride == 0) {
        throw std::invalid_argument("stride must be positive");
    }
    std::size_t last = trace.means.size() - 1;
    std::vector<ConvergencePoint> out;
    for (std::size_t n = 0; n <= last; n += stride) {
        out.push_back({n, tvd(trace.means[n], phys.rates()), trace.rule});
    }
    if (out.back().n != last) {
        out.push_back({last, tvd(trace.means[last], phys.rates()), trace.rule});
    }
    return out;
}

}  // namespace flagbayes

#endif
