/*
   Copyright 2026 The ube-audit Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include "ube/error.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace ube {

/// Monte Carlo p-value with the add-one correction:
/// (#{r : null_r >= observed} + 1) / (R + 1).
inline double monte_carlo_pvalue(double observed, std::span<const double> nulls)
{
    std::size_t at_least = 0;
    for (double v : nulls) {
        if (v >= observed) {
            ++at_least;
        }
    }
    return static_cast<double>(at_least + 1) / static_cast<double>(nulls.size() + 1);
}

struct BhResult {
    double critical_p = 0.0;  // 0 when nothing is rejected
    std::size_t rejections = 0;
    std::vector<bool> rejected;  // aligned with the input
};

/// Benjamini-Hochberg step-up: k* = max{k : p_(k) <= k * alpha / N}; rejects
/// every hypothesis with p <= p_(k*).
inline BhResult benjamini_hochberg(std::span<const double> pvalues, double alpha)
{
    if (pvalues.empty()) {
        throw ConfigError("Benjamini-Hochberg needs at least one p-value");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ConfigError("alpha must be in (0, 1)");
    }
    for (double p : pvalues) {
        if (!(p > 0.0 && p <= 1.0)) {
            throw ConfigError("p-values must lie in (0, 1]");
        }
    }
    std::vector<double> sorted(pvalues.begin(), pvalues.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());

    BhResult out;
    out.rejected.assign(pvalues.size(), false);
    std::size_t k_star = 0;
    for (std::size_t k = 1; k <= sorted.size(); ++k) {
        if (sorted[k - 1] <= static_cast<double>(k) * alpha / n) {
            k_star = k;
        }
    }
    if (k_star == 0) {
        return out;
    }
    out.critical_p = sorted[k_star - 1];
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        if (pvalues[i] <= out.critical_p) {
            out.rejected[i] = true;
            ++out.rejections;
        }
    }
    return out;
}

} // namespace ube
