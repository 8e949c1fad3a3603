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

#include "ube/linalg.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace ube {

/// (A_ij - A_i'j) . (A_ij' - A_i'j') > 0, strictly.
inline bool is_potential_indirect_bias(const Vector& a_ij, const Vector& a_i2j, const Vector& a_ij2,
                                       const Vector& a_i2j2)
{
    return (a_ij - a_i2j).dot(a_ij2 - a_i2j2) > 0.0;
}

/// Significance flags and word-set means of an n x m grid of (group, category)
/// pairs, stored group-major.
struct PairGrid {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<bool> significant;
    std::vector<Vector> word_means;

    std::size_t index(std::size_t i, std::size_t j) const { return i * m + j; }
    bool is_significant(std::size_t i, std::size_t j) const { return significant[index(i, j)]; }
    const Vector& mean(std::size_t i, std::size_t j) const { return word_means[index(i, j)]; }
};

struct FourTuple {
    std::size_t i = 0, i2 = 0, j = 0, j2 = 0;  // i < i2, j < j2 (0-based)
    double alignment = 0.0;
    bool potential_indirect_bias = false;
};

struct IndirectBiasSummary {
    std::size_t fourtuples = 0;
    std::optional<double> fraction_positive;  // absent when there are no fourtuples
};

/// Every fourtuple i < i', j < j' whose four pairs are all significant.
inline std::vector<FourTuple> enumerate_fourtuples(const PairGrid& grid)
{
    std::vector<FourTuple> out;
    for (std::size_t j = 0; j < grid.m; ++j) {
        for (std::size_t j2 = j + 1; j2 < grid.m; ++j2) {
            for (std::size_t i = 0; i < grid.n; ++i) {
                if (!grid.is_significant(i, j) || !grid.is_significant(i, j2)) {
                    continue;
                }
                for (std::size_t i2 = i + 1; i2 < grid.n; ++i2) {
                    if (!grid.is_significant(i2, j) || !grid.is_significant(i2, j2)) {
                        continue;
                    }
                    FourTuple t{i, i2, j, j2, 0.0, false};
                    t.alignment = (grid.mean(i, j) - grid.mean(i2, j)).dot(grid.mean(i, j2) - grid.mean(i2, j2));
                    t.potential_indirect_bias = t.alignment > 0.0;
                    out.push_back(t);
                }
            }
        }
    }
    return out;
}

inline IndirectBiasSummary summarize_fourtuples(const std::vector<FourTuple>& tuples)
{
    IndirectBiasSummary s;
    s.fourtuples = tuples.size();
    if (!tuples.empty()) {
        std::size_t positive = 0;
        for (const auto& t : tuples) {
            positive += t.potential_indirect_bias ? 1 : 0;
        }
        s.fraction_positive = static_cast<double>(positive) / static_cast<double>(tuples.size());
    }
    return s;
}

inline IndirectBiasSummary indirect_bias_rate(const PairGrid& grid)
{
    return summarize_fourtuples(enumerate_fourtuples(grid));
}

} // namespace ube
