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

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace ube {

/// Row-major dense matrix; each row is one token vector.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Mean of the selected rows, summed in the order given.
inline Vector mean_of_rows(const RowMatrix& rows, std::span<const std::size_t> which)
{
    Vector sum = Vector::Zero(rows.cols());
    for (std::size_t idx : which) {
        sum += rows.row(static_cast<Eigen::Index>(idx)).transpose();
    }
    if (!which.empty()) {
        sum /= static_cast<double>(which.size());
    }
    return sum;
}

inline Vector mean_of_rows(const RowMatrix& rows)
{
    Vector sum = Vector::Zero(rows.cols());
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        sum += rows.row(r).transpose();
    }
    if (rows.rows() > 0) {
        sum /= static_cast<double>(rows.rows());
    }
    return sum;
}

inline RowMatrix gather_rows(const RowMatrix& rows, std::span<const std::size_t> which)
{
    RowMatrix out(static_cast<Eigen::Index>(which.size()), rows.cols());
    for (std::size_t k = 0; k < which.size(); ++k) {
        out.row(static_cast<Eigen::Index>(k)) = rows.row(static_cast<Eigen::Index>(which[k]));
    }
    return out;
}

} // namespace ube
