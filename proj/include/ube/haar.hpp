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

// Haar-distributed orthogonal matrices.
//
// A Haar matrix is the Q factor of a d x d standard Gaussian matrix, with
// column signs fixed so the triangular factor has a positive diagonal. The
// Householder reflector built from column k of the partially reduced Gaussian
// matrix depends only on a fresh Gaussian vector of length d - k, so the
// factor can be generated reflector by reflector (Stewart's method) without
// forming the Gaussian matrix. Rotating r row vectors this way costs
// O(r * d^2) instead of the O(d^3) of an explicit factorization.

#include "ube/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace ube {

/// Replaces `rows` with rows * U for a freshly drawn Haar matrix U.
template <class Rng>
void apply_haar_rotation(RowMatrix& rows, Rng& rng)
{
    const Eigen::Index d = rows.cols();
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector v(d);
    Vector proj(rows.rows());
    std::vector<double> column_sign(static_cast<std::size_t>(d));

    for (Eigen::Index k = 0; k < d; ++k) {
        const Eigen::Index len = d - k;
        for (Eigen::Index j = 0; j < len; ++j) {
            v[j] = gauss(rng);
        }
        auto head = v.head(len);
        const double norm = head.norm();
        const double s = head[0] >= 0.0 ? 1.0 : -1.0;
        if (norm == 0.0) {
            column_sign[static_cast<std::size_t>(k)] = 1.0;
            continue;
        }
        // H x = -s |x| e_1, so the triangular diagonal entry has sign -s.
        head[0] += s * norm;
        const double vv = head.squaredNorm();
        auto block = rows.rightCols(len);
        proj.noalias() = block * head;
        block.noalias() -= (2.0 / vv) * proj * head.transpose();
        column_sign[static_cast<std::size_t>(k)] = -s;
    }
    for (Eigen::Index k = 0; k < d; ++k) {
        if (column_sign[static_cast<std::size_t>(k)] < 0.0) {
            rows.col(k) = -rows.col(k);
        }
    }
}

/// A d x d Haar-random orthogonal matrix.
template <class Rng>
RowMatrix haar_rotation(Eigen::Index d, Rng& rng)
{
    RowMatrix u = RowMatrix::Identity(d, d);
    apply_haar_rotation(u, rng);
    return u;
}

} // namespace ube
