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

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace ube {

struct LinearSvmOptions {
    double C = 1.0;
    double tolerance = 1e-4;
    int max_epochs = 1000;
    bool fit_bias = true;
};

struct LinearSvm {
    Vector weights;
    double bias = 0.0;
    int epochs = 0;
    bool converged = false;

    double decision(const Eigen::Ref<const Vector>& x) const { return weights.dot(x) + bias; }
};

/// L2-regularized hinge-loss linear SVM trained by dual coordinate descent.
///
/// Minimizes 0.5*|w|^2 + C * sum_i max(0, 1 - y_i (w.x_i + b)); the bias is
/// handled as an extra constant feature of value 1 (and so is regularized).
/// Stops when the spread of projected gradients falls below `tolerance`.
template <class Rng>
LinearSvm train_linear_svm(const RowMatrix& x, const std::vector<int>& labels, const LinearSvmOptions& opt,
                           Rng& rng)
{
    const auto n = static_cast<std::size_t>(x.rows());
    const Eigen::Index d = x.cols();
    const double bias_feature = opt.fit_bias ? 1.0 : 0.0;

    std::vector<double> alpha(n, 0.0);
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) {
        q_diag[i] = x.row(static_cast<Eigen::Index>(i)).squaredNorm() + bias_feature * bias_feature;
    }

    LinearSvm model;
    model.weights = Vector::Zero(d);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        double pg_max = -std::numeric_limits<double>::infinity();
        double pg_min = std::numeric_limits<double>::infinity();
        for (std::size_t i : order) {
            const auto row = x.row(static_cast<Eigen::Index>(i));
            const double y = labels[i] > 0 ? 1.0 : -1.0;
            const double grad = y * (row.dot(model.weights) + model.bias * bias_feature) - 1.0;
            double pg = grad;
            if (alpha[i] == 0.0) {
                pg = std::min(grad, 0.0);
            }
            else if (alpha[i] == opt.C) {
                pg = std::max(grad, 0.0);
            }
            pg_max = std::max(pg_max, pg);
            pg_min = std::min(pg_min, pg);
            if (pg != 0.0 && q_diag[i] > 0.0) {
                const double old = alpha[i];
                alpha[i] = std::clamp(old - grad / q_diag[i], 0.0, opt.C);
                const double step = (alpha[i] - old) * y;
                model.weights += step * row.transpose();
                model.bias += step * bias_feature;
            }
        }
        model.epochs = epoch + 1;
        if (pg_max - pg_min < opt.tolerance) {
            model.converged = true;
            break;
        }
    }
    return model;
}

} // namespace ube
