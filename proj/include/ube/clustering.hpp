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
#include "ube/linalg.hpp"
#include "ube/rng.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

namespace ube {

struct KMeansOptions {
    std::size_t k = 1;
    std::uint64_t seed = 0;
    Stream stream = Stream::name_clustering;
    int max_iter = 300;
    int n_init = 10;
};

/// Partition of the input rows into k nonempty clusters (ids 0..k-1).
struct Clustering {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;  // per input row
    RowMatrix centers;                    // k x d, mean of member rows
    double inertia = 0.0;                 // sum of squared distances to assigned centers
    double seeding_inertia = 0.0;         // inertia of the chosen restart right after seeding
    std::vector<double> trace;            // chosen restart: seeding inertia, then one entry per Lloyd step
    int iterations = 0;
    int best_restart = 0;

    std::vector<std::vector<std::size_t>> members() const
    {
        std::vector<std::vector<std::size_t>> out(k);
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            out[assignment[i]].push_back(i);
        }
        return out;
    }
};

namespace detail {

struct LloydRun {
    std::vector<std::size_t> assignment;
    RowMatrix centers;
    std::vector<double> trace;
    double inertia = 0.0;
    int iterations = 0;
};

// Lowest id wins exact ties.
inline void assign_nearest(const RowMatrix& x, const Vector& x_sq, const RowMatrix& centers,
                           std::vector<std::size_t>& assignment, std::vector<double>& dist)
{
    const RowMatrix cross = x * centers.transpose();
    const Vector c_sq = centers.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < centers.rows(); ++c) {
            const double dd = x_sq[i] - 2.0 * cross(i, c) + c_sq[c];
            if (dd < best_d) {
                best_d = dd;
                best = static_cast<std::size_t>(c);
            }
        }
        assignment[static_cast<std::size_t>(i)] = best;
        dist[static_cast<std::size_t>(i)] = best_d;
    }
}

// Gives each empty cluster the point farthest from its own center, and moves
// that cluster's center onto the point.
inline void repair_empty(const RowMatrix& x, RowMatrix& centers, std::vector<std::size_t>& assignment,
                         std::vector<double>& dist)
{
    const auto k = static_cast<std::size_t>(centers.rows());
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t a : assignment) {
        ++sizes[a];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) {
            continue;
        }
        std::size_t far = assignment.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < assignment.size(); ++i) {
            if (sizes[assignment[i]] > 1 && dist[i] > far_d) {
                far_d = dist[i];
                far = i;
            }
        }
        if (far == assignment.size()) {
            throw ConfigError("cannot repair empty cluster");
        }
        --sizes[assignment[far]];
        assignment[far] = c;
        sizes[c] = 1;
        dist[far] = 0.0;
        centers.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(far));
    }
}

inline RowMatrix cluster_means(const RowMatrix& x, const std::vector<std::size_t>& assignment, std::size_t k)
{
    RowMatrix sums = RowMatrix::Zero(static_cast<Eigen::Index>(k), x.cols());
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        sums.row(static_cast<Eigen::Index>(assignment[i])) += x.row(static_cast<Eigen::Index>(i));
        ++sizes[assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
        sums.row(static_cast<Eigen::Index>(c)) /= static_cast<double>(sizes[c]);
    }
    return sums;
}

inline double exact_inertia(const RowMatrix& x, const RowMatrix& centers, const std::vector<std::size_t>& assignment)
{
    double total = 0.0;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        total += (x.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(assignment[i])))
                     .squaredNorm();
    }
    return total;
}

// D^2 seeding: first center uniform, each next one drawn with probability
// proportional to squared distance from the nearest chosen center.
template <class Rng>
RowMatrix seed_centers(const RowMatrix& x, std::size_t k, Rng& rng)
{
    const auto n = static_cast<std::size_t>(x.rows());
    RowMatrix centers(static_cast<Eigen::Index>(k), x.cols());
    std::uniform_int_distribution<std::size_t> first(0, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::size_t pick = first(rng);
    centers.row(0) = x.row(static_cast<Eigen::Index>(pick));
    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) {
        nearest[i] = (x.row(static_cast<Eigen::Index>(i)) - centers.row(0)).squaredNorm();
    }
    for (std::size_t c = 1; c < k; ++c) {
        const double total = std::accumulate(nearest.begin(), nearest.end(), 0.0);
        if (total > 0.0) {
            const double target = unit(rng) * total;
            double running = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                running += nearest[i];
                if (running > target && nearest[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        else {
            pick = first(rng);
        }
        centers.row(static_cast<Eigen::Index>(c)) = x.row(static_cast<Eigen::Index>(pick));
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(
                nearest[i], (x.row(static_cast<Eigen::Index>(i)) - centers.row(static_cast<Eigen::Index>(c))).squaredNorm());
        }
    }
    return centers;
}

template <class Rng>
LloydRun lloyd(const RowMatrix& x, const Vector& x_sq, std::size_t k, int max_iter, Rng& rng)
{
    const auto n = static_cast<std::size_t>(x.rows());
    LloydRun run;
    run.centers = seed_centers(x, k, rng);
    run.assignment.assign(n, 0);
    std::vector<double> dist(n);

    assign_nearest(x, x_sq, run.centers, run.assignment, dist);
    repair_empty(x, run.centers, run.assignment, dist);
    run.trace.push_back(exact_inertia(x, run.centers, run.assignment));

    bool converged = false;
    std::vector<std::size_t> previous;
    for (int it = 0; it < max_iter; ++it) {
        run.centers = cluster_means(x, run.assignment, k);
        previous = run.assignment;
        assign_nearest(x, x_sq, run.centers, run.assignment, dist);
        repair_empty(x, run.centers, run.assignment, dist);
        run.trace.push_back(exact_inertia(x, run.centers, run.assignment));
        run.iterations = it + 1;
        if (run.assignment == previous) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        run.centers = cluster_means(x, run.assignment, k);
    }
    run.inertia = exact_inertia(x, run.centers, run.assignment);
    return run;
}

// Lexicographic row order; makes the result independent of input order.
inline std::vector<std::size_t> canonical_order(const RowMatrix& x)
{
    std::vector<std::size_t> order(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = x.row(static_cast<Eigen::Index>(a));
        const auto rb = x.row(static_cast<Eigen::Index>(b));
        for (Eigen::Index c = 0; c < x.cols(); ++c) {
            if (ra[c] != rb[c]) {
                return ra[c] < rb[c];
            }
        }
        return false;
    });
    return order;
}

} // namespace detail

/// K-means with k-means++ seeding and Lloyd iterations, best of `n_init`
/// seeded restarts (ties go to the earlier restart). Stops at an assignment
/// fixpoint or after `max_iter` steps.
inline Clustering kmeanspp(const RowMatrix& vectors, const KMeansOptions& opt)
{
    const auto n = static_cast<std::size_t>(vectors.rows());
    if (opt.k == 0) {
        throw ConfigError("k must be at least 1");
    }
    if (opt.k > n) {
        throw ConfigError("k = " + std::to_string(opt.k) + " exceeds the number of vectors (" + std::to_string(n) +
                          ")");
    }
    if (opt.n_init < 1 || opt.max_iter < 0) {
        throw ConfigError("n_init must be >= 1 and max_iter >= 0");
    }

    const std::vector<std::size_t> order = detail::canonical_order(vectors);
    const RowMatrix x = gather_rows(vectors, order);
    const Vector x_sq = x.rowwise().squaredNorm();

    detail::LloydRun best;
    int best_restart = -1;
    double best_seed_inertia = 0.0;
    for (int restart = 0; restart < opt.n_init; ++restart) {
        auto rng = make_rng(opt.seed, opt.stream, static_cast<std::uint64_t>(restart));
        detail::LloydRun run = detail::lloyd(x, x_sq, opt.k, opt.max_iter, rng);
        if (best_restart < 0 || run.inertia < best.inertia) {
            best_seed_inertia = run.trace.front();
            best = std::move(run);
            best_restart = restart;
        }
    }

    Clustering out;
    out.k = opt.k;
    out.assignment.assign(n, 0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        out.assignment[order[pos]] = best.assignment[pos];
    }
    out.centers = std::move(best.centers);
    out.inertia = best.inertia;
    out.seeding_inertia = best_seed_inertia;
    out.trace = std::move(best.trace);
    out.iterations = best.iterations;
    out.best_restart = best_restart;
    return out;
}

} // namespace ube
