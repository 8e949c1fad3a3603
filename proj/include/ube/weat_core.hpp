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

// Association statistics over unit vectors: the two-group WEAT statistic s,
// its n-group generalization g, the reference point mu and the per-pair
// score sigma.
//
// For a token set S, S-bar is the arithmetic mean of its unit vectors, so
// S-bar . T-bar is the mean pairwise cosine between S and T.

#include "ube/embedding_io.hpp"
#include "ube/error.hpp"
#include "ube/linalg.hpp"

#include <span>
#include <string>
#include <vector>

namespace ube {

/// A nonempty set of unit vectors with its cached mean.
class TokenSetView {
public:
    explicit TokenSetView(RowMatrix members) : members_(std::move(members))
    {
        if (members_.rows() == 0) {
            throw ConfigError("token set must be nonempty");
        }
        mean_ = mean_of_rows(members_);
    }

    static TokenSetView from_tokens(const UnitEmbedding& emb, std::span<const std::string> tokens)
    {
        if (tokens.empty()) {
            throw ConfigError("token set must be nonempty");
        }
        std::vector<std::size_t> ranks;
        ranks.reserve(tokens.size());
        for (const auto& t : tokens) {
            ranks.push_back(emb.rank(t));
        }
        return TokenSetView(gather_rows(emb.vectors(), ranks));
    }

    const RowMatrix& members() const noexcept { return members_; }
    const Vector& mean() const noexcept { return mean_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(members_.rows()); }

    Vector sum() const { return mean_ * static_cast<double>(size()); }

private:
    RowMatrix members_;
    Vector mean_;
};

/// Mean of the unit vectors of `tokens` (the set mean S-bar).
inline Vector set_mean(const UnitEmbedding& emb, std::span<const std::string> tokens)
{
    return TokenSetView::from_tokens(emb, tokens).mean();
}

/// Reference point for group deviations: the mean of the group means when
/// n >= 2, the all-names mean when n == 1. Applying the n >= 2 rule to a
/// single group would make every deviation, and so g, identically zero.
inline Vector group_reference(std::span<const Vector> group_means, const Vector& all_names_mean)
{
    if (group_means.empty()) {
        throw ConfigError("at least one group is required");
    }
    if (group_means.size() == 1) {
        return all_names_mean;
    }
    Vector mu = Vector::Zero(group_means.front().size());
    for (const auto& m : group_means) {
        mu += m;
    }
    return mu / static_cast<double>(group_means.size());
}

/// Name groups X_1..X_n together with the all-names mean and mu.
class GroupSystem {
public:
    GroupSystem(std::vector<TokenSetView> groups, Vector all_names_mean)
        : groups_(std::move(groups)), all_names_mean_(std::move(all_names_mean))
    {
        if (groups_.empty()) {
            throw ConfigError("at least one group is required");
        }
        std::vector<Vector> means;
        for (const auto& g : groups_) {
            means.push_back(g.mean());
        }
        mu_ = group_reference(means, all_names_mean_);
    }

    std::size_t n() const noexcept { return groups_.size(); }
    const TokenSetView& group(std::size_t i) const { return groups_.at(i); }
    const Vector& all_names_mean() const noexcept { return all_names_mean_; }
    const Vector& mu() const noexcept { return mu_; }

private:
    std::vector<TokenSetView> groups_;
    Vector all_names_mean_;
    Vector mu_;
};

/// sigma = (X_i-bar - mu) . (A-bar - pool mean)
inline double association_score(const Vector& group_mean, const Vector& mu, const Vector& words_mean,
                                const Vector& pool_mean)
{
    double total = 0.0;
    for (Eigen::Index k = 0; k < group_mean.size(); ++k) {
        total += (group_mean[k] - mu[k]) * (words_mean[k] - pool_mean[k]);
    }
    return total;
}

/// s(X1, A1, X2, A2) = (sum_{x in X1} x - sum_{x in X2} x) . (A1-bar - A2-bar)
inline double weat_s(const TokenSetView& x1, const TokenSetView& a1, const TokenSetView& x2,
                     const TokenSetView& a2)
{
    return (x1.sum() - x2.sum()).dot(a1.mean() - a2.mean());
}

struct WeatPair {
    const TokenSetView* names;
    const TokenSetView* words;
};

/// g(X_1, A_1, ..., X_n, A_n) = sum_i (X_i-bar - mu) . (A_i-bar - pool mean).
/// `all_names_mean` only matters for n == 1.
inline double weat_g(std::span<const WeatPair> pairs, const Vector& all_names_mean, const Vector& pool_mean)
{
    if (pairs.empty()) {
        throw ConfigError("weat_g needs at least one group");
    }
    std::vector<Vector> means;
    means.reserve(pairs.size());
    for (const auto& p : pairs) {
        if (p.names == nullptr || p.words == nullptr) {
            throw ConfigError("weat_g group is missing a set");
        }
        means.push_back(p.names->mean());
    }
    const Vector mu = group_reference(means, all_names_mean);
    double total = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        total += association_score(means[i], mu, pairs[i].words->mean(), pool_mean);
    }
    return total;
}

/// Single-group form g(X, A) with mu = all-names mean.
inline double weat_g(const TokenSetView& names, const TokenSetView& words, const Vector& all_names_mean,
                     const Vector& pool_mean)
{
    const WeatPair pair{&names, &words};
    return weat_g(std::span<const WeatPair>(&pair, 1), all_names_mean, pool_mean);
}

} // namespace ube
