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

// The bias enumeration pipeline:
//   1. cluster the names into n groups X_1..X_n;
//   2. cluster the M frequent lower-case words into m categories A_1..A_m;
//   3. inside each category, split the words into Voronoi cells around the
//      group means and keep, per group, the t words with the largest
//      (X_i-bar - mu) . (w - A_j-bar);
//   4. score each (group, category) pair, compare it with the same procedure
//      run against Haar-rotated name geometry, and control the false
//      discovery rate with Benjamini-Hochberg across all pairs.
//
// Rotations act on name-side quantities only. Because every score depends on
// the names through the group means and mu alone, rotating those n + 1
// vectors is equivalent to rotating every name vector.

#include "ube/clustering.hpp"
#include "ube/embedding_io.hpp"
#include "ube/haar.hpp"
#include "ube/multiple_testing.hpp"
#include "ube/name_prep.hpp"
#include "ube/null_cache.hpp"
#include "ube/proxy_analysis.hpp"
#include "ube/report.hpp"
#include "ube/reporting.hpp"
#include "ube/rng.hpp"
#include "ube/weat_core.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace ube {

struct UbeConfig {
    std::size_t n = 12;
    std::size_t m = 64;
    std::size_t M = 30000;
    std::size_t t = 3;
    double alpha = 0.05;
    std::size_t rotations = 10000;
    std::uint64_t seed = 0;
    bool allow_multiplicities = false;
    bool underscore_as_space = true;

    int kmeans_max_iter = 300;
    int kmeans_n_init = 10;
    std::size_t threads = 0;  // 0: hardware concurrency

    std::size_t illustrative_k = 5;
    SimilarityForm illustrative_form = SimilarityForm::inner_product;

    // Cleaning happens before enumeration; echoed into the report.
    CleanMethod clean_method = CleanMethod::margin;
    double removal_fraction = 0.2;

    void validate() const
    {
        if (n < 1 || m < 1 || t < 1 || M < 1) {
            throw ConfigError("n, m, M and t must all be at least 1");
        }
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw ConfigError("alpha must be in (0, 1)");
        }
        if (rotations < 1) {
            throw ConfigError("rotations must be at least 1");
        }
        if (kmeans_n_init < 1 || kmeans_max_iter < 0) {
            throw ConfigError("invalid k-means settings");
        }
    }
};

inline std::string clean_method_name(CleanMethod m)
{
    switch (m) {
    case CleanMethod::margin:
        return "margin";
    case CleanMethod::mean_similarity:
        return "mean-sim";
    case CleanMethod::none:
        return "none";
    }
    return "none";
}

inline constexpr double kIncompleteScore = -std::numeric_limits<double>::infinity();

namespace detail {

struct Candidate {
    double score;
    std::size_t rank;
    std::size_t position;
};

// Higher score first, then lower frequency rank.
inline bool ranks_before(const Candidate& a, const Candidate& b)
{
    return a.score > b.score || (a.score == b.score && a.rank < b.rank);
}

// Keeps the best `t` candidates in order.
class TopT {
public:
    explicit TopT(std::size_t t = 0) : t_(t) { items_.reserve(t); }

    void reset(std::size_t t)
    {
        t_ = t;
        items_.clear();
    }

    void offer(const Candidate& c)
    {
        if (items_.size() == t_) {
            if (!ranks_before(c, items_.back())) {
                return;
            }
            items_.pop_back();
        }
        auto it = std::upper_bound(items_.begin(), items_.end(), c, ranks_before);
        items_.insert(it, c);
    }

    bool full() const { return items_.size() == t_; }
    const std::vector<Candidate>& items() const { return items_; }

private:
    std::size_t t_;
    std::vector<Candidate> items_;
};

// Argmax over the group columns of one dot-product row; lowest index on ties.
template <class Row>
std::size_t nearest_group(const Row& dots, std::size_t n)
{
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (dots[static_cast<Eigen::Index>(i)] > dots[static_cast<Eigen::Index>(best)]) {
            best = i;
        }
    }
    return best;
}

} // namespace detail

/// Splits `words` (rows, unit length) into cells by largest inner product
/// with the group means; ties go to the lower group index. Returns row
/// indices per group.
inline std::vector<std::vector<std::size_t>> voronoi_partition(const RowMatrix& words, const RowMatrix& group_means)
{
    const auto n = static_cast<std::size_t>(group_means.rows());
    if (n == 0) {
        throw ConfigError("voronoi_partition needs at least one group");
    }
    const RowMatrix dots = words * group_means.transpose();
    std::vector<std::vector<std::size_t>> cells(n);
    for (Eigen::Index w = 0; w < words.rows(); ++w) {
        cells[detail::nearest_group(dots.row(w), n)].push_back(static_cast<std::size_t>(w));
    }
    return cells;
}

struct SelectedWords {
    std::vector<std::size_t> positions;  // best first
    bool complete = false;                // |cell| >= t
};

/// The t rows of `cell_words` maximizing (group_mean - mu) . (w - category_mean);
/// ties go to the lower rank. Fewer than t candidates yields an incomplete
/// selection holding all of them.
inline SelectedWords select_words(const RowMatrix& cell_words, const std::vector<std::size_t>& ranks,
                                  const Vector& group_mean, const Vector& mu, const Vector& category_mean,
                                  std::size_t t)
{
    if (t < 1) {
        throw ConfigError("t must be at least 1");
    }
    const Vector dev = group_mean - mu;
    detail::TopT top(t);
    for (Eigen::Index w = 0; w < cell_words.rows(); ++w) {
        const double score = dev.dot(cell_words.row(w).transpose() - category_mean);
        top.offer({score, ranks[static_cast<std::size_t>(w)], static_cast<std::size_t>(w)});
    }
    SelectedWords out;
    out.complete = top.full();
    for (const auto& c : top.items()) {
        out.positions.push_back(c.position);
    }
    return out;
}

/// Everything the scoring step needs, fixed once groups and categories exist.
struct ScoringContext {
    RowMatrix pool_vectors;                            // word pool, pool order
    std::vector<std::size_t> pool_ranks;               // embedding rank per pool word
    std::vector<std::vector<std::size_t>> categories;  // pool positions per category
    std::vector<Vector> category_means;
    Vector pool_mean;
    RowMatrix name_side;  // n group means followed by mu, (n + 1) x d
    std::size_t t = 3;
    bool allow_multiplicities = false;

    std::size_t n() const { return static_cast<std::size_t>(name_side.rows()) - 1; }
    std::size_t m() const { return categories.size(); }
    std::size_t dim() const { return static_cast<std::size_t>(name_side.cols()); }
};

/// Scores of one name-side configuration (observed or rotated).
struct Selection {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> sigma;                    // n*m, group-major; -inf when incomplete
    std::vector<bool> complete;                   // n*m
    std::vector<std::vector<std::size_t>> words;  // n*m pool positions, best first (observed only)

    std::size_t index(std::size_t i, std::size_t j) const { return i * m + j; }
};

/// Runs Voronoi partitioning, word selection and scoring for name-side rows
/// `side` (group means then mu, possibly rotated). Holds reusable buffers;
/// one instance per thread.
class Scorer {
public:
    Selection score(const ScoringContext& ctx, const RowMatrix& side, bool keep_words)
    {
        const std::size_t n = ctx.n();
        const std::size_t m = ctx.m();
        const Eigen::Index mu_col = static_cast<Eigen::Index>(n);
        dots_.noalias() = ctx.pool_vectors * side.transpose();

        Selection sel;
        sel.n = n;
        sel.m = m;
        sel.sigma.assign(n * m, kIncompleteScore);
        sel.complete.assign(n * m, false);
        if (keep_words) {
            sel.words.assign(n * m, {});
        }
        tops_.resize(n);
        devs_.resize(n);
        shift_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            devs_[i] = side.row(static_cast<Eigen::Index>(i)).transpose() - side.row(mu_col).transpose();
        }

        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                tops_[i].reset(ctx.t);
                shift_[i] = devs_[i].dot(ctx.category_means[j]);
            }
            for (std::size_t pos : ctx.categories[j]) {
                const auto row = dots_.row(static_cast<Eigen::Index>(pos));
                const double mu_dot = row[mu_col];
                if (ctx.allow_multiplicities) {
                    for (std::size_t i = 0; i < n; ++i) {
                        tops_[i].offer({row[static_cast<Eigen::Index>(i)] - mu_dot - shift_[i], ctx.pool_ranks[pos], pos});
                    }
                }
                else {
                    const std::size_t i = detail::nearest_group(row, n);
                    tops_[i].offer({row[static_cast<Eigen::Index>(i)] - mu_dot - shift_[i], ctx.pool_ranks[pos], pos});
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t cell = sel.index(i, j);
                const auto& items = tops_[i].items();
                if (keep_words) {
                    for (const auto& c : items) {
                        sel.words[cell].push_back(c.position);
                    }
                }
                if (!tops_[i].full()) {
                    continue;
                }
                chosen_.clear();
                for (const auto& c : items) {
                    chosen_.push_back(c.position);
                }
                const Vector words_mean = mean_of_rows(ctx.pool_vectors, chosen_);
                sel.complete[cell] = true;
                sel.sigma[cell] = association_score(side.row(static_cast<Eigen::Index>(i)).transpose(),
                                                    side.row(mu_col).transpose(), words_mean, ctx.pool_mean);
            }
        }
        return sel;
    }

private:
    RowMatrix dots_;
    std::vector<detail::TopT> tops_;
    std::vector<Vector> devs_;
    std::vector<double> shift_;
    std::vector<std::size_t> chosen_;
};

/// Scores the configuration obtained by right-multiplying the name side by an
/// explicit orthogonal matrix.
inline Selection score_rotated(const ScoringContext& ctx, const RowMatrix& rotation)
{
    const RowMatrix side = ctx.name_side * rotation;
    Scorer scorer;
    return scorer.score(ctx, side, false);
}

inline std::size_t resolve_threads(std::size_t requested)
{
    if (requested > 0) {
        return requested;
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

/// Null scores sigma_ijr for r = 0..R-1. Rotation r is drawn from its own
/// stream keyed by (seed, r), so the result does not depend on threading.
inline NullScores null_scores(const ScoringContext& ctx, std::size_t rotations, std::uint64_t seed,
                              std::size_t threads = 0)
{
    const std::size_t n = ctx.n();
    const std::size_t m = ctx.m();
    NullScores nulls(n, m, rotations);
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(resolve_threads(threads), std::max<std::size_t>(1, rotations));

    auto work = [&] {
        Scorer scorer;
        RowMatrix side;
        for (std::size_t r = next.fetch_add(1); r < rotations; r = next.fetch_add(1)) {
            auto rng = make_rng(seed, Stream::rotation, r);
            side = ctx.name_side;
            apply_haar_rotation(side, rng);
            const Selection sel = scorer.score(ctx, side, false);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    nulls.at(i, j, r) = sel.sigma[sel.index(i, j)];
                }
            }
        }
    };
    if (workers == 1) {
        work();
    }
    else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    return nulls;
}

/// Groups, categories and observed selections.
struct UbeModel {
    std::vector<std::string> names;
    std::vector<std::size_t> name_ranks;
    Clustering name_clusters;
    WordPool pool;
    Clustering word_clusters;
    ScoringContext context;
    Selection observed;
};

inline UbeModel build_model(const UnitEmbedding& emb, const std::vector<std::string>& names, const UbeConfig& cfg)
{
    cfg.validate();
    UbeModel model;
    model.names = names;
    for (const auto& name : names) {
        model.name_ranks.push_back(emb.rank(name));
    }
    if (names.size() < cfg.n) {
        throw ConfigError("only " + std::to_string(names.size()) + " names for n = " + std::to_string(cfg.n) +
                          " groups");
    }
    const RowMatrix name_vectors = gather_rows(emb.vectors(), model.name_ranks);
    model.name_clusters = kmeanspp(name_vectors, {cfg.n, cfg.seed, Stream::name_clustering, cfg.kmeans_max_iter,
                                                  cfg.kmeans_n_init});

    model.pool = frequent_lowercase_words(emb, cfg.M, cfg.underscore_as_space);
    if (model.pool.size() < cfg.m) {
        throw ConfigError("word pool has " + std::to_string(model.pool.size()) + " words for m = " +
                          std::to_string(cfg.m) + " categories");
    }
    ScoringContext& ctx = model.context;
    ctx.pool_vectors = gather_rows(emb.vectors(), model.pool.ranks);
    ctx.pool_ranks = model.pool.ranks;
    ctx.pool_mean = model.pool.pool_mean;
    model.word_clusters = kmeanspp(ctx.pool_vectors, {cfg.m, cfg.seed, Stream::word_clustering, cfg.kmeans_max_iter,
                                                      cfg.kmeans_n_init});
    ctx.categories = model.word_clusters.members();
    for (const auto& members : ctx.categories) {
        ctx.category_means.push_back(mean_of_rows(ctx.pool_vectors, members));
    }

    std::vector<Vector> group_means;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        group_means.push_back(model.name_clusters.centers.row(static_cast<Eigen::Index>(i)).transpose());
    }
    const Vector mu = group_reference(group_means, mean_of_rows(name_vectors));
    ctx.name_side.resize(static_cast<Eigen::Index>(cfg.n + 1), static_cast<Eigen::Index>(emb.dim()));
    for (std::size_t i = 0; i < cfg.n; ++i) {
        ctx.name_side.row(static_cast<Eigen::Index>(i)) = group_means[i].transpose();
    }
    ctx.name_side.row(static_cast<Eigen::Index>(cfg.n)) = mu.transpose();
    ctx.t = cfg.t;
    ctx.allow_multiplicities = cfg.allow_multiplicities;

    Scorer scorer;
    model.observed = scorer.score(ctx, ctx.name_side, true);
    return model;
}

/// 64-bit FNV-1a over dimension, tokens and vector bytes.
inline std::string embedding_fingerprint(const UnitEmbedding& emb)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](const void* data, std::size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t k = 0; k < len; ++k) {
            h ^= p[k];
            h *= 0x100000001b3ULL;
        }
    };
    const std::uint64_t dims[2] = {emb.size(), emb.dim()};
    mix(dims, sizeof dims);
    for (const auto& t : emb.tokens()) {
        mix(t.data(), t.size());
        mix("\0", 1);
    }
    mix(emb.vectors().data(), static_cast<std::size_t>(emb.vectors().size()) * sizeof(double));
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

struct AuditRun {
    UbeModel model;
    NullScores nulls;
    std::vector<double> pvalues;  // n*m group-major; NaN for incomplete pairs
    std::vector<bool> significant;
    std::vector<FourTuple> fourtuples;  // 0-based cluster ids
    AuditReport report;
};

struct RunOptions {
    std::optional<std::filesystem::path> null_cache;
};

inline std::string group_label_prefix(NameSource source)
{
    switch (source) {
    case NameSource::ssa:
        return "F";
    case NameSource::census:
        return "L";
    case NameSource::other:
        return "G";
    }
    return "G";
}

/// p-values, Benjamini-Hochberg, ranking and presentation on top of a model
/// and its null scores.
inline AuditRun assemble_report(UbeModel model, NullScores nulls, const UnitEmbedding& emb, const NameTable& table,
                                const UbeConfig& cfg)
{
    AuditRun run;
    const std::size_t n = cfg.n;
    const std::size_t m = cfg.m;
    const Selection& obs = model.observed;

    run.pvalues.assign(n * m, std::numeric_limits<double>::quiet_NaN());
    run.significant.assign(n * m, false);
    std::vector<double> family;
    std::vector<std::size_t> family_cells;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t cell = obs.index(i, j);
            if (!obs.complete[cell]) {
                continue;
            }
            run.pvalues[cell] = monte_carlo_pvalue(obs.sigma[cell], nulls.pair(i, j));
            family.push_back(run.pvalues[cell]);
            family_cells.push_back(cell);
        }
    }

    AuditReport& rep = run.report;
    if (!family.empty()) {
        const BhResult bh = benjamini_hochberg(family, cfg.alpha);
        rep.critical_p = bh.critical_p;
        for (std::size_t k = 0; k < family.size(); ++k) {
            run.significant[family_cells[k]] = bh.rejected[k];
        }
        rep.significant = bh.rejections;
    }
    else {
        spdlog::warn("event=no_complete_pairs");
    }
    rep.hypotheses = family.size();

    rep.config = {cfg.n,
                  cfg.m,
                  cfg.M,
                  cfg.t,
                  cfg.alpha,
                  cfg.rotations,
                  cfg.seed,
                  cfg.allow_multiplicities,
                  clean_method_name(cfg.clean_method),
                  cfg.removal_fraction,
                  cfg.illustrative_k};
    rep.metadata = {embedding_fingerprint(emb), emb.dim(), emb.size(), model.names.size(), model.pool.size()};

    // Groups, ordered for presentation.
    const auto members = model.name_clusters.members();
    std::vector<GroupReport> groups(n);
    for (std::size_t i = 0; i < n; ++i) {
        GroupReport& g = groups[i];
        g.id = i + 1;
        g.size = members[i].size();
        std::vector<std::string> group_names;
        std::vector<std::size_t> ranks;
        for (std::size_t idx : members[i]) {
            group_names.push_back(model.names[idx]);
            ranks.push_back(model.name_ranks[idx]);
        }
        const RowMatrix vectors = gather_rows(emb.vectors(), ranks);
        for (std::size_t pick : illustrative_names(vectors, ranks, cfg.illustrative_k, cfg.illustrative_form)) {
            g.illustrative.push_back(group_names[pick]);
        }
        g.residual = g.size - g.illustrative.size();
        g.stats = demographic_summary(group_names, table);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (table.source == NameSource::ssa) {
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return groups[a].stats.fraction_female.value_or(0.0) > groups[b].stats.fraction_female.value_or(0.0);
        });
    }
    const std::string prefix = group_label_prefix(table.source);
    for (std::size_t p = 0; p < n; ++p) {
        groups[order[p]].label = prefix + std::to_string(p + 1);
        rep.groups.push_back(groups[order[p]]);
    }

    // Tests, one per category.
    std::vector<TestReport> tests(m);
    for (std::size_t j = 0; j < m; ++j) {
        TestReport& t = tests[j];
        t.category = j + 1;
        t.category_size = model.context.categories[j].size();
        for (std::size_t p = 0; p < n; ++p) {
            const std::size_t i = order[p];
            const std::size_t cell = obs.index(i, j);
            CellReport c;
            c.group = i + 1;
            for (std::size_t pos : obs.words[cell]) {
                c.words.push_back(model.pool.words[pos]);
            }
            c.complete = obs.complete[cell];
            if (c.complete) {
                c.score = obs.sigma[cell];
                c.p_value = run.pvalues[cell];
                c.significant = run.significant[cell];
            }
            if (c.significant) {
                ++t.significant_count;
            }
            t.cells.push_back(std::move(c));
        }
        // Summed in group id order so presentation order does not matter.
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t cell = obs.index(i, j);
            if (run.significant[cell]) {
                t.total_significant_score += obs.sigma[cell];
            }
        }
    }
    std::stable_sort(tests.begin(), tests.end(), [](const TestReport& a, const TestReport& b) {
        const bool sa = a.significant_count > 0;
        const bool sb = b.significant_count > 0;
        if (sa != sb) {
            return sa;
        }
        if (sa && a.total_significant_score != b.total_significant_score) {
            return a.total_significant_score > b.total_significant_score;
        }
        return a.category < b.category;
    });
    for (std::size_t r = 0; r < m; ++r) {
        tests[r].rank = r + 1;
    }
    rep.tests = std::move(tests);

    PairGrid grid;
    grid.n = n;
    grid.m = m;
    grid.significant = run.significant;
    grid.word_means.resize(n * m);
    for (std::size_t cell = 0; cell < n * m; ++cell) {
        if (obs.complete[cell]) {
            grid.word_means[cell] = mean_of_rows(model.context.pool_vectors, obs.words[cell]);
        }
    }
    run.fourtuples = enumerate_fourtuples(grid);
    rep.indirect_bias = summarize_fourtuples(run.fourtuples);

    run.model = std::move(model);
    run.nulls = std::move(nulls);
    return run;
}

/// Runs the whole pipeline on vocabulary-resident, already cleaned names.
inline AuditRun run_audit(const UnitEmbedding& emb, const NameTable& names, const UbeConfig& cfg,
                          const RunOptions& options = {})
{
    const auto start = std::chrono::steady_clock::now();
    UbeModel model = build_model(emb, names.names(), cfg);
    spdlog::info("event=model_built names={} pool={} complete_pairs={}", model.names.size(), model.pool.size(),
                 std::count(model.observed.complete.begin(), model.observed.complete.end(), true));

    const NullCacheHeader header{cfg.n, cfg.m, cfg.rotations, emb.dim(), cfg.seed};
    std::optional<NullScores> nulls;
    if (options.null_cache && std::filesystem::exists(*options.null_cache)) {
        nulls = read_null_cache(*options.null_cache, header);
        if (nulls) {
            spdlog::info("event=null_cache_hit path={}", options.null_cache->string());
        }
        else {
            spdlog::warn("event=null_cache_mismatch path={}", options.null_cache->string());
        }
    }
    if (!nulls) {
        nulls = null_scores(model.context, cfg.rotations, cfg.seed, cfg.threads);
        if (options.null_cache) {
            write_null_cache(*options.null_cache, *nulls, emb.dim(), cfg.seed);
        }
    }
    AuditRun run = assemble_report(std::move(model), std::move(*nulls), emb, names, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    spdlog::info("event=audit_done hypotheses={} significant={} wall_seconds={:.3f}", run.report.hypotheses,
                 run.report.significant, seconds);
    return run;
}

inline AuditReport enumerate_biases(const UnitEmbedding& emb, const NameTable& names, const UbeConfig& cfg)
{
    return run_audit(emb, names, cfg).report;
}

/// Rows "i,i2,j,j2,alignment,potential_indirect_bias" with 1-based ids.
inline std::string fourtuples_csv(const std::vector<FourTuple>& tuples)
{
    std::ostringstream out;
    out << "group_i,group_i2,category_j,category_j2,alignment,potential_indirect_bias\n";
    out << std::setprecision(17);
    for (const auto& t : tuples) {
        out << t.i + 1 << ',' << t.i2 + 1 << ',' << t.j + 1 << ',' << t.j2 + 1 << ',' << t.alignment << ','
            << (t.potential_indirect_bias ? "true" : "false") << '\n';
    }
    return out.str();
}

} // namespace ube
