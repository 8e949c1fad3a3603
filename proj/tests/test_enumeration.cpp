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

#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace ube;
using namespace ube::testing;

namespace {

// Small scoring context from random data, bypassing clustering.
ScoringContext random_context(std::mt19937_64& rng, std::size_t n, std::size_t m, std::size_t words, Eigen::Index d,
                              std::size_t t)
{
    ScoringContext ctx;
    ctx.pool_vectors = random_unit_rows(rng, static_cast<Eigen::Index>(words), d);
    ctx.pool_ranks.resize(words);
    std::iota(ctx.pool_ranks.begin(), ctx.pool_ranks.end(), std::size_t{0});
    ctx.categories.resize(m);
    for (std::size_t w = 0; w < words; ++w) {
        ctx.categories[w % m].push_back(w);
    }
    for (const auto& c : ctx.categories) {
        ctx.category_means.push_back(mean_of_rows(ctx.pool_vectors, c));
    }
    ctx.pool_mean = mean_of_rows(ctx.pool_vectors);
    ctx.name_side.resize(static_cast<Eigen::Index>(n + 1), d);
    std::vector<Vector> means;
    for (std::size_t i = 0; i < n; ++i) {
        means.push_back(0.5 * random_unit(rng, d));
        ctx.name_side.row(static_cast<Eigen::Index>(i)) = means.back().transpose();
    }
    ctx.name_side.row(static_cast<Eigen::Index>(n)) = group_reference(means, 0.1 * random_unit(rng, d)).transpose();
    ctx.t = t;
    return ctx;
}

} // namespace

TEST(Voronoi, Examples)
{
    const RowMatrix words = rows_of({{1, 0}, {0, 1}, {0.6, 0.8}});
    const auto cells = voronoi_partition(words, rows_of({{1, 0}, {0, 1}}));
    EXPECT_EQ(cells[0], std::vector<std::size_t>{0});
    EXPECT_EQ(cells[1], (std::vector<std::size_t>{1, 2}));

    const auto single = voronoi_partition(words, rows_of({{0.2, -0.3}}));
    EXPECT_EQ(single[0], (std::vector<std::size_t>{0, 1, 2}));

    const auto tie = voronoi_partition(rows_of({{1, 1}}), rows_of({{1, 0}, {0, 1}}));
    EXPECT_EQ(tie[0], std::vector<std::size_t>{0});
    EXPECT_TRUE(tie[1].empty());
    EXPECT_THROW(voronoi_partition(words, RowMatrix(0, 2)), ConfigError);
}

TEST(SelectWords, TopTByScore)
{
    // Scores (group - mu) . (w - c) with group - mu = e0 and c = 0 are the first coordinates.
    const RowMatrix cell = rows_of({{0.1, 0}, {0.9, 0}, {0.5, 0}});
    const SelectedWords s = select_words(cell, {0, 1, 2}, vec({1, 0}), vec({0, 0}), vec({0, 0}), 2);
    EXPECT_TRUE(s.complete);
    EXPECT_EQ(s.positions, (std::vector<std::size_t>{1, 2}));

    const SelectedWords few = select_words(rows_of({{0.3, 0}}), {4}, vec({1, 0}), vec({0, 0}), vec({0, 0}), 3);
    EXPECT_FALSE(few.complete);
    EXPECT_EQ(few.positions, std::vector<std::size_t>{0});

    const SelectedWords tie = select_words(rows_of({{0.5, 0}, {0.5, 1}}), {9, 3}, vec({1, 0}), vec({0, 0}),
                                           vec({0, 0}), 1);
    EXPECT_EQ(tie.positions, std::vector<std::size_t>{1});
    EXPECT_THROW(select_words(cell, {0, 1, 2}, vec({1, 0}), vec({0, 0}), vec({0, 0}), 0), ConfigError);
}

TEST(SelectWords, CategoryMeanTermDoesNotChangeTheChoice)
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 100; ++trial) {
        const RowMatrix cell = random_unit_rows(rng, 15, 6);
        std::vector<std::size_t> ranks(15);
        std::iota(ranks.begin(), ranks.end(), std::size_t{0});
        const Vector g = random_unit(rng, 6);
        const Vector mu = 0.3 * random_unit(rng, 6);
        const auto with = select_words(cell, ranks, g, mu, mean_of_rows(cell), 4);
        const auto without = select_words(cell, ranks, g, mu, Vector::Zero(6), 4);
        EXPECT_EQ(with.positions, without.positions);
    }
}

TEST(Scorer, MatchesVoronoiAndSelectionBuildingBlocks)
{
    std::mt19937_64 rng(2);
    const ScoringContext ctx = random_context(rng, 4, 3, 60, 5, 2);
    Scorer scorer;
    const Selection sel = scorer.score(ctx, ctx.name_side, true);
    const RowMatrix means = ctx.name_side.topRows(4);
    const Vector mu = ctx.name_side.row(4).transpose();
    for (std::size_t j = 0; j < 3; ++j) {
        const RowMatrix words = gather_rows(ctx.pool_vectors, ctx.categories[j]);
        const auto cells = voronoi_partition(words, means);
        for (std::size_t i = 0; i < 4; ++i) {
            std::vector<std::size_t> ranks;
            for (std::size_t p : cells[i]) {
                ranks.push_back(ctx.pool_ranks[ctx.categories[j][p]]);
            }
            const auto chosen = select_words(gather_rows(words, cells[i]), ranks, means.row(static_cast<Eigen::Index>(i)).transpose(),
                                             mu, ctx.category_means[j], ctx.t);
            std::vector<std::size_t> pool_positions;
            for (std::size_t p : chosen.positions) {
                pool_positions.push_back(ctx.categories[j][cells[i][p]]);
            }
            const std::size_t cell = sel.index(i, j);
            EXPECT_EQ(sel.words[cell], pool_positions);
            EXPECT_EQ(sel.complete[cell], chosen.complete);
            if (chosen.complete) {
                const double expected = association_score(means.row(static_cast<Eigen::Index>(i)).transpose(), mu,
                                                          mean_of_rows(ctx.pool_vectors, pool_positions), ctx.pool_mean);
                EXPECT_NEAR(sel.sigma[cell], expected, 1e-12);
            }
            else {
                EXPECT_EQ(sel.sigma[cell], kIncompleteScore);
            }
        }
    }
}

TEST(Scorer, WordsWithinATestAreDisjoint)
{
    std::mt19937_64 rng(3);
    const ScoringContext ctx = random_context(rng, 5, 4, 200, 6, 3);
    Scorer scorer;
    const Selection sel = scorer.score(ctx, ctx.name_side, true);
    for (std::size_t j = 0; j < 4; ++j) {
        std::set<std::size_t> seen;
        for (std::size_t i = 0; i < 5; ++i) {
            for (std::size_t w : sel.words[sel.index(i, j)]) {
                EXPECT_TRUE(seen.insert(w).second);
            }
        }
    }
}

TEST(Scorer, MultiplicitiesSkipTheVoronoiStep)
{
    std::mt19937_64 rng(4);
    ScoringContext ctx = random_context(rng, 3, 2, 40, 4, 2);
    ctx.allow_multiplicities = true;
    Scorer scorer;
    const Selection sel = scorer.score(ctx, ctx.name_side, true);
    for (std::size_t cell = 0; cell < sel.complete.size(); ++cell) {
        EXPECT_TRUE(sel.complete[cell]);
    }
}

TEST(Scorer, IdentityRotationReproducesObservedScoresExactly)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const ScoringContext ctx = random_context(rng, 2 + trial % 4, 3, 90, 7, 2);
        Scorer scorer;
        const Selection observed = scorer.score(ctx, ctx.name_side, false);
        const Selection identity = score_rotated(ctx, RowMatrix::Identity(7, 7));
        for (std::size_t cell = 0; cell < observed.sigma.size(); ++cell) {
            EXPECT_EQ(std::bit_cast<std::uint64_t>(observed.sigma[cell]),
                      std::bit_cast<std::uint64_t>(identity.sigma[cell]));
        }
    }
}

TEST(Scorer, JointRotationOfNamesAndWordsLeavesScoresUnchanged)
{
    std::mt19937_64 rng(6);
    const ScoringContext ctx = random_context(rng, 3, 3, 120, 5, 2);
    const RowMatrix u = haar_rotation(5, rng);
    ScoringContext rotated = ctx;
    rotated.pool_vectors = ctx.pool_vectors * u;
    rotated.name_side = ctx.name_side * u;
    rotated.pool_mean = u.transpose() * ctx.pool_mean;
    for (auto& c : rotated.category_means) {
        c = u.transpose() * c;
    }
    Scorer scorer;
    const Selection a = scorer.score(ctx, ctx.name_side, true);
    const Selection b = scorer.score(rotated, rotated.name_side, true);
    for (std::size_t cell = 0; cell < a.sigma.size(); ++cell) {
        EXPECT_EQ(a.words[cell], b.words[cell]);
        if (a.complete[cell]) {
            EXPECT_NEAR(a.sigma[cell], b.sigma[cell], 1e-12);
        }
    }
}

TEST(Scorer, SingleGroupSingleWordRotatedScore)
{
    std::mt19937_64 rng(7);
    ScoringContext ctx;
    ctx.pool_vectors = random_unit_rows(rng, 3, 4);
    ctx.pool_ranks = {0, 1, 2};
    ctx.categories = {{0}, {1, 2}};
    ctx.category_means = {ctx.pool_vectors.row(0).transpose(), mean_of_rows(ctx.pool_vectors, std::vector<std::size_t>{1, 2})};
    ctx.pool_mean = mean_of_rows(ctx.pool_vectors);
    const Vector group = 0.6 * random_unit(rng, 4);
    const Vector all_names = 0.2 * random_unit(rng, 4);
    ctx.name_side = RowMatrix(2, 4);
    ctx.name_side.row(0) = group.transpose();
    ctx.name_side.row(1) = all_names.transpose();
    ctx.t = 1;
    const RowMatrix u = haar_rotation(4, rng);
    const Selection sel = score_rotated(ctx, u);
    const Vector rotated_dev = u.transpose() * (group - all_names);
    EXPECT_NEAR(sel.sigma[0], rotated_dev.dot(ctx.pool_vectors.row(0).transpose() - ctx.pool_mean), 1e-12);
}

TEST(Haar, OrthogonalAndSignsOfOneDimension)
{
    std::mt19937_64 rng(8);
    for (int k = 0; k < 20; ++k) {
        const RowMatrix u = haar_rotation(30, rng);
        EXPECT_LT((u.transpose() * u - RowMatrix::Identity(30, 30)).cwiseAbs().maxCoeff(), 1e-12);
    }
    int plus = 0;
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
        auto r = make_rng(seed, Stream::rotation, 0);
        const double v = haar_rotation(1, r)(0, 0);
        EXPECT_NEAR(std::abs(v), 1.0, 1e-15);
        plus += v > 0 ? 1 : 0;
    }
    EXPECT_NEAR(plus / 2000.0, 0.5, 4.0 * std::sqrt(0.25 / 2000.0));
}

TEST(Haar, FirstColumnIsUniformOnTheSphere)
{
    std::mt19937_64 rng(9);
    Vector sum = Vector::Zero(3);
    for (int k = 0; k < 10000; ++k) {
        sum += haar_rotation(3, rng).col(0);
    }
    for (Eigen::Index c = 0; c < 3; ++c) {
        EXPECT_LT(std::abs(sum[c] / 10000.0), 4.0 / std::sqrt(10000.0));
    }
}

TEST(Haar, ReflectorRouteMatchesQrRouteInDistribution)
{
    // For Haar U on O(d): E[tr U] = 0, E[(tr U)^2] = 1 and E[U_00^2] = 1/d.
    // An unsigned QR factor fails these, so they separate the conventions.
    const Eigen::Index d = 4;
    const int draws = 20000;
    std::mt19937_64 a(10);
    std::mt19937_64 b(11);
    double tr_a = 0.0, tr2_a = 0.0, u00_a = 0.0;
    double tr_b = 0.0, tr2_b = 0.0, u00_b = 0.0;
    for (int k = 0; k < draws; ++k) {
        const RowMatrix ua = haar_rotation(d, a);
        const RowMatrix ub = oracle::haar_by_qr(d, b);
        tr_a += ua.trace();
        tr2_a += ua.trace() * ua.trace();
        u00_a += ua(0, 0) * ua(0, 0);
        tr_b += ub.trace();
        tr2_b += ub.trace() * ub.trace();
        u00_b += ub(0, 0) * ub(0, 0);
    }
    for (double tr : {tr_a, tr_b}) {
        EXPECT_NEAR(tr / draws, 0.0, 0.04);
    }
    for (double tr2 : {tr2_a, tr2_b}) {
        EXPECT_NEAR(tr2 / draws, 1.0, 0.06);
    }
    for (double u00 : {u00_a, u00_b}) {
        EXPECT_NEAR(u00 / draws, 1.0 / static_cast<double>(d), 0.01);
    }
}

TEST(PValue, Examples)
{
    const std::vector<double> nulls{0.5, 1.2, 0.3};
    EXPECT_DOUBLE_EQ(monte_carlo_pvalue(1.0, nulls), 0.5);
    EXPECT_DOUBLE_EQ(monte_carlo_pvalue(2.0, nulls), 0.25);
    EXPECT_DOUBLE_EQ(monte_carlo_pvalue(0.0, nulls), 1.0);
    const std::vector<double> incomplete{kIncompleteScore, kIncompleteScore};
    EXPECT_DOUBLE_EQ(monte_carlo_pvalue(-5.0, incomplete), 1.0 / 3.0);
}

TEST(PValue, MonotoneInObservedScore)
{
    std::mt19937_64 rng(12);
    std::normal_distribution<double> g;
    std::vector<double> nulls(500);
    for (double& v : nulls) {
        v = g(rng);
    }
    double previous = 1.0;
    for (double s = -4.0; s <= 4.0; s += 0.01) {
        const double p = monte_carlo_pvalue(s, nulls);
        EXPECT_LE(p, previous);
        previous = p;
    }
}

TEST(BenjaminiHochberg, Examples)
{
    const std::vector<double> p{0.01, 0.02, 0.04, 0.5};
    const BhResult r = benjamini_hochberg(p, 0.05);
    EXPECT_EQ(r.rejections, 2u);
    EXPECT_EQ(r.critical_p, 0.02);
    EXPECT_EQ(r.rejected, (std::vector<bool>{true, true, false, false}));

    const std::vector<double> ones{1.0, 1.0, 1.0};
    EXPECT_EQ(benjamini_hochberg(ones, 0.05).rejections, 0u);
    EXPECT_EQ(benjamini_hochberg(ones, 0.05).critical_p, 0.0);

    const std::vector<double> boundary{0.05};
    EXPECT_EQ(benjamini_hochberg(boundary, 0.05).rejections, 1u);

    EXPECT_THROW(benjamini_hochberg(std::vector<double>{}, 0.05), ConfigError);
    EXPECT_THROW(benjamini_hochberg(std::vector<double>{0.0}, 0.05), ConfigError);
    EXPECT_THROW(benjamini_hochberg(std::vector<double>{0.5}, 1.0), ConfigError);
}

TEST(BenjaminiHochberg, MatchesStepDownOracle)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = 1 + static_cast<std::size_t>(trial % 20);
        std::vector<double> p(len);
        for (double& v : p) {
            // Mix of tiny values, ties on a coarse grid and uniform draws.
            const double r = u(rng);
            v = r < 0.3 ? std::max(1e-6, u(rng) * 0.01) : r < 0.5 ? std::ceil(u(rng) * 20.0) / 20.0 : std::max(1e-9, u(rng));
        }
        const auto expected = oracle::benjamini_hochberg(p, 0.05);
        EXPECT_EQ(benjamini_hochberg(p, 0.05).rejected, expected.rejected);
    }
}

TEST(NullScores, IndependentOfThreadCountAndDeterministic)
{
    std::mt19937_64 rng(14);
    const ScoringContext ctx = random_context(rng, 3, 4, 80, 6, 2);
    const NullScores one = null_scores(ctx, 64, 5, 1);
    const NullScores three = null_scores(ctx, 64, 5, 3);
    EXPECT_EQ(one.values, three.values);
    const NullScores other = null_scores(ctx, 64, 6, 1);
    EXPECT_NE(one.values, other.values);
}

TEST(NullScores, RotationRMatchesAnExplicitHaarMatrix)
{
    std::mt19937_64 rng(15);
    const ScoringContext ctx = random_context(rng, 3, 2, 50, 5, 2);
    const NullScores nulls = null_scores(ctx, 4, 77, 1);
    for (std::size_t r = 0; r < 4; ++r) {
        auto stream = make_rng(77, Stream::rotation, r);
        const Selection sel = score_rotated(ctx, haar_rotation(5, stream));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                const double expected = sel.sigma[sel.index(i, j)];
                if (expected == kIncompleteScore) {
                    EXPECT_EQ(nulls.at(i, j, r), kIncompleteScore);
                }
                else {
                    EXPECT_NEAR(nulls.at(i, j, r), expected, 1e-12);
                }
            }
        }
    }
}

TEST(NullCache, RoundTripAndHeaderMismatch)
{
    TempDir dir;
    NullScores nulls(2, 3, 5);
    std::mt19937_64 rng(16);
    std::normal_distribution<double> g;
    for (double& v : nulls.values) {
        v = g(rng);
    }
    nulls.at(1, 2, 4) = kIncompleteScore;
    write_null_cache(dir / "c.bin", nulls, 7, 42);
    const NullCacheHeader header{2, 3, 5, 7, 42};
    EXPECT_EQ(read_null_cache_header(dir / "c.bin"), header);
    const auto back = read_null_cache(dir / "c.bin", header);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->values, nulls.values);
    EXPECT_FALSE(read_null_cache(dir / "c.bin", {2, 3, 5, 7, 43}).has_value());

    std::filesystem::resize_file(dir / "c.bin", 5 * 8 + 8 * 10 + 3);
    EXPECT_THROW(read_null_cache(dir / "c.bin", header), TruncatedFile);
}

TEST(Config, Validation)
{
    UbeConfig cfg;
    EXPECT_EQ(cfg.n, 12u);
    EXPECT_EQ(cfg.m, 64u);
    EXPECT_EQ(cfg.M, 30000u);
    EXPECT_EQ(cfg.t, 3u);
    EXPECT_EQ(cfg.alpha, 0.05);
    EXPECT_EQ(cfg.rotations, 10000u);
    EXPECT_NO_THROW(cfg.validate());
    for (auto mutate : std::vector<std::function<void(UbeConfig&)>>{
             [](UbeConfig& c) { c.n = 0; }, [](UbeConfig& c) { c.m = 0; }, [](UbeConfig& c) { c.t = 0; },
             [](UbeConfig& c) { c.alpha = 0.0; }, [](UbeConfig& c) { c.alpha = 1.0; },
             [](UbeConfig& c) { c.rotations = 0; }}) {
        UbeConfig bad;
        mutate(bad);
        EXPECT_THROW(bad.validate(), ConfigError);
    }
}

class Pipeline : public ::testing::Test {
protected:
    static UbeConfig small_config()
    {
        UbeConfig cfg;
        cfg.n = 4;
        cfg.m = 4;
        cfg.M = 500;
        cfg.t = 2;
        cfg.rotations = 200;
        cfg.seed = 3;
        cfg.threads = 1;
        return cfg;
    }
};

TEST_F(Pipeline, PlantedPairsAreSignificantAndReportIsConsistent)
{
    const SyntheticCorpus corpus = planted_corpus(1);
    const UbeConfig cfg = small_config();
    const AuditRun run = run_audit(corpus.embedding, corpus.names, cfg);
    const AuditReport& rep = run.report;

    const std::size_t group_a = majority_cluster(run.model.name_clusters, corpus.name_truth, 0);
    const std::size_t group_b = majority_cluster(run.model.name_clusters, corpus.name_truth, 1);
    std::vector<std::size_t> word_truth(run.model.pool.size());
    for (std::size_t p = 0; p < word_truth.size(); ++p) {
        word_truth[p] = corpus.word_truth[run.model.pool.ranks[p]];
    }
    const std::size_t cat_c = majority_cluster(run.model.word_clusters, word_truth, 2);
    const std::size_t cat_d = majority_cluster(run.model.word_clusters, word_truth, 3);
    EXPECT_TRUE(run.significant[group_a * cfg.m + cat_c]);
    EXPECT_TRUE(run.significant[group_b * cfg.m + cat_d]);

    std::size_t complete = 0;
    std::size_t significant = 0;
    for (const auto& t : rep.tests) {
        std::size_t count = 0;
        for (const auto& c : t.cells) {
            complete += c.complete ? 1 : 0;
            if (c.significant) {
                ++count;
                EXPECT_LE(*c.p_value, rep.critical_p);
            }
        }
        EXPECT_EQ(count, t.significant_count);
        significant += count;
    }
    EXPECT_EQ(complete, rep.hypotheses);
    EXPECT_EQ(significant, rep.significant);
    for (std::size_t r = 1; r < rep.tests.size(); ++r) {
        const auto& prev = rep.tests[r - 1];
        const auto& cur = rep.tests[r];
        EXPECT_EQ(cur.rank, r + 1);
        if (cur.significant_count > 0) {
            EXPECT_GT(prev.significant_count, 0u);
            EXPECT_GE(prev.total_significant_score, cur.total_significant_score);
        }
    }
    for (const auto& g : rep.groups) {
        EXPECT_EQ(g.illustrative.size() + g.residual, g.size);
        EXPECT_EQ(g.label[0], 'G');
    }
}

TEST_F(Pipeline, DeterministicForAFixedSeedAndUsesTheCache)
{
    const SyntheticCorpus corpus = planted_corpus(2);
    UbeConfig cfg = small_config();
    TempDir dir;
    RunOptions opt;
    opt.null_cache = dir / "nulls.bin";
    const std::string first = render(run_audit(corpus.embedding, corpus.names, cfg, opt).report, ReportFormat::json);
    ASSERT_TRUE(std::filesystem::exists(*opt.null_cache));
    const std::string cached = render(run_audit(corpus.embedding, corpus.names, cfg, opt).report, ReportFormat::json);
    cfg.threads = 2;
    const std::string fresh = render(enumerate_biases(corpus.embedding, corpus.names, cfg), ReportFormat::json);
    EXPECT_EQ(first, cached);
    EXPECT_EQ(first, fresh);
}

TEST_F(Pipeline, NamesMissingFromTheEmbeddingAreRejected)
{
    const SyntheticCorpus corpus = planted_corpus(3);
    NameTable names = corpus.names;
    names.records.push_back({"Nobody", 1, std::nullopt, std::nullopt, {}});
    EXPECT_THROW(run_audit(corpus.embedding, names, small_config()), UnknownToken);
    UbeConfig too_many = small_config();
    too_many.n = corpus.names.size() + 1;
    EXPECT_THROW(run_audit(corpus.embedding, corpus.names, too_many), ConfigError);
}
