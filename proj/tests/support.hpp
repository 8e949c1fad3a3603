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

// Synthetic embeddings and fixtures shared by the test binaries.

#include "ube/ube.hpp"

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace ube::testing {

// Distinct letters-only token: prefix followed by a base-26 encoding of idx.
inline std::string letters_token(const std::string& prefix, std::size_t idx, std::size_t width = 4)
{
    std::string out = prefix;
    std::string digits(width, 'a');
    for (std::size_t k = 0; k < width; ++k) {
        digits[width - 1 - k] = static_cast<char>('a' + idx % 26);
        idx /= 26;
    }
    return out + digits;
}

inline Vector gaussian_vector(std::mt19937_64& rng, Eigen::Index d)
{
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        v[k] = g(rng);
    }
    return v;
}

inline Vector random_unit(std::mt19937_64& rng, Eigen::Index d)
{
    Vector v = gaussian_vector(rng, d);
    return v / v.norm();
}

inline RowMatrix random_unit_rows(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index d)
{
    RowMatrix out(rows, d);
    for (Eigen::Index r = 0; r < rows; ++r) {
        out.row(r) = random_unit(rng, d).transpose();
    }
    return out;
}

inline RowMatrix rows_of(std::initializer_list<std::initializer_list<double>> values)
{
    RowMatrix out(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : values) {
        Eigen::Index c = 0;
        for (double v : row) {
            out(r, c++) = v;
        }
        ++r;
    }
    return out;
}

inline Vector vec(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index k = 0;
    for (double x : values) {
        v[k++] = x;
    }
    return v;
}

inline UnitEmbedding unit_embedding(std::vector<std::string> tokens, const RowMatrix& vectors)
{
    RawEmbedding raw;
    raw.dim = static_cast<std::size_t>(vectors.cols());
    raw.tokens = std::move(tokens);
    raw.vectors = vectors;
    return normalize(raw);
}

inline NameTable plain_name_table(const std::vector<std::string>& names)
{
    NameTable table;
    table.source = NameSource::other;
    for (std::size_t i = 0; i < names.size(); ++i) {
        NameRecord r;
        r.name = names[i];
        r.total_count = 1000 + names.size() - i;
        table.records.push_back(r);
    }
    return table;
}

/// Names ("Xaaaa"...) and lower-case words ("waaaa"...) in one embedding.
struct SyntheticCorpus {
    UnitEmbedding embedding;
    NameTable names;
    std::vector<std::size_t> name_truth;  // planted label per name (SIZE_MAX: none)
    std::vector<std::size_t> word_truth;  // planted label per word (SIZE_MAX: none)
    std::vector<std::string> name_tokens;
    std::vector<std::string> word_tokens;
};

inline SyntheticCorpus assemble_corpus(const RowMatrix& names, const RowMatrix& words,
                                       std::vector<std::size_t> name_truth, std::vector<std::size_t> word_truth)
{
    SyntheticCorpus c;
    std::vector<std::string> tokens;
    RowMatrix all(names.rows() + words.rows(), names.cols());
    // Interleave words first so word ranks precede names; order is arbitrary.
    for (Eigen::Index w = 0; w < words.rows(); ++w) {
        c.word_tokens.push_back(letters_token("w", static_cast<std::size_t>(w)));
        tokens.push_back(c.word_tokens.back());
        all.row(w) = words.row(w);
    }
    for (Eigen::Index x = 0; x < names.rows(); ++x) {
        std::string name = letters_token("X", static_cast<std::size_t>(x));
        c.name_tokens.push_back(name);
        tokens.push_back(name);
        all.row(words.rows() + x) = names.row(x);
    }
    c.embedding = unit_embedding(tokens, all);
    c.names = plain_name_table(c.name_tokens);
    c.name_truth = std::move(name_truth);
    c.word_truth = std::move(word_truth);
    return c;
}

/// Names and words drawn independently and uniformly on the unit sphere.
inline SyntheticCorpus null_corpus(std::uint64_t seed, std::size_t names, std::size_t words, Eigen::Index d)
{
    std::mt19937_64 rng(seed);
    RowMatrix x = random_unit_rows(rng, static_cast<Eigen::Index>(names), d);
    RowMatrix w = random_unit_rows(rng, static_cast<Eigen::Index>(words), d);
    return assemble_corpus(x, w, std::vector<std::size_t>(names, SIZE_MAX), std::vector<std::size_t>(words, SIZE_MAX));
}

/// Planted-bias corpus.
///
/// One unit direction p. Planted tokens are normalize(+/-0.4 p + 0.1 z)
/// with z standard Gaussian in R^d: names of group A carry +p, group B carry
/// -p, category C words carry +p and category D words carry -p (labels 0..3
/// in that order). The remaining names and words are uniform on the sphere.
/// The sign balance keeps mu and the pool mean free of p, so only (A, C) and
/// (B, D) carry a planted association.
struct PlantedSpec {
    std::size_t names_per_planted = 50;
    std::size_t uniform_names = 100;
    std::size_t words_per_planted = 100;
    std::size_t uniform_words = 300;
    Eigen::Index d = 20;
    double coefficient = 0.4;
    double noise = 0.1;
};

inline SyntheticCorpus planted_corpus(std::uint64_t seed, const PlantedSpec& spec = {})
{
    std::mt19937_64 rng(seed);
    Vector p = Vector::Zero(spec.d);
    p[0] = 1.0;  // any fixed unit direction; the uniform part is isotropic
    auto planted = [&](double sign) {
        Vector v = sign * spec.coefficient * p + spec.noise * gaussian_vector(rng, spec.d);
        return Vector(v / v.norm());
    };

    const std::size_t n_names = 2 * spec.names_per_planted + spec.uniform_names;
    const std::size_t n_words = 2 * spec.words_per_planted + spec.uniform_words;
    RowMatrix x(static_cast<Eigen::Index>(n_names), spec.d);
    RowMatrix w(static_cast<Eigen::Index>(n_words), spec.d);
    std::vector<std::size_t> name_truth(n_names, SIZE_MAX);
    std::vector<std::size_t> word_truth(n_words, SIZE_MAX);
    std::size_t row = 0;
    for (std::size_t k = 0; k < spec.names_per_planted; ++k, ++row) {
        x.row(static_cast<Eigen::Index>(row)) = planted(+1.0).transpose();
        name_truth[row] = 0;
    }
    for (std::size_t k = 0; k < spec.names_per_planted; ++k, ++row) {
        x.row(static_cast<Eigen::Index>(row)) = planted(-1.0).transpose();
        name_truth[row] = 1;
    }
    for (; row < n_names; ++row) {
        x.row(static_cast<Eigen::Index>(row)) = random_unit(rng, spec.d).transpose();
    }
    row = 0;
    for (std::size_t k = 0; k < spec.words_per_planted; ++k, ++row) {
        w.row(static_cast<Eigen::Index>(row)) = planted(+1.0).transpose();
        word_truth[row] = 2;
    }
    for (std::size_t k = 0; k < spec.words_per_planted; ++k, ++row) {
        w.row(static_cast<Eigen::Index>(row)) = planted(-1.0).transpose();
        word_truth[row] = 3;
    }
    for (; row < n_words; ++row) {
        w.row(static_cast<Eigen::Index>(row)) = random_unit(rng, spec.d).transpose();
    }
    return assemble_corpus(x, w, std::move(name_truth), std::move(word_truth));
}

/// Majority cluster id among tokens with the given planted label.
inline std::size_t majority_cluster(const Clustering& c, const std::vector<std::size_t>& truth, std::size_t label)
{
    std::vector<std::size_t> votes(c.k, 0);
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == label) {
            ++votes[c.assignment[i]];
        }
    }
    return static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("ube_test_" + std::to_string(rd()) + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace ube::testing
