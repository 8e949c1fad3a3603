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

// Word-embedding loaders (word2vec binary, GloVe/fastText text), unit
// normalization and the frequent lower-case word pool.

#include "ube/error.hpp"
#include "ube/linalg.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ube {

struct LoadStats {
    std::size_t kept = 0;
    std::size_t dropped_zero = 0;
    std::size_t dropped_duplicate = 0;
};

/// Tokens and vectors in file order. Zero vectors and repeated tokens are
/// dropped while loading and counted in `stats`.
struct RawEmbedding {
    std::size_t dim = 0;
    std::vector<std::string> tokens;
    RowMatrix vectors;
    LoadStats stats;

    std::size_t size() const noexcept { return tokens.size(); }
};

/// Unit-length vectors. Row index doubles as frequency rank.
class UnitEmbedding {
public:
    UnitEmbedding() = default;

    UnitEmbedding(std::vector<std::string> tokens, RowMatrix unit_vectors)
        : tokens_(std::move(tokens)), vectors_(std::move(unit_vectors))
    {
        if (static_cast<std::size_t>(vectors_.rows()) != tokens_.size()) {
            throw ConfigError("token count does not match vector rows");
        }
        rank_.reserve(tokens_.size());
        for (std::size_t i = 0; i < tokens_.size(); ++i) {
            if (!rank_.emplace(tokens_[i], i).second) {
                throw ConfigError("duplicate token: " + tokens_[i]);
            }
        }
    }

    std::size_t size() const noexcept { return tokens_.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(vectors_.cols()); }
    const std::vector<std::string>& tokens() const noexcept { return tokens_; }
    const std::string& token(std::size_t rank) const { return tokens_.at(rank); }
    const RowMatrix& vectors() const noexcept { return vectors_; }
    auto row(std::size_t rank) const { return vectors_.row(static_cast<Eigen::Index>(rank)); }

    std::optional<std::size_t> find(std::string_view token) const
    {
        auto it = rank_.find(std::string(token));
        if (it == rank_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::size_t rank(std::string_view token) const
    {
        auto found = find(token);
        if (!found) {
            throw UnknownToken(std::string(token));
        }
        return *found;
    }

    bool contains(std::string_view token) const { return find(token).has_value(); }

private:
    std::vector<std::string> tokens_;
    RowMatrix vectors_;
    std::unordered_map<std::string, std::size_t> rank_;
};

/// The attribute-word pool: at most M frequent lower-case tokens.
struct WordPool {
    std::vector<std::size_t> ranks;  // embedding ranks, ascending
    std::vector<std::string> words;
    Vector pool_mean;

    std::size_t size() const noexcept { return ranks.size(); }
};

enum class TextHeader { expected, absent, automatic };

namespace detail {

// Accumulates entries while enforcing the nonzero / unique-token invariants.
class EmbeddingBuilder {
public:
    explicit EmbeddingBuilder(std::size_t dim, std::size_t reserve = 0) : dim_(dim)
    {
        values_.reserve(reserve * dim);
        tokens_.reserve(reserve);
    }

    void add(std::string token, std::span<const double> vec)
    {
        bool nonzero = std::any_of(vec.begin(), vec.end(), [](double v) { return v != 0.0; });
        if (!nonzero) {
            ++stats_.dropped_zero;
            return;
        }
        if (!seen_.insert(token).second) {
            ++stats_.dropped_duplicate;
            return;
        }
        tokens_.push_back(std::move(token));
        values_.insert(values_.end(), vec.begin(), vec.end());
    }

    RawEmbedding finish(std::string_view source)
    {
        RawEmbedding out;
        out.dim = dim_;
        out.vectors = Eigen::Map<const RowMatrix>(values_.data(),
                                                  static_cast<Eigen::Index>(tokens_.size()),
                                                  static_cast<Eigen::Index>(dim_));
        out.tokens = std::move(tokens_);
        stats_.kept = out.tokens.size();
        out.stats = stats_;
        spdlog::info("event=embedding_loaded source={} dim={} kept={} dropped_zero={} dropped_duplicate={}",
                     source, dim_, stats_.kept, stats_.dropped_zero, stats_.dropped_duplicate);
        if (stats_.dropped_zero > 0) {
            spdlog::warn("event=zero_vectors_dropped count={}", stats_.dropped_zero);
        }
        if (stats_.dropped_duplicate > 0) {
            spdlog::warn("event=duplicate_tokens_dropped count={}", stats_.dropped_duplicate);
        }
        return out;
    }

private:
    std::size_t dim_;
    std::vector<std::string> tokens_;
    std::vector<double> values_;
    std::unordered_set<std::string> seen_;
    LoadStats stats_;
};

inline float float_from_le(const unsigned char* bytes)
{
    std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
                         (static_cast<std::uint32_t>(bytes[2]) << 16) |
                         (static_cast<std::uint32_t>(bytes[3]) << 24);
    return std::bit_cast<float>(bits);
}

inline void float_to_le(float value, char* out)
{
    auto bits = std::bit_cast<std::uint32_t>(value);
    for (int b = 0; b < 4; ++b) {
        out[b] = static_cast<char>((bits >> (8 * b)) & 0xFFu);
    }
}

inline bool parse_size(std::string_view field, std::int64_t& out)
{
    if (field.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

inline bool parse_double(std::string_view field, double& out)
{
    if (field.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

inline std::vector<std::string_view> split_spaces(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t next = line.find(' ', pos);
        if (next == std::string_view::npos) {
            next = line.size();
        }
        fields.push_back(line.substr(pos, next - pos));
        pos = next + 1;
    }
    return fields;
}

inline std::string_view trim_line_end(std::string_view line)
{
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
        line.remove_suffix(1);
    }
    return line;
}

inline std::ifstream open_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    return in;
}

} // namespace detail

/// Reads the word2vec binary format: an ASCII "<count> <dim>\n" header, then
/// per record the token, one space, and dim little-endian float32 values,
/// optionally followed by a newline.
inline RawEmbedding load_word2vec_binary(const std::filesystem::path& path)
{
    std::ifstream in = detail::open_binary(path);

    std::string header;
    if (!std::getline(in, header)) {
        throw FormatError("missing word2vec header");
    }
    std::uint64_t offset = header.size() + 1;
    auto fields = detail::split_spaces(detail::trim_line_end(header));
    std::int64_t count = 0;
    std::int64_t dim = 0;
    if (fields.size() != 2 || !detail::parse_size(fields[0], count) || !detail::parse_size(fields[1], dim)) {
        throw FormatError("malformed word2vec header: '" + header + "'", 1);
    }
    if (dim <= 0 || count < 0) {
        throw FormatError("word2vec header declares non-positive dimension", 1);
    }

    const auto d = static_cast<std::size_t>(dim);
    detail::EmbeddingBuilder builder(d, static_cast<std::size_t>(std::min<std::int64_t>(count, 1 << 22)));
    std::vector<unsigned char> buffer(4 * d);
    std::vector<double> vec(d);
    std::string token;

    for (std::int64_t record = 0; record < count; ++record) {
        token.clear();
        int ch = in.get();
        while (ch == '\n') {
            ++offset;
            ch = in.get();
        }
        while (ch != ' ' && ch != std::char_traits<char>::eof()) {
            token.push_back(static_cast<char>(ch));
            ch = in.get();
        }
        if (ch == std::char_traits<char>::eof()) {
            throw TruncatedFile(offset + token.size());
        }
        offset += token.size() + 1;
        in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()));
        if (in.gcount() != static_cast<std::streamsize>(buffer.size())) {
            throw TruncatedFile(offset + static_cast<std::uint64_t>(in.gcount()));
        }
        offset += buffer.size();
        for (std::size_t k = 0; k < d; ++k) {
            vec[k] = detail::float_from_le(buffer.data() + 4 * k);
        }
        builder.add(token, vec);
    }
    return builder.finish("word2vec_binary");
}

/// Reads space-separated "token v1 ... vd" lines (GloVe, fastText .vec).
inline RawEmbedding load_text_vectors(const std::filesystem::path& path, TextHeader header = TextHeader::automatic)
{
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }

    std::string raw_line;
    std::size_t line_no = 0;
    std::optional<std::int64_t> declared_dim;
    std::optional<detail::EmbeddingBuilder> builder;
    std::size_t dim = 0;
    std::vector<double> vec;

    while (std::getline(in, raw_line)) {
        ++line_no;
        std::string_view line = detail::trim_line_end(raw_line);
        if (line.empty()) {
            continue;
        }
        auto fields = detail::split_spaces(line);

        if (line_no == 1 && header != TextHeader::absent) {
            std::int64_t count = 0;
            std::int64_t hdim = 0;
            bool is_header = fields.size() == 2 && detail::parse_size(fields[0], count) &&
                             detail::parse_size(fields[1], hdim);
            if (is_header) {
                if (hdim <= 0) {
                    throw FormatError("header declares non-positive dimension", line_no);
                }
                declared_dim = hdim;
                continue;
            }
            if (header == TextHeader::expected) {
                throw FormatError("expected '<count> <dim>' header", line_no);
            }
        }

        if (fields.size() < 2) {
            throw FormatError("line has no vector components", line_no);
        }
        if (!builder) {
            dim = fields.size() - 1;
            if (declared_dim && static_cast<std::size_t>(*declared_dim) != dim) {
                throw FormatError("dimension " + std::to_string(dim) + " differs from header " +
                                      std::to_string(*declared_dim),
                                  line_no);
            }
            builder.emplace(dim);
            vec.resize(dim);
        }
        if (fields.size() - 1 != dim) {
            throw FormatError("inconsistent dimension " + std::to_string(fields.size() - 1) + ", expected " +
                                  std::to_string(dim),
                              line_no);
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (!detail::parse_double(fields[k + 1], vec[k])) {
                throw FormatError("non-numeric component '" + std::string(fields[k + 1]) + "'", line_no);
            }
        }
        builder->add(std::string(fields[0]), vec);
    }
    if (!builder) {
        throw FormatError("no vectors in " + path.string());
    }
    return builder->finish("text");
}

/// Writes the word2vec binary format (float32, newline after each record).
inline void write_word2vec_binary(const std::filesystem::path& path, const std::vector<std::string>& tokens,
                                  const RowMatrix& vectors)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << tokens.size() << ' ' << vectors.cols() << '\n';
    std::vector<char> buffer(4 * static_cast<std::size_t>(vectors.cols()));
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out << tokens[i] << ' ';
        for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
            detail::float_to_le(static_cast<float>(vectors(static_cast<Eigen::Index>(i), k)),
                                buffer.data() + 4 * k);
        }
        out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
        out << '\n';
    }
}

/// Writes the text format with shortest round-trip decimal representation.
inline void write_text_vectors(const std::filesystem::path& path, const std::vector<std::string>& tokens,
                               const RowMatrix& vectors, bool with_header)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    if (with_header) {
        out << tokens.size() << ' ' << vectors.cols() << '\n';
    }
    std::array<char, 64> buf{};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        out << tokens[i];
        for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
            auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                           vectors(static_cast<Eigen::Index>(i), k));
            out << ' ' << std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data()));
        }
        out << '\n';
    }
}

inline UnitEmbedding normalize(const RawEmbedding& raw)
{
    RowMatrix unit = raw.vectors;
    for (Eigen::Index r = 0; r < unit.rows(); ++r) {
        double norm = unit.row(r).norm();
        if (norm == 0.0) {
            throw ConfigError("zero vector for token " + raw.tokens[static_cast<std::size_t>(r)]);
        }
        unit.row(r) /= norm;
    }
    return UnitEmbedding(raw.tokens, std::move(unit));
}

namespace detail {

inline std::string fold_token(std::string_view token, bool underscore_as_space)
{
    std::string out(token);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') {
            c = static_cast<char>(c - 'A' + 'a');
        }
        else if (underscore_as_space && c == '_') {
            c = ' ';
        }
    }
    return out;
}

inline bool is_lowercase_phrase(std::string_view token, bool underscore_as_space)
{
    if (token.empty()) {
        return false;
    }
    return std::all_of(token.begin(), token.end(), [&](char c) {
        return (c >= 'a' && c <= 'z') || c == ' ' || (underscore_as_space && c == '_');
    });
}

} // namespace detail

/// Selects the M most frequent tokens made only of a-z and spaces, skipping a
/// token when a case variant of it ranks higher ("john" loses to "John").
/// With `underscore_as_space`, '_' in phrase tokens counts as a space.
inline WordPool frequent_lowercase_words(const UnitEmbedding& emb, std::size_t max_words,
                                         bool underscore_as_space = true)
{
    if (max_words == 0) {
        throw ConfigError("word pool size M must be at least 1");
    }
    WordPool pool;
    std::unordered_set<std::string> folded_seen;
    for (std::size_t rank = 0; rank < emb.size() && pool.ranks.size() < max_words; ++rank) {
        const std::string& token = emb.token(rank);
        std::string folded = detail::fold_token(token, underscore_as_space);
        bool shadowed = folded_seen.contains(folded);
        folded_seen.insert(std::move(folded));
        if (!shadowed && detail::is_lowercase_phrase(token, underscore_as_space)) {
            pool.ranks.push_back(rank);
            pool.words.push_back(token);
        }
    }
    if (pool.ranks.size() < max_words) {
        spdlog::warn("event=word_pool_short requested={} available={}", max_words, pool.ranks.size());
    }
    pool.pool_mean = mean_of_rows(emb.vectors(), pool.ranks);
    return pool;
}

} // namespace ube
