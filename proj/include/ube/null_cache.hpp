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

// Binary cache of rotational null scores.
//
// Layout, all little-endian: five uint64 header fields n, m, R, d, seed,
// then n*m*R float64 scores in (i, j, r) order, r fastest. Incomplete
// rotated pairs are stored as -infinity.

#include "ube/error.hpp"

#include <bit>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <vector>

namespace ube {

struct NullScores {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t rotations = 0;
    std::vector<double> values;

    NullScores() = default;
    NullScores(std::size_t n_, std::size_t m_, std::size_t r_)
        : n(n_), m(m_), rotations(r_), values(n_ * m_ * r_, 0.0)
    {
    }

    std::size_t offset(std::size_t i, std::size_t j) const { return (i * m + j) * rotations; }
    double& at(std::size_t i, std::size_t j, std::size_t r) { return values[offset(i, j) + r]; }
    double at(std::size_t i, std::size_t j, std::size_t r) const { return values[offset(i, j) + r]; }

    std::span<const double> pair(std::size_t i, std::size_t j) const
    {
        return std::span<const double>(values).subspan(offset(i, j), rotations);
    }
};

struct NullCacheHeader {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t rotations = 0;
    std::uint64_t dim = 0;
    std::uint64_t seed = 0;

    bool operator==(const NullCacheHeader&) const = default;
};

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v)
{
    char bytes[8];
    for (int b = 0; b < 8; ++b) {
        bytes[b] = static_cast<char>((v >> (8 * b)) & 0xFFu);
    }
    out.write(bytes, 8);
}

inline bool get_u64(std::istream& in, std::uint64_t& v)
{
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        return false;
    }
    v = 0;
    for (int b = 0; b < 8; ++b) {
        v |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    }
    return true;
}

} // namespace detail

inline void write_null_cache(const std::filesystem::path& path, const NullScores& nulls, std::uint64_t dim,
                             std::uint64_t seed)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error("cannot write null cache " + path.string());
    }
    detail::put_u64(out, nulls.n);
    detail::put_u64(out, nulls.m);
    detail::put_u64(out, nulls.rotations);
    detail::put_u64(out, dim);
    detail::put_u64(out, seed);
    for (double v : nulls.values) {
        detail::put_u64(out, std::bit_cast<std::uint64_t>(v));
    }
}

inline NullCacheHeader read_null_cache_header(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    NullCacheHeader h;
    if (!in || !detail::get_u64(in, h.n) || !detail::get_u64(in, h.m) || !detail::get_u64(in, h.rotations) ||
        !detail::get_u64(in, h.dim) || !detail::get_u64(in, h.seed)) {
        throw FormatError("unreadable null cache header in " + path.string());
    }
    return h;
}

/// Loads the cache; returns nullopt when its header differs from `expected`.
inline std::optional<NullScores> read_null_cache(const std::filesystem::path& path, const NullCacheHeader& expected)
{
    if (read_null_cache_header(path) != expected) {
        return std::nullopt;
    }
    std::ifstream in(path, std::ios::binary);
    in.seekg(5 * 8);
    NullScores nulls(expected.n, expected.m, expected.rotations);
    std::uint64_t offset = 5 * 8;
    for (double& v : nulls.values) {
        std::uint64_t bits = 0;
        if (!detail::get_u64(in, bits)) {
            throw TruncatedFile(offset);
        }
        v = std::bit_cast<double>(bits);
        offset += 8;
    }
    return nulls;
}

} // namespace ube
