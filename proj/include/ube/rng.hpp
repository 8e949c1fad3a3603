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

#include <cstdint>
#include <random>

namespace ube {

/// Independent random streams derived from the run seed.
///
/// Every consumer of randomness gets its own generator keyed by
/// (seed, stream, index), so rotation r draws the same matrix no matter which
/// worker thread runs it or in what order.
enum class Stream : std::uint32_t {
    name_clustering = 1,
    word_clustering = 2,
    rotation = 3,
    negative_sampling = 4,
    svm = 5,
};

inline std::mt19937_64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return std::mt19937_64(seq);
}

} // namespace ube
