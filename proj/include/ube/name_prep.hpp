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

// Name lists: SSA baby-name and Census surname ingestion, cleaning against an
// embedding, and per-group demographic summaries.

#include "ube/embedding_io.hpp"
#include "ube/error.hpp"
#include "ube/linear_svm.hpp"
#include "ube/rng.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ube {

enum class Race : std::size_t { black = 0, hispanic, asian_pacific, white, native };
inline constexpr std::size_t kRaceCount = 5;
inline constexpr std::array<std::string_view, kRaceCount> kRaceKeys{"black", "hispanic", "asian_pacific", "white",
                                                                    "native"};

using RacePercentages = std::array<std::optional<double>, kRaceCount>;

struct NameRecord {
    std::string name;
    std::uint64_t total_count = 0;
    std::optional<double> fraction_female;  // first names only
    std::optional<double> mean_birth_year;  // first names only
    RacePercentages race_pcts{};            // surnames only; absent when suppressed
};

enum class NameSource { ssa, census, other };

struct NameTable {
    std::vector<NameRecord> records;
    NameSource source = NameSource::other;
    std::size_t malformed_lines = 0;

    std::size_t size() const noexcept { return records.size(); }

    std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        out.reserve(records.size());
        for (const auto& r : records) {
            out.push_back(r.name);
        }
        return out;
    }

    const NameRecord* find(std::string_view name) const
    {
        for (const auto& r : records) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }
};

struct SsaOptions {
    int year_min = 1938;
    int year_max = 2017;
    std::uint64_t min_count = 1000;
};

enum class NameCase { title, lower, upper, as_is };

struct CensusOptions {
    std::uint64_t min_count = 1000;
    NameCase name_case = NameCase::title;
};

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line)
{
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (char c : line) {
        if (c == '"') {
            quoted = !quoted;
        }
        else if (c == ',' && !quoted) {
            fields.push_back(std::move(current));
            current.clear();
        }
        else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

inline std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

inline bool parse_count(std::string_view s, std::uint64_t& out)
{
    if (s.empty()) {
        return false;
    }
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string apply_case(std::string_view name, NameCase mode)
{
    std::string out(name);
    auto lower = [](char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); };
    auto upper = [](char c) { return static_cast<char>(std::toupper(static_cast<unsigned char>(c))); };
    switch (mode) {
    case NameCase::as_is:
        break;
    case NameCase::lower:
        std::transform(out.begin(), out.end(), out.begin(), lower);
        break;
    case NameCase::upper:
        std::transform(out.begin(), out.end(), out.begin(), upper);
        break;
    case NameCase::title: {
        bool start = true;
        for (char& c : out) {
            c = start ? upper(c) : lower(c);
            start = !std::isalpha(static_cast<unsigned char>(c));
        }
        break;
    }
    }
    return out;
}

inline void sort_by_count(std::vector<NameRecord>& records)
{
    std::sort(records.begin(), records.end(), [](const NameRecord& a, const NameRecord& b) {
        if (a.total_count != b.total_count) {
            return a.total_count > b.total_count;
        }
        return a.name < b.name;
    });
}

} // namespace detail

/// Aggregates SSA yobYYYY.txt files ("name,sex,count") over [year_min, year_max].
/// Each name appears once; fraction_female and the count-weighted mean birth
/// year are computed over the selected years. Output is sorted by count.
inline NameTable ingest_ssa(const std::filesystem::path& dir, const SsaOptions& opt = {})
{
    if (opt.year_min > opt.year_max) {
        throw ConfigError("year_min exceeds year_max");
    }
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
        throw IngestError("not a directory: " + dir.string());
    }

    std::map<int, std::filesystem::path> files;
    static const std::regex pattern(R"(yob(\d{4})\.txt)");
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::smatch m;
        const std::string fname = entry.path().filename().string();
        if (std::regex_match(fname, m, pattern)) {
            int year = std::stoi(m[1].str());
            if (year >= opt.year_min && year <= opt.year_max) {
                files.emplace(year, entry.path());
            }
        }
    }

    struct Tally {
        std::uint64_t female = 0;
        std::uint64_t male = 0;
        std::uint64_t year_weighted = 0;
    };
    std::map<std::string, Tally> tallies;
    NameTable table;
    table.source = NameSource::ssa;

    for (const auto& [year, path] : files) {
        std::ifstream in(path);
        if (!in) {
            throw IngestError("cannot read " + path.string());
        }
        std::string line;
        while (std::getline(in, line)) {
            std::string_view view = detail::trim_line_end(line);
            if (view.empty()) {
                continue;
            }
            auto fields = detail::split_csv(view);
            std::uint64_t count = 0;
            if (fields.size() != 3 || fields[0].empty() || (fields[1] != "F" && fields[1] != "M") ||
                !detail::parse_count(fields[2], count)) {
                ++table.malformed_lines;
                continue;
            }
            Tally& t = tallies[fields[0]];
            (fields[1] == "F" ? t.female : t.male) += count;
            t.year_weighted += count * static_cast<std::uint64_t>(year);
        }
    }
    if (table.malformed_lines > 0) {
        spdlog::warn("event=ssa_malformed_lines count={}", table.malformed_lines);
    }

    for (const auto& [name, t] : tallies) {
        const std::uint64_t total = t.female + t.male;
        if (total < opt.min_count || total == 0) {
            continue;
        }
        NameRecord rec;
        rec.name = name;
        rec.total_count = total;
        rec.fraction_female = static_cast<double>(t.female) / static_cast<double>(total);
        rec.mean_birth_year = static_cast<double>(t.year_weighted) / static_cast<double>(total);
        table.records.push_back(std::move(rec));
    }
    detail::sort_by_count(table.records);
    spdlog::info("event=ssa_ingested files={} names={}", files.size(), table.records.size());
    return table;
}

/// Reads a Census surname CSV with a header row. Required columns: name, count.
/// Optional race columns: pctblack, pcthispanic, pctapi, pctwhite, pctaian.
/// Non-numeric percentages such as "(S)" are recorded as absent.
inline NameTable ingest_census_surnames(const std::filesystem::path& path, const CensusOptions& opt = {})
{
    std::ifstream in(path);
    if (!in) {
        throw IngestError("cannot read " + path.string());
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestError("empty census file " + path.string());
    }
    auto header = detail::split_csv(detail::trim_line_end(line));
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t c = 0; c < header.size(); ++c) {
        column[detail::apply_case(detail::trim(header[c]), NameCase::lower)] = c;
    }
    for (const char* required : {"name", "count"}) {
        if (!column.contains(required)) {
            throw IngestError(std::string("census file missing required column '") + required + "'");
        }
    }
    constexpr std::array<std::pair<Race, std::string_view>, kRaceCount> race_columns{{
        {Race::black, "pctblack"},
        {Race::hispanic, "pcthispanic"},
        {Race::asian_pacific, "pctapi"},
        {Race::white, "pctwhite"},
        {Race::native, "pctaian"},
    }};

    NameTable table;
    table.source = NameSource::census;
    std::set<std::string> seen;
    const std::size_t name_col = column["name"];
    const std::size_t count_col = column["count"];

    while (std::getline(in, line)) {
        std::string_view view = detail::trim_line_end(line);
        if (view.empty()) {
            continue;
        }
        auto fields = detail::split_csv(view);
        std::uint64_t count = 0;
        if (fields.size() <= std::max(name_col, count_col) ||
            !detail::parse_count(detail::trim(fields[count_col]), count)) {
            ++table.malformed_lines;
            continue;
        }
        if (count < opt.min_count) {
            continue;
        }
        NameRecord rec;
        rec.name = detail::apply_case(detail::trim(fields[name_col]), opt.name_case);
        if (rec.name.empty() || !seen.insert(rec.name).second) {
            ++table.malformed_lines;
            continue;
        }
        rec.total_count = count;
        for (const auto& [race, key] : race_columns) {
            auto it = column.find(std::string(key));
            if (it == column.end() || it->second >= fields.size()) {
                continue;
            }
            double pct = 0.0;
            std::string value = detail::trim(fields[it->second]);
            if (detail::parse_double(value, pct)) {
                rec.race_pcts[static_cast<std::size_t>(race)] = pct;
            }
        }
        table.records.push_back(std::move(rec));
    }
    if (table.malformed_lines > 0) {
        spdlog::warn("event=census_malformed_lines count={}", table.malformed_lines);
    }
    detail::sort_by_count(table.records);
    return table;
}

enum class CleanMethod { margin, mean_similarity, none };

struct CleanOptions {
    double removal_fraction = 0.2;
    CleanMethod method = CleanMethod::margin;
    std::size_t negatives_pool = 50000;
    std::uint64_t seed = 0;
    LinearSvmOptions svm{};
};

struct CleanResult {
    NameTable table;                   // kept names, input order
    std::vector<std::string> removed;  // ascending score (least name-like first)
    std::vector<std::string> missing;  // not in the embedding vocabulary
    std::vector<double> scores;        // per input-table name present in the vocabulary
};

/// Number of names removed: ceil(fraction * n), guarded against the
/// representation error in products like 0.7 * 10.
inline std::size_t removal_count(double fraction, std::size_t n)
{
    const double exact = fraction * static_cast<double>(n);
    const double guarded = std::ceil(exact - 1e-9 * std::max(1.0, exact));
    return std::min(n, static_cast<std::size_t>(std::max(0.0, guarded)));
}

/// Removes the names whose vectors look least like names: either by signed
/// margin of a linear SVM separating names from random frequent non-names, or
/// by smallest mean cosine similarity to the other names.
inline CleanResult clean_names(const NameTable& input, const UnitEmbedding& emb, const CleanOptions& opt)
{
    if (!(opt.removal_fraction >= 0.0) || opt.removal_fraction >= 1.0) {
        throw ConfigError("removal fraction must be in [0, 1)");
    }

    CleanResult result;
    result.table.source = input.source;
    std::vector<std::size_t> present;  // indices into input.records
    std::vector<std::size_t> ranks;
    for (std::size_t i = 0; i < input.records.size(); ++i) {
        if (auto rank = emb.find(input.records[i].name)) {
            present.push_back(i);
            ranks.push_back(*rank);
        }
        else {
            result.missing.push_back(input.records[i].name);
        }
    }
    if (!result.missing.empty()) {
        spdlog::warn("event=names_not_in_vocabulary count={}", result.missing.size());
    }

    const std::size_t n = present.size();
    const std::size_t to_remove = opt.method == CleanMethod::none ? 0 : removal_count(opt.removal_fraction, n);
    std::vector<double> score(n, 0.0);

    if (to_remove > 0 && opt.method == CleanMethod::mean_similarity) {
        const RowMatrix names = gather_rows(emb.vectors(), ranks);
        const Vector total = names.colwise().sum().transpose();
        for (std::size_t i = 0; i < n; ++i) {
            const auto row = names.row(static_cast<Eigen::Index>(i));
            score[i] = n > 1 ? (row.dot(total) - row.squaredNorm()) / static_cast<double>(n - 1) : 0.0;
        }
    }
    else if (to_remove > 0 && opt.method == CleanMethod::margin) {
        std::unordered_set<std::string> name_set;
        for (const auto& r : input.records) {
            name_set.insert(r.name);
        }
        std::vector<std::size_t> candidates;
        const std::size_t limit = std::min(opt.negatives_pool, emb.size());
        for (std::size_t r = 0; r < limit; ++r) {
            if (!name_set.contains(emb.token(r))) {
                candidates.push_back(r);
            }
        }
        if (candidates.empty()) {
            throw ConfigError("no non-name tokens available as negatives");
        }
        auto rng = make_rng(opt.seed, Stream::negative_sampling);
        std::vector<std::size_t> negatives;
        if (candidates.size() >= n) {
            std::sample(candidates.begin(), candidates.end(), std::back_inserter(negatives), n, rng);
        }
        else {
            spdlog::warn("event=negatives_with_replacement available={} needed={}", candidates.size(), n);
            std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
            for (std::size_t k = 0; k < n; ++k) {
                negatives.push_back(candidates[pick(rng)]);
            }
        }

        RowMatrix x(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(emb.dim()));
        std::vector<int> labels(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            x.row(static_cast<Eigen::Index>(i)) = emb.row(ranks[i]);
            labels[i] = 1;
            x.row(static_cast<Eigen::Index>(n + i)) = emb.row(negatives[i]);
            labels[n + i] = -1;
        }
        auto svm_rng = make_rng(opt.seed, Stream::svm);
        const LinearSvm svm = train_linear_svm(x, labels, opt.svm, svm_rng);
        if (!svm.converged) {
            spdlog::warn("event=svm_not_converged epochs={}", svm.epochs);
        }
        for (std::size_t i = 0; i < n; ++i) {
            score[i] = svm.decision(emb.row(ranks[i]).transpose());
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (score[a] != score[b]) {
            return score[a] < score[b];
        }
        return ranks[a] > ranks[b];
    });
    std::vector<bool> drop(n, false);
    for (std::size_t k = 0; k < to_remove; ++k) {
        drop[order[k]] = true;
        result.removed.push_back(input.records[present[order[k]]].name);
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!drop[i]) {
            result.table.records.push_back(input.records[present[i]]);
        }
    }
    result.scores = std::move(score);
    spdlog::info("event=names_cleaned input={} present={} removed={}", input.size(), n, to_remove);
    return result;
}

struct GroupStats {
    std::size_t size = 0;
    std::optional<double> fraction_female;
    std::optional<double> mean_birth_year;
    RacePercentages race_pcts{};
};

/// Unweighted per-name means; each field averages over the names that carry it.
inline GroupStats demographic_summary(const std::vector<std::string>& group, const NameTable& table)
{
    if (group.empty()) {
        throw ConfigError("demographic summary of an empty group");
    }
    std::unordered_map<std::string_view, const NameRecord*> by_name;
    for (const auto& r : table.records) {
        by_name.emplace(r.name, &r);
    }

    struct Mean {
        double sum = 0.0;
        std::size_t count = 0;
        void add(const std::optional<double>& v)
        {
            if (v) {
                sum += *v;
                ++count;
            }
        }
        std::optional<double> value() const
        {
            return count ? std::optional<double>(sum / static_cast<double>(count)) : std::nullopt;
        }
    };
    Mean female;
    Mean year;
    std::array<Mean, kRaceCount> race{};
    for (const auto& name : group) {
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            throw ConfigError("name not in table: " + name);
        }
        female.add(it->second->fraction_female);
        year.add(it->second->mean_birth_year);
        for (std::size_t k = 0; k < kRaceCount; ++k) {
            race[k].add(it->second->race_pcts[k]);
        }
    }
    GroupStats stats;
    stats.size = group.size();
    stats.fraction_female = female.value();
    stats.mean_birth_year = year.value();
    for (std::size_t k = 0; k < kRaceCount; ++k) {
        stats.race_pcts[k] = race[k].value();
    }
    return stats;
}

} // namespace ube
