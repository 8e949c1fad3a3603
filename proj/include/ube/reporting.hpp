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

// Presentation: illustrative names, Zipf-plot data and report rendering.

#include "ube/embedding_io.hpp"
#include "ube/name_prep.hpp"
#include "ube/report.hpp"

#include <spdlog/spdlog.h>

#include <cmath>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

namespace ube {

enum class SimilarityForm {
    inner_product,  // ((sum of chosen) / (k+1)) . X-bar: mean pairwise cosine, chosen vs group
    cosine,         // cos(mean of chosen, X-bar)
};

/// Greedy representative subset of a group. Step k+1 adds the member that
/// maximizes the similarity of the chosen set's mean to the group mean; ties
/// go to the lower frequency rank. `ranks` are embedding ranks of the rows.
/// Returns row positions in pick order.
inline std::vector<std::size_t> illustrative_names(const RowMatrix& members, const std::vector<std::size_t>& ranks,
                                                   std::size_t k, SimilarityForm form = SimilarityForm::inner_product)
{
    const auto size = static_cast<std::size_t>(members.rows());
    if (k > size) {
        spdlog::warn("event=illustrative_k_exceeds_group k={} size={}", k, size);
        k = size;
    }
    const Vector center = mean_of_rows(members);
    const double center_norm = center.norm();
    Vector chosen_sum = Vector::Zero(members.cols());
    std::vector<bool> used(size, false);
    std::vector<std::size_t> picks;

    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = size;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < size; ++c) {
            if (used[c]) {
                continue;
            }
            const Vector candidate = chosen_sum + members.row(static_cast<Eigen::Index>(c)).transpose();
            double score = candidate.dot(center) / static_cast<double>(step + 1);
            if (form == SimilarityForm::cosine) {
                const double denom = candidate.norm() * center_norm;
                score = denom > 0.0 ? candidate.dot(center) / denom : 0.0;
            }
            if (best == size || score > best_score || (score == best_score && ranks[c] < ranks[best])) {
                best = c;
                best_score = score;
            }
        }
        used[best] = true;
        chosen_sum += members.row(static_cast<Eigen::Index>(best)).transpose();
        picks.push_back(best);
    }
    return picks;
}

struct ZipfRow {
    std::string name;
    std::size_t rank_index = 0;  // embedding frequency rank
    double log_probability = 0.0;
    bool kept = true;
};

/// Per name in the embedding: its rank, log(count / total count of the
/// table) and whether cleaning kept it.
inline std::vector<ZipfRow> zipf_plot_data(const NameTable& names, const UnitEmbedding& emb,
                                           const std::set<std::string>& removed)
{
    double total = 0.0;
    for (const auto& r : names.records) {
        total += static_cast<double>(r.total_count);
    }
    std::vector<ZipfRow> rows;
    for (const auto& r : names.records) {
        auto rank = emb.find(r.name);
        if (!rank || r.total_count == 0) {
            continue;
        }
        rows.push_back({r.name, *rank, std::log(static_cast<double>(r.total_count) / total), !removed.contains(r.name)});
    }
    return rows;
}

inline std::string zipf_csv(const std::vector<ZipfRow>& rows)
{
    std::ostringstream out;
    out << "name,rank_index,log_probability,kept\n";
    out << std::setprecision(17);
    for (const auto& r : rows) {
        out << r.name << ',' << r.rank_index << ',' << r.log_probability << ',' << (r.kept ? "true" : "false")
            << '\n';
    }
    return out.str();
}

enum class ReportFormat { json, csv, markdown };

inline ReportFormat parse_report_format(std::string_view name)
{
    if (name == "json") {
        return ReportFormat::json;
    }
    if (name == "csv") {
        return ReportFormat::csv;
    }
    if (name == "markdown" || name == "md") {
        return ReportFormat::markdown;
    }
    throw ConfigError("unknown report format '" + std::string(name) + "'");
}

struct RenderOptions {
    std::unordered_set<std::string> masked_words;
    bool underscore_as_space = true;
};

namespace detail {

inline std::string display_word(const std::string& word, const RenderOptions& opt)
{
    std::string out = word;
    if (opt.masked_words.contains(word)) {
        for (std::size_t k = 1; k < out.size(); ++k) {
            if (out[k] != ' ' && out[k] != '_') {
                out[k] = '*';
            }
        }
    }
    if (opt.underscore_as_space) {
        std::replace(out.begin(), out.end(), '_', ' ');
    }
    return out;
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

inline std::string format_double(double v)
{
    std::ostringstream s;
    s << std::setprecision(17) << v;
    return s.str();
}

inline std::string percent(const std::optional<double>& v, double scale)
{
    if (!v) {
        return "";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(0) << *v * scale << '%';
    return s.str();
}

inline std::string render_markdown(const AuditReport& r, const RenderOptions& opt)
{
    std::ostringstream out;
    out << "# Bias enumeration report\n\n";
    if (opt.masked_words.empty()) {
        out << "> **Warning:** word lists are shown unmasked and may contain offensive terms.\n\n";
    }
    out << "n=" << r.config.n << ", m=" << r.config.m << ", M=" << r.config.M << ", t=" << r.config.t
        << ", alpha=" << r.config.alpha << ", rotations=" << r.config.rotations << ", seed=" << r.config.seed
        << "\n\n";

    out << "## Name groups\n\n|";
    for (const auto& g : r.groups) {
        out << " " << g.label << " |";
    }
    out << "\n|";
    for (std::size_t i = 0; i < r.groups.size(); ++i) {
        out << "---|";
    }
    out << "\n";
    std::size_t shown = 0;
    for (const auto& g : r.groups) {
        shown = std::max(shown, g.illustrative.size());
    }
    for (std::size_t row = 0; row < shown; ++row) {
        out << "|";
        for (const auto& g : r.groups) {
            out << " " << (row < g.illustrative.size() ? g.illustrative[row] : "") << " |";
        }
        out << "\n";
    }
    out << "|";
    for (const auto& g : r.groups) {
        out << " +" << g.residual << " |";
    }
    out << "\n";
    auto stat_row = [&](auto&& cell) {
        out << "|";
        for (const auto& g : r.groups) {
            out << " " << cell(g.stats) << " |";
        }
        out << "\n";
    };
    bool any_female = false;
    bool any_year = false;
    std::array<bool, kRaceCount> any_race{};
    for (const auto& g : r.groups) {
        any_female |= g.stats.fraction_female.has_value();
        any_year |= g.stats.mean_birth_year.has_value();
        for (std::size_t k = 0; k < kRaceCount; ++k) {
            any_race[k] |= g.stats.race_pcts[k].has_value();
        }
    }
    if (any_female) {
        stat_row([](const GroupStats& s) {
            auto p = percent(s.fraction_female, 100.0);
            return p.empty() ? p : p + " F";
        });
    }
    if (any_year) {
        stat_row([](const GroupStats& s) {
            if (!s.mean_birth_year) {
                return std::string();
            }
            return std::to_string(static_cast<long>(std::lround(*s.mean_birth_year)));
        });
    }
    constexpr std::array<std::string_view, kRaceCount> race_abbrev{"B", "H", "A", "W", "N"};
    for (std::size_t k = 0; k < kRaceCount; ++k) {
        if (any_race[k]) {
            stat_row([&](const GroupStats& s) {
                auto p = percent(s.race_pcts[k], 1.0);
                return p.empty() ? p : p + " " + std::string(race_abbrev[k]);
            });
        }
    }

    out << "\n## Associations\n\n";
    if (r.significant == 0) {
        out << "No significant associations at false discovery rate " << r.config.alpha << ".\n";
    }
    else {
        out << "Significant cells (p <= " << format_double(r.critical_p) << ") list their " << r.config.t
            << " words.\n\n| rank | category |";
        for (const auto& g : r.groups) {
            out << " " << g.label << " |";
        }
        out << "\n|---|---|";
        for (std::size_t i = 0; i < r.groups.size(); ++i) {
            out << "---|";
        }
        out << "\n";
        for (const auto& t : r.tests) {
            if (t.significant_count == 0) {
                continue;
            }
            out << "| " << t.rank << " | C" << t.category << " |";
            for (const auto& c : t.cells) {
                out << " ";
                if (c.significant) {
                    for (std::size_t w = 0; w < c.words.size(); ++w) {
                        out << (w ? ", " : "") << display_word(c.words[w], opt);
                    }
                }
                out << " |";
            }
            out << "\n";
        }
    }
    out << "\nHypotheses tested: " << r.hypotheses << "; significant: " << r.significant << ".\n";
    out << "Potential indirect biases: ";
    if (r.indirect_bias.fraction_positive) {
        out << format_double(*r.indirect_bias.fraction_positive * 100.0) << "% of " << r.indirect_bias.fourtuples
            << " significant fourtuples.\n";
    }
    else {
        out << "no significant fourtuples.\n";
    }
    return out.str();
}

inline std::string render_csv(const AuditReport& r, const RenderOptions& opt)
{
    std::ostringstream out;
    out << "test_rank,category,group,label,words,score,p_value,significant\n";
    std::unordered_map<std::size_t, std::string> labels;
    for (const auto& g : r.groups) {
        labels[g.id] = g.label;
    }
    for (const auto& t : r.tests) {
        for (const auto& c : t.cells) {
            if (!c.complete) {
                continue;
            }
            std::string words;
            for (std::size_t w = 0; w < c.words.size(); ++w) {
                words += (w ? ";" : "") + display_word(c.words[w], opt);
            }
            out << t.rank << ',' << t.category << ',' << c.group << ',' << labels[c.group] << ','
                << csv_field(words) << ',' << format_double(c.score.value_or(0.0)) << ','
                << format_double(c.p_value.value_or(1.0)) << ',' << (c.significant ? "true" : "false") << '\n';
        }
    }
    return out.str();
}

} // namespace detail

inline std::string render(const AuditReport& report, ReportFormat format, const RenderOptions& opt = {})
{
    switch (format) {
    case ReportFormat::json:
        return to_json(report).dump(2) + "\n";
    case ReportFormat::csv:
        return detail::render_csv(report, opt);
    case ReportFormat::markdown:
        return detail::render_markdown(report, opt);
    }
    throw ConfigError("unknown report format");
}

inline std::string render(const AuditReport& report, std::string_view format, const RenderOptions& opt = {})
{
    return render(report, parse_report_format(format), opt);
}

} // namespace ube
