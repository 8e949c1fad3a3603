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

// AuditReport and its canonical JSON form.

#include "ube/name_prep.hpp"
#include "ube/proxy_analysis.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ube {

inline constexpr int kReportSchemaVersion = 1;

struct ReportConfig {
    std::size_t n = 0;
    std::size_t m = 0;
    std::size_t M = 0;
    std::size_t t = 0;
    double alpha = 0.0;
    std::size_t rotations = 0;
    std::uint64_t seed = 0;
    bool allow_multiplicities = false;
    std::string clean_method;
    double removal_fraction = 0.0;
    std::size_t illustrative_k = 0;
};

struct ReportMetadata {
    std::string embedding_fingerprint;
    std::size_t embedding_dim = 0;
    std::size_t vocabulary_size = 0;
    std::size_t names = 0;
    std::size_t word_pool = 0;
};

struct GroupReport {
    std::size_t id = 0;  // 1-based cluster id
    std::string label;   // presentation label, e.g. "F1"
    std::size_t size = 0;
    std::vector<std::string> illustrative;
    std::size_t residual = 0;  // size - shown names
    GroupStats stats;
};

struct CellReport {
    std::size_t group = 0;  // 1-based cluster id
    std::vector<std::string> words;
    bool complete = false;
    std::optional<double> score;
    std::optional<double> p_value;
    bool significant = false;
};

struct TestReport {
    std::size_t rank = 0;
    std::size_t category = 0;  // 1-based
    std::size_t category_size = 0;
    std::size_t significant_count = 0;
    double total_significant_score = 0.0;
    std::vector<CellReport> cells;  // group presentation order
};

struct AuditReport {
    int schema_version = kReportSchemaVersion;
    ReportConfig config;
    ReportMetadata metadata;
    double critical_p = 0.0;
    std::size_t hypotheses = 0;
    std::size_t significant = 0;
    std::vector<GroupReport> groups;  // presentation order
    std::vector<TestReport> tests;    // ranked
    IndirectBiasSummary indirect_bias;
};

namespace detail {

template <class T>
nlohmann::ordered_json optional_json(const std::optional<T>& v)
{
    return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template <class T>
std::optional<T> optional_from(const nlohmann::ordered_json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return j.get<T>();
}

} // namespace detail

inline nlohmann::ordered_json to_json(const GroupStats& s)
{
    nlohmann::ordered_json race = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < kRaceCount; ++k) {
        race[std::string(kRaceKeys[k])] = detail::optional_json(s.race_pcts[k]);
    }
    return {{"size", s.size},
            {"fraction_female", detail::optional_json(s.fraction_female)},
            {"mean_birth_year", detail::optional_json(s.mean_birth_year)},
            {"race_pcts", race}};
}

inline nlohmann::ordered_json to_json(const AuditReport& r)
{
    using json = nlohmann::ordered_json;
    json out;
    out["schema_version"] = r.schema_version;
    out["config"] = {{"n", r.config.n},
                     {"m", r.config.m},
                     {"M", r.config.M},
                     {"t", r.config.t},
                     {"alpha", r.config.alpha},
                     {"rotations", r.config.rotations},
                     {"seed", r.config.seed},
                     {"allow_multiplicities", r.config.allow_multiplicities},
                     {"clean_method", r.config.clean_method},
                     {"removal_fraction", r.config.removal_fraction},
                     {"illustrative_k", r.config.illustrative_k}};
    out["metadata"] = {{"embedding_fingerprint", r.metadata.embedding_fingerprint},
                       {"embedding_dim", r.metadata.embedding_dim},
                       {"vocabulary_size", r.metadata.vocabulary_size},
                       {"names", r.metadata.names},
                       {"word_pool", r.metadata.word_pool}};
    out["critical_p"] = r.critical_p;
    out["hypotheses"] = r.hypotheses;
    out["significant"] = r.significant;

    json groups = json::array();
    for (const auto& g : r.groups) {
        groups.push_back({{"id", g.id},
                          {"label", g.label},
                          {"size", g.size},
                          {"illustrative", g.illustrative},
                          {"residual", g.residual},
                          {"stats", to_json(g.stats)}});
    }
    out["groups"] = std::move(groups);

    json tests = json::array();
    for (const auto& t : r.tests) {
        json cells = json::array();
        for (const auto& c : t.cells) {
            cells.push_back({{"group", c.group},
                             {"words", c.words},
                             {"complete", c.complete},
                             {"score", detail::optional_json(c.score)},
                             {"p_value", detail::optional_json(c.p_value)},
                             {"significant", c.significant}});
        }
        tests.push_back({{"rank", t.rank},
                         {"category", t.category},
                         {"category_size", t.category_size},
                         {"significant_count", t.significant_count},
                         {"total_significant_score", t.total_significant_score},
                         {"cells", std::move(cells)}});
    }
    out["tests"] = std::move(tests);
    out["indirect_bias"] = {{"fourtuples", r.indirect_bias.fourtuples},
                            {"fraction_positive", detail::optional_json(r.indirect_bias.fraction_positive)}};
    return out;
}

inline GroupStats group_stats_from_json(const nlohmann::ordered_json& j)
{
    GroupStats s;
    s.size = j.at("size").get<std::size_t>();
    s.fraction_female = detail::optional_from<double>(j.at("fraction_female"));
    s.mean_birth_year = detail::optional_from<double>(j.at("mean_birth_year"));
    const auto& race = j.at("race_pcts");
    for (std::size_t k = 0; k < kRaceCount; ++k) {
        s.race_pcts[k] = detail::optional_from<double>(race.at(std::string(kRaceKeys[k])));
    }
    return s;
}

/// Inverse of to_json. Throws FormatError on a missing key, a type mismatch
/// or an unsupported schema version.
inline AuditReport report_from_json(const nlohmann::ordered_json& j)
{
    try {
        AuditReport r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kReportSchemaVersion) {
            throw FormatError("unsupported report schema_version " + std::to_string(r.schema_version));
        }
        const auto& c = j.at("config");
        r.config.n = c.at("n").get<std::size_t>();
        r.config.m = c.at("m").get<std::size_t>();
        r.config.M = c.at("M").get<std::size_t>();
        r.config.t = c.at("t").get<std::size_t>();
        r.config.alpha = c.at("alpha").get<double>();
        r.config.rotations = c.at("rotations").get<std::size_t>();
        r.config.seed = c.at("seed").get<std::uint64_t>();
        r.config.allow_multiplicities = c.at("allow_multiplicities").get<bool>();
        r.config.clean_method = c.at("clean_method").get<std::string>();
        r.config.removal_fraction = c.at("removal_fraction").get<double>();
        r.config.illustrative_k = c.at("illustrative_k").get<std::size_t>();

        const auto& md = j.at("metadata");
        r.metadata.embedding_fingerprint = md.at("embedding_fingerprint").get<std::string>();
        r.metadata.embedding_dim = md.at("embedding_dim").get<std::size_t>();
        r.metadata.vocabulary_size = md.at("vocabulary_size").get<std::size_t>();
        r.metadata.names = md.at("names").get<std::size_t>();
        r.metadata.word_pool = md.at("word_pool").get<std::size_t>();

        r.critical_p = j.at("critical_p").get<double>();
        r.hypotheses = j.at("hypotheses").get<std::size_t>();
        r.significant = j.at("significant").get<std::size_t>();

        for (const auto& g : j.at("groups")) {
            GroupReport gr;
            gr.id = g.at("id").get<std::size_t>();
            gr.label = g.at("label").get<std::string>();
            gr.size = g.at("size").get<std::size_t>();
            gr.illustrative = g.at("illustrative").get<std::vector<std::string>>();
            gr.residual = g.at("residual").get<std::size_t>();
            gr.stats = group_stats_from_json(g.at("stats"));
            r.groups.push_back(std::move(gr));
        }
        for (const auto& t : j.at("tests")) {
            TestReport tr;
            tr.rank = t.at("rank").get<std::size_t>();
            tr.category = t.at("category").get<std::size_t>();
            tr.category_size = t.at("category_size").get<std::size_t>();
            tr.significant_count = t.at("significant_count").get<std::size_t>();
            tr.total_significant_score = t.at("total_significant_score").get<double>();
            for (const auto& c : t.at("cells")) {
                CellReport cr;
                cr.group = c.at("group").get<std::size_t>();
                cr.words = c.at("words").get<std::vector<std::string>>();
                cr.complete = c.at("complete").get<bool>();
                cr.score = detail::optional_from<double>(c.at("score"));
                cr.p_value = detail::optional_from<double>(c.at("p_value"));
                cr.significant = c.at("significant").get<bool>();
                tr.cells.push_back(std::move(cr));
            }
            r.tests.push_back(std::move(tr));
        }
        const auto& ib = j.at("indirect_bias");
        r.indirect_bias.fourtuples = ib.at("fourtuples").get<std::size_t>();
        r.indirect_bias.fraction_positive = detail::optional_from<double>(ib.at("fraction_positive"));
        return r;
    }
    catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("invalid report JSON: ") + e.what());
    }
}

} // namespace ube
