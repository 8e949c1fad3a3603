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

// ube-audit: command-line front end for the bias enumeration pipeline.

#include "ube/ube.hpp"

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>

namespace {

enum ExitCode { ok = 0, config_error = 2, format_error = 3, runtime_error = 4 };

struct InputArgs {
    std::string embedding;
    std::string embedding_format = "w2v-bin";
    std::string text_header = "auto";
    std::string names;
    std::string names_kind = "ssa";
    int year_min = 1938;
    int year_max = 2017;
    std::uint64_t min_count = 1000;
    std::string name_case = "title";
    std::string clean = "margin";
    double removal_fraction = 0.2;
    std::size_t negatives_pool = 50000;
    std::uint64_t seed = 0;
};

void add_input_options(CLI::App& cmd, InputArgs& in)
{
    cmd.add_option("--embedding", in.embedding, "Embedding file")->required();
    cmd.add_option("--format", in.embedding_format, "Embedding format")
        ->check(CLI::IsMember({"w2v-bin", "text"}));
    cmd.add_option("--text-header", in.text_header, "Header line of text vectors")
        ->check(CLI::IsMember({"auto", "expected", "absent"}));
    cmd.add_option("--names", in.names, "SSA directory or Census surname CSV")->required();
    cmd.add_option("--names-kind", in.names_kind, "Name dataset kind")->check(CLI::IsMember({"ssa", "census"}));
    cmd.add_option("--year-min", in.year_min, "First SSA year");
    cmd.add_option("--year-max", in.year_max, "Last SSA year");
    cmd.add_option("--min-count", in.min_count, "Minimum total name count");
    cmd.add_option("--name-case", in.name_case, "Census surname casing")
        ->check(CLI::IsMember({"title", "lower", "upper", "as-is"}));
    cmd.add_option("--clean", in.clean, "Name cleaning method")->check(CLI::IsMember({"margin", "mean-sim", "none"}));
    cmd.add_option("--removal-fraction", in.removal_fraction, "Fraction of names removed by cleaning");
    cmd.add_option("--negatives-pool", in.negatives_pool, "Frequent tokens eligible as SVM negatives");
    cmd.add_option("--seed", in.seed, "Random seed");
}

ube::CleanMethod parse_clean(const std::string& s)
{
    if (s == "margin") {
        return ube::CleanMethod::margin;
    }
    if (s == "mean-sim") {
        return ube::CleanMethod::mean_similarity;
    }
    return ube::CleanMethod::none;
}

ube::UnitEmbedding load_embedding(const InputArgs& in)
{
    ube::RawEmbedding raw;
    if (in.embedding_format == "w2v-bin") {
        raw = ube::load_word2vec_binary(in.embedding);
    }
    else {
        const auto header = in.text_header == "expected" ? ube::TextHeader::expected
                            : in.text_header == "absent" ? ube::TextHeader::absent
                                                         : ube::TextHeader::automatic;
        raw = ube::load_text_vectors(in.embedding, header);
    }
    return ube::normalize(raw);
}

ube::NameTable load_names(const InputArgs& in)
{
    if (in.names_kind == "ssa") {
        return ube::ingest_ssa(in.names, {in.year_min, in.year_max, in.min_count});
    }
    ube::CensusOptions opt;
    opt.min_count = in.min_count;
    opt.name_case = in.name_case == "lower"   ? ube::NameCase::lower
                    : in.name_case == "upper" ? ube::NameCase::upper
                    : in.name_case == "as-is" ? ube::NameCase::as_is
                                              : ube::NameCase::title;
    return ube::ingest_census_surnames(in.names, opt);
}

ube::CleanResult clean(const InputArgs& in, const ube::NameTable& table, const ube::UnitEmbedding& emb)
{
    ube::CleanOptions opt;
    opt.removal_fraction = in.removal_fraction;
    opt.method = parse_clean(in.clean);
    opt.negatives_pool = in.negatives_pool;
    opt.seed = in.seed;
    return ube::clean_names(table, emb, opt);
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ube::Error("cannot write " + path);
    }
    out << content;
}

std::unordered_set<std::string> read_word_list(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ube::ConfigError("cannot read mask list " + path);
    }
    std::unordered_set<std::string> words;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            words.insert(line);
        }
    }
    return words;
}

int run_main(int argc, char** argv)
{
    CLI::App app{"Unsupervised enumeration of name/word associations in word embeddings"};
    app.set_config("--config", "", "key=value configuration file");
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");

    InputArgs in;
    ube::UbeConfig cfg;
    std::string out_path = "report.json";
    std::string markdown_path;
    std::string csv_path;
    std::string null_cache;
    std::string fourtuples_path;
    std::string mask_list;
    std::string illustrative_form = "inner";

    auto* run = app.add_subcommand("run", "Clean names, enumerate associations and write the report");
    add_input_options(*run, in);
    run->add_option("-n", cfg.n, "Name groups");
    run->add_option("-m", cfg.m, "Word categories");
    run->add_option("-M", cfg.M, "Frequent lower-case word pool size");
    run->add_option("-t", cfg.t, "Words per group and category");
    run->add_option("--alpha", cfg.alpha, "False discovery rate bound");
    run->add_option("--rotations", cfg.rotations, "Random rotations in the null");
    run->add_option("--threads", cfg.threads, "Worker threads (0: all cores)");
    run->add_option("--illustrative-k", cfg.illustrative_k, "Illustrative names per group");
    run->add_option("--illustrative-form", illustrative_form, "Greedy similarity form")
        ->check(CLI::IsMember({"inner", "cosine"}));
    run->add_flag("--allow-multiplicities", cfg.allow_multiplicities, "Skip the Voronoi partition");
    run->add_option("--underscore-as-space", cfg.underscore_as_space, "Treat '_' as a space in word tokens");
    run->add_option("--out", out_path, "JSON report path");
    run->add_option("--markdown", markdown_path, "Markdown report path");
    run->add_option("--csv", csv_path, "CSV report path");
    run->add_option("--null-cache", null_cache, "Binary null-score cache");
    run->add_option("--fourtuples", fourtuples_path, "Fourtuple CSV path");
    run->add_option("--mask-list", mask_list, "Words to mask in rendered lists, one per line");

    InputArgs names_in;
    std::string names_out = "names.csv";
    auto* names_cmd = app.add_subcommand("names", "Ingest and clean names only");
    add_input_options(*names_cmd, names_in);
    names_cmd->add_option("--out", names_out, "CSV of kept and removed names");

    InputArgs zipf_in;
    std::string zipf_out = "zipf.csv";
    auto* zipf_cmd = app.add_subcommand("zipf", "Emit rank versus log-probability data for the names");
    add_input_options(*zipf_cmd, zipf_in);
    zipf_cmd->add_option("--out", zipf_out, "CSV output path");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ExitCode::ok : ExitCode::config_error;
    }
    spdlog::set_default_logger(spdlog::stderr_color_mt("ube"));
    spdlog::set_level(spdlog::level::from_str(log_level));

    if (run->parsed()) {
        cfg.seed = in.seed;
        cfg.clean_method = parse_clean(in.clean);
        cfg.removal_fraction = in.removal_fraction;
        cfg.illustrative_form =
            illustrative_form == "cosine" ? ube::SimilarityForm::cosine : ube::SimilarityForm::inner_product;
        cfg.validate();
        const auto emb = load_embedding(in);
        const auto cleaned = clean(in, load_names(in), emb);
        ube::RunOptions options;
        if (!null_cache.empty()) {
            options.null_cache = null_cache;
        }
        const auto result = ube::run_audit(emb, cleaned.table, cfg, options);
        ube::RenderOptions render_opt;
        render_opt.underscore_as_space = cfg.underscore_as_space;
        if (!mask_list.empty()) {
            render_opt.masked_words = read_word_list(mask_list);
        }
        write_file(out_path, ube::render(result.report, ube::ReportFormat::json, render_opt));
        if (!markdown_path.empty()) {
            write_file(markdown_path, ube::render(result.report, ube::ReportFormat::markdown, render_opt));
        }
        if (!csv_path.empty()) {
            write_file(csv_path, ube::render(result.report, ube::ReportFormat::csv, render_opt));
        }
        if (!fourtuples_path.empty()) {
            write_file(fourtuples_path, ube::fourtuples_csv(result.fourtuples));
        }
    }
    else if (names_cmd->parsed()) {
        const auto emb = load_embedding(names_in);
        const auto cleaned = clean(names_in, load_names(names_in), emb);
        std::string csv = "name,kept\n";
        for (const auto& r : cleaned.table.records) {
            csv += r.name + ",true\n";
        }
        for (const auto& name : cleaned.removed) {
            csv += name + ",false\n";
        }
        write_file(names_out, csv);
    }
    else if (zipf_cmd->parsed()) {
        const auto emb = load_embedding(zipf_in);
        const auto table = load_names(zipf_in);
        const auto cleaned = clean(zipf_in, table, emb);
        const std::set<std::string> removed(cleaned.removed.begin(), cleaned.removed.end());
        write_file(zipf_out, ube::zipf_csv(ube::zipf_plot_data(table, emb, removed)));
    }
    return ExitCode::ok;
}

} // namespace

int main(int argc, char** argv)
{
    try {
        return run_main(argc, argv);
    }
    catch (const ube::ConfigError& e) {
        spdlog::error("config error: {}", e.what());
        return ExitCode::config_error;
    }
    catch (const ube::FormatError& e) {
        spdlog::error("format error: {}", e.what());
        return ExitCode::format_error;
    }
    catch (const ube::IngestError& e) {
        spdlog::error("ingest error: {}", e.what());
        return ExitCode::format_error;
    }
    catch (const ube::UnknownToken& e) {
        spdlog::error("unknown token: {}", e.what());
        return ExitCode::format_error;
    }
    catch (const std::exception& e) {
        spdlog::error("failure: {}", e.what());
        return ExitCode::runtime_error;
    }
}
