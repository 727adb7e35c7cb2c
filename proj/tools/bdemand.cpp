#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "banglish/annotate.hpp"
#include "banglish/catalog.hpp"
#include "banglish/csv.hpp"
#include "banglish/demand.hpp"
#include "banglish/errors.hpp"
#include "banglish/gender.hpp"
#include "banglish/ingest.hpp"
#include "banglish/matcher.hpp"
#include "banglish/pipeline_config.hpp"
#include "banglish/sentiment.hpp"

namespace fs = std::filesystem;
using namespace banglish;

namespace {

fs::path stage_path(const config::PipelineConfig& cfg, const char* name) {
    return fs::path(cfg.output_dir) / name;
}

void require_stage(const fs::path& path, const char* producer) {
    if (!fs::exists(path)) {
        throw InputError("missing " + path.string() + " (run `bdemand " + producer + "` first)");
    }
}

// All outputs go through a temp file + rename so a crash never leaves a
// half-written stage file behind.
template <typename Writer>
void atomic_emit(const fs::path& final_path, Writer&& write_to) {
    if (final_path.has_parent_path()) fs::create_directories(final_path.parent_path());
    fs::path tmp = final_path;
    tmp += ".tmp";
    write_to(tmp.string());
    std::error_code ec;
    fs::rename(tmp, final_path, ec);
    if (ec) {
        throw InputError("cannot rename " + tmp.string() + " to " + final_path.string() + ": " +
                         ec.message());
    }
}

void atomic_write(const fs::path& final_path, const std::string& content) {
    atomic_emit(final_path, [&](const std::string& tmp) {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw InputError("cannot write " + final_path.string());
        out << content;
        out.flush();
        if (!out) throw InputError("cannot write " + final_path.string());
    });
}

std::string format_ratio(double r) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", r);
    return buf;
}

void cmd_ingest(const config::PipelineConfig& cfg) {
    std::vector<ingest::RawComment> rows = ingest::merge_csv(cfg.comments, cfg.columns);
    ingest::NullProfile prof = ingest::profile(rows);
    std::vector<ingest::CleanComment> cleaned = ingest::clean(rows);

    std::ostringstream out;
    ingest::write_clean_csv(out, cleaned);
    atomic_write(stage_path(cfg, "comments_clean.csv"), out.str());

    std::cout << ingest::format_profile(prof);
    std::cout << "kept " << cleaned.size() << " comments -> "
              << stage_path(cfg, "comments_clean.csv").string() << "\n";
}

void cmd_catalog(const config::PipelineConfig& cfg) {
    catalog::DeviceCatalog cat = catalog::load_catalog(cfg.catalog);
    std::ostringstream out;
    catalog::write_catalog_csv(out, cat);
    atomic_write(stage_path(cfg, "catalog_normalized.csv"), out.str());
    std::cout << "normalized " << cat.size() << " devices -> "
              << stage_path(cfg, "catalog_normalized.csv").string() << "\n";
}

void cmd_match(const config::PipelineConfig& cfg) {
    const fs::path comments_path = stage_path(cfg, "comments_clean.csv");
    const fs::path catalog_path = stage_path(cfg, "catalog_normalized.csv");
    require_stage(comments_path, "ingest");
    require_stage(catalog_path, "catalog");

    std::vector<ingest::CleanComment> comments = ingest::read_clean_csv(comments_path.string());
    catalog::DeviceCatalog cat = catalog::read_catalog_csv(catalog_path.string());
    std::vector<matcher::CommentAnalysis> analyses =
        matcher::process_comments(comments, cat, cfg.matcher, cfg.threads);

    std::ostringstream corrections;
    csv::write_row(corrections, {"comment_id", "start", "end", "original", "replacement",
                                 "distance", "ratio"});
    std::size_t n_corrections = 0;
    for (const matcher::CommentAnalysis& a : analyses) {
        for (const matcher::Replacement& r : a.correction.replacements) {
            csv::write_row(corrections,
                           {std::to_string(a.comment_id), std::to_string(r.begin),
                            std::to_string(r.end), r.original, r.replacement,
                            std::to_string(r.distance), format_ratio(r.ratio)});
            ++n_corrections;
        }
    }
    atomic_write(stage_path(cfg, "corrections.csv"), corrections.str());

    std::ostringstream entities;
    csv::write_row(entities, {"comment_id", "begin", "end", "device"});
    std::size_t n_entities = 0;
    for (const matcher::CommentAnalysis& a : analyses) {
        for (const matcher::EntityMatch& e : a.entities) {
            csv::write_row(entities, {std::to_string(e.comment_id), std::to_string(e.begin),
                                      std::to_string(e.end), e.device});
            ++n_entities;
        }
    }
    atomic_write(stage_path(cfg, "entities.csv"), entities.str());

    std::cout << "matched " << comments.size() << " comments: " << n_corrections
              << " corrections, " << n_entities << " entities\n";
}

void cmd_annotate(const config::PipelineConfig& cfg) {
    const fs::path comments_path = stage_path(cfg, "comments_clean.csv");
    const fs::path catalog_path = stage_path(cfg, "catalog_normalized.csv");
    require_stage(comments_path, "ingest");
    require_stage(catalog_path, "catalog");

    std::vector<ingest::CleanComment> comments = ingest::read_clean_csv(comments_path.string());
    catalog::DeviceCatalog cat = catalog::read_catalog_csv(catalog_path.string());
    std::vector<annotate::LabeledComment> data =
        annotate::auto_annotate(comments, cat, cfg.matcher, cfg.threads);

    auto labels = annotate::load_labels(cfg.labels);
    std::size_t n_labeled = annotate::merge_labels(data, labels);

    atomic_emit(stage_path(cfg, "annotations.json"),
                [&](const std::string& tmp) { annotate::export_offset_json(data, tmp); });
    // The two exports are one logical artifact; write both then rename both.
    atomic_emit(stage_path(cfg, "ner_lines.txt"), [&](const std::string& lines_tmp) {
        atomic_emit(stage_path(cfg, "ner_offsets.csv"), [&](const std::string& csv_tmp) {
            annotate::export_lines_and_offsets(data, lines_tmp, csv_tmp);
        });
    });

    auto [train_set, test_set] = annotate::split(data, cfg.split);
    atomic_emit(stage_path(cfg, "train_split.json"),
                [&](const std::string& tmp) { annotate::save_split_json(train_set, tmp); });
    atomic_emit(stage_path(cfg, "test_split.json"),
                [&](const std::string& tmp) { annotate::save_split_json(test_set, tmp); });

    std::cout << "annotated " << data.size() << " comments (" << n_labeled
              << " labeled), split " << train_set.size() << "/" << test_set.size() << "\n";
}

std::vector<std::pair<std::string, int>> labeled_pairs(const std::vector<annotate::LabeledComment>& data) {
    std::vector<std::pair<std::string, int>> pairs;
    for (const annotate::LabeledComment& c : data) {
        if (!c.sentiment) continue;
        pairs.emplace_back(c.comment.text, *c.sentiment == annotate::Sentiment::Positive ? 1 : 0);
    }
    return pairs;
}

void cmd_train(const config::PipelineConfig& cfg) {
    const fs::path train_path = stage_path(cfg, "train_split.json");
    const fs::path test_path = stage_path(cfg, "test_split.json");
    require_stage(train_path, "annotate");
    require_stage(test_path, "annotate");

    auto train_pairs = labeled_pairs(annotate::load_split_json(train_path.string()));
    auto test_pairs = labeled_pairs(annotate::load_split_json(test_path.string()));
    if (train_pairs.empty()) throw DataError("train split has no labeled examples");

    std::vector<sentiment::EpochLoss> losses;
    sentiment::SentimentModel model = sentiment::train(train_pairs, cfg.sentiment, &losses);
    if (!test_pairs.empty()) sentiment::calibrate_threshold(model, test_pairs);

    atomic_write(stage_path(cfg, "model.json"), sentiment::model_to_json(model));

    std::ostringstream loss_csv;
    csv::write_row(loss_csv, {"epoch", "loss"});
    for (const sentiment::EpochLoss& e : losses) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", e.loss);
        csv::write_row(loss_csv, {std::to_string(e.epoch), buf});
    }
    atomic_write(stage_path(cfg, "training_loss.csv"), loss_csv.str());

    std::cout << "trained on " << train_pairs.size() << " examples, "
              << losses.size() << " epochs";
    if (!losses.empty()) std::cout << ", final loss " << losses.back().loss;
    std::cout << ", threshold " << model.decision_threshold << "\n";
}

void cmd_analyze(const config::PipelineConfig& cfg) {
    const fs::path comments_path = stage_path(cfg, "comments_clean.csv");
    const fs::path catalog_path = stage_path(cfg, "catalog_normalized.csv");
    const fs::path model_path = stage_path(cfg, "model.json");
    require_stage(comments_path, "ingest");
    require_stage(catalog_path, "catalog");
    require_stage(model_path, "train");

    std::vector<ingest::CleanComment> comments = ingest::read_clean_csv(comments_path.string());
    catalog::DeviceCatalog cat = catalog::read_catalog_csv(catalog_path.string());
    sentiment::SentimentModel model = sentiment::load_model(model_path.string());
    gender::NameGenderLexicon lexicon = gender::NameGenderLexicon::load(cfg.lexicon);

    std::unique_ptr<gender::TransliterationClient> client;
    if (cfg.client.enabled) {
        client = std::make_unique<gender::HttpTransliterator>(cfg.client.endpoint,
                                                              cfg.client.timeout_ms);
    } else if (!cfg.transliteration_table.empty()) {
        client = std::make_unique<gender::TableTransliterator>(
            gender::TableTransliterator::load(cfg.transliteration_table));
    }

    std::vector<demand::AnalyzedComment> analyzed =
        demand::analyze(comments, cat, cfg.matcher, model, lexicon, client.get(), cfg.threads);
    std::vector<demand::DemandRecord> records = demand::aggregate(analyzed);

    atomic_write(stage_path(cfg, "report.csv"), demand::report_to_csv(records));
    atomic_write(stage_path(cfg, "report.json"), demand::report_to_json(records));
    atomic_write(stage_path(cfg, "demand_chart.svg"), demand::chart_to_svg(records, cfg.top_n));

    std::cout << "analyzed " << analyzed.size() << " device comments across "
              << records.size() << " devices";
    if (!records.empty()) {
        std::cout << "; top: " << records.front().device << " (score "
                  << records.front().demand_score << ")";
    }
    std::cout << "\n";
}

int fail(const char* kind, const std::string& message, int code) {
    nlohmann::json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Banglish smartphone demand pipeline"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("--config", config_path, "pipeline config JSON")->required();
    std::uint64_t seed_value = 0;
    CLI::Option* seed_opt = app.add_option("--seed", seed_value, "override every configured seed");
    int threads_value = 1;
    CLI::Option* threads_opt = app.add_option("--threads", threads_value, "worker thread cap");
    std::string output_dir_value;
    CLI::Option* output_dir_opt =
        app.add_option("--output-dir", output_dir_value, "override the output directory");

    app.add_subcommand("ingest", "merge, profile and clean the raw comment CSVs");
    app.add_subcommand("catalog", "normalize the device catalog");
    app.add_subcommand("match", "spell-correct comments and extract device entities");
    app.add_subcommand("annotate", "export NER annotations and the train/test split");
    app.add_subcommand("train", "train and calibrate the sentiment classifier");
    app.add_subcommand("analyze", "produce the gendered demand report and chart");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        return fail("config", e.what(), 1);
    }

    try {
        config::PipelineConfig cfg = config::load_config(config_path);
        config::apply_overrides(
            cfg, seed_opt->count() ? std::optional<std::uint64_t>(seed_value) : std::nullopt,
            threads_opt->count() ? std::optional<int>(threads_value) : std::nullopt,
            output_dir_opt->count() ? std::optional<std::string>(output_dir_value) : std::nullopt);

        if (app.got_subcommand("ingest")) cmd_ingest(cfg);
        else if (app.got_subcommand("catalog")) cmd_catalog(cfg);
        else if (app.got_subcommand("match")) cmd_match(cfg);
        else if (app.got_subcommand("annotate")) cmd_annotate(cfg);
        else if (app.got_subcommand("train")) cmd_train(cfg);
        else if (app.got_subcommand("analyze")) cmd_analyze(cfg);
    } catch (const ConfigError& e) {
        return fail("config", e.what(), 1);
    } catch (const InputError& e) {
        return fail("input", e.what(), 2);
    } catch (const DataError& e) {
        return fail("data", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("data", e.what(), 3);
    }
    return 0;
}
