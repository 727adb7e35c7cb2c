#include "banglish/pipeline_config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <nlohmann/json.hpp>

#include "banglish/errors.hpp"

namespace banglish::config {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* a) { return key == a; }) == allowed.end()) {
            throw ConfigError("unknown config key '" + where + key + "'");
        }
    }
}

const json& require(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError("missing config key '" + where + key + "'");
    return *it;
}

template <typename T>
T typed(const json& value, const std::string& name) {
    try {
        return value.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + name + "' has the wrong type");
    }
}

template <typename T>
void read_into(const json& obj, const char* key, const std::string& where, T& out) {
    auto it = obj.find(key);
    if (it != obj.end()) out = typed<T>(*it, where + key);
}

std::string resolve(const std::string& path, const std::string& base_dir) {
    fs::path p(path);
    if (p.is_absolute() || base_dir.empty()) return p.lexically_normal().string();
    return (fs::path(base_dir) / p).lexically_normal().string();
}

void check_exists(const std::string& path) {
    if (!fs::exists(path)) throw InputError("input file not found: " + path);
}

} // namespace

PipelineConfig parse_config(const std::string& json_text, const std::string& base_dir) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed config JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    reject_unknown_keys(doc,
                        {"comments", "catalog", "lexicon", "labels", "transliteration_table",
                         "output_dir", "columns", "matcher", "sentiment", "split", "client",
                         "seed", "threads", "top_n"},
                        "");

    PipelineConfig cfg;
    cfg.comments = typed<std::vector<std::string>>(require(doc, "comments", ""), "comments");
    if (cfg.comments.empty()) throw ConfigError("config key 'comments' must list at least one CSV");
    cfg.catalog = typed<std::string>(require(doc, "catalog", ""), "catalog");
    cfg.lexicon = typed<std::string>(require(doc, "lexicon", ""), "lexicon");
    cfg.labels = typed<std::string>(require(doc, "labels", ""), "labels");
    read_into(doc, "transliteration_table", "", cfg.transliteration_table);
    read_into(doc, "output_dir", "", cfg.output_dir);
    read_into(doc, "seed", "", cfg.seed);
    read_into(doc, "threads", "", cfg.threads);
    read_into(doc, "top_n", "", cfg.top_n);

    if (auto it = doc.find("columns"); it != doc.end()) {
        reject_unknown_keys(*it, {"name", "comment"}, "columns.");
        read_into(*it, "name", "columns.", cfg.columns.name_column);
        read_into(*it, "comment", "columns.", cfg.columns.comment_column);
    }
    if (auto it = doc.find("matcher"); it != doc.end()) {
        reject_unknown_keys(*it, {"max_edit_distance", "min_ratio", "max_ngram"}, "matcher.");
        read_into(*it, "max_edit_distance", "matcher.", cfg.matcher.max_edit_distance);
        read_into(*it, "min_ratio", "matcher.", cfg.matcher.min_ratio);
        read_into(*it, "max_ngram", "matcher.", cfg.matcher.max_ngram);
    }
    if (auto it = doc.find("sentiment"); it != doc.end()) {
        reject_unknown_keys(*it,
                            {"max_sequence_length", "embedding_dropout", "hidden_dropout",
                             "embedding_dim", "hidden_dim", "learning_rate", "adam_beta1",
                             "adam_beta2", "adam_epsilon", "epochs", "batch_size"},
                            "sentiment.");
        sentiment::SentimentConfig& s = cfg.sentiment;
        read_into(*it, "max_sequence_length", "sentiment.", s.max_sequence_length);
        read_into(*it, "embedding_dropout", "sentiment.", s.embedding_dropout);
        read_into(*it, "hidden_dropout", "sentiment.", s.hidden_dropout);
        read_into(*it, "embedding_dim", "sentiment.", s.embedding_dim);
        read_into(*it, "hidden_dim", "sentiment.", s.hidden_dim);
        read_into(*it, "learning_rate", "sentiment.", s.learning_rate);
        read_into(*it, "adam_beta1", "sentiment.", s.adam_beta1);
        read_into(*it, "adam_beta2", "sentiment.", s.adam_beta2);
        read_into(*it, "adam_epsilon", "sentiment.", s.adam_epsilon);
        read_into(*it, "epochs", "sentiment.", s.epochs);
        read_into(*it, "batch_size", "sentiment.", s.batch_size);
    }
    if (auto it = doc.find("split"); it != doc.end()) {
        reject_unknown_keys(*it, {"train_fraction"}, "split.");
        read_into(*it, "train_fraction", "split.", cfg.split.train_fraction);
    }
    if (auto it = doc.find("client"); it != doc.end()) {
        reject_unknown_keys(*it, {"enabled", "endpoint", "timeout_ms"}, "client.");
        read_into(*it, "enabled", "client.", cfg.client.enabled);
        read_into(*it, "endpoint", "client.", cfg.client.endpoint);
        read_into(*it, "timeout_ms", "client.", cfg.client.timeout_ms);
    }

    // Range validation before any filesystem access.
    if (cfg.matcher.max_edit_distance < 1) {
        throw ConfigError("matcher.max_edit_distance must be >= 1");
    }
    if (cfg.matcher.min_ratio < 0.0 || cfg.matcher.min_ratio >= 1.0) {
        throw ConfigError("matcher.min_ratio must be in [0, 1)");
    }
    const sentiment::SentimentConfig& s = cfg.sentiment;
    if (s.max_sequence_length < 1) throw ConfigError("sentiment.max_sequence_length must be >= 1");
    if (s.embedding_dim < 1 || s.hidden_dim < 1) {
        throw ConfigError("sentiment embedding_dim and hidden_dim must be >= 1");
    }
    if (s.embedding_dropout < 0.0 || s.embedding_dropout >= 1.0 || s.hidden_dropout < 0.0 ||
        s.hidden_dropout >= 1.0) {
        throw ConfigError("sentiment dropout rates must be in [0, 1)");
    }
    if (!(s.learning_rate > 0.0)) throw ConfigError("sentiment.learning_rate must be > 0");
    if (s.adam_beta1 < 0.0 || s.adam_beta1 >= 1.0 || s.adam_beta2 < 0.0 || s.adam_beta2 >= 1.0) {
        throw ConfigError("sentiment adam betas must be in [0, 1)");
    }
    if (!(s.adam_epsilon > 0.0)) throw ConfigError("sentiment.adam_epsilon must be > 0");
    if (s.epochs < 0) throw ConfigError("sentiment.epochs must be >= 0");
    if (s.batch_size < 1) throw ConfigError("sentiment.batch_size must be >= 1");
    if (!(cfg.split.train_fraction > 0.0 && cfg.split.train_fraction < 1.0)) {
        throw ConfigError("split.train_fraction must be in (0, 1)");
    }
    if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
    if (cfg.top_n < 1) throw ConfigError("top_n must be >= 1");
    if (cfg.client.timeout_ms < 1) throw ConfigError("client.timeout_ms must be >= 1");
    if (cfg.client.enabled && cfg.client.endpoint.empty()) {
        throw ConfigError("client.enabled requires client.endpoint");
    }
    if (cfg.columns.name_column.empty() || cfg.columns.comment_column.empty()) {
        throw ConfigError("columns.name and columns.comment must be non-empty");
    }

    cfg.split.seed = cfg.seed;
    cfg.sentiment.seed = cfg.seed;

    for (std::string& p : cfg.comments) p = resolve(p, base_dir);
    cfg.catalog = resolve(cfg.catalog, base_dir);
    cfg.lexicon = resolve(cfg.lexicon, base_dir);
    cfg.labels = resolve(cfg.labels, base_dir);
    if (!cfg.transliteration_table.empty()) {
        cfg.transliteration_table = resolve(cfg.transliteration_table, base_dir);
    }
    cfg.output_dir = resolve(cfg.output_dir, base_dir);

    for (const std::string& p : cfg.comments) check_exists(p);
    check_exists(cfg.catalog);
    check_exists(cfg.lexicon);
    check_exists(cfg.labels);
    if (!cfg.transliteration_table.empty()) check_exists(cfg.transliteration_table);

    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), fs::path(path).parent_path().string());
}

void apply_overrides(PipelineConfig& cfg,
                     std::optional<std::uint64_t> seed,
                     std::optional<int> threads,
                     std::optional<std::string> output_dir) {
    if (seed) {
        cfg.seed = *seed;
        cfg.split.seed = *seed;
        cfg.sentiment.seed = *seed;
    }
    if (threads) {
        if (*threads < 1) throw ConfigError("threads must be >= 1");
        cfg.threads = *threads;
    }
    if (output_dir) cfg.output_dir = *output_dir;
}

} // namespace banglish::config
