#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "banglish/annotate.hpp"
#include "banglish/ingest.hpp"
#include "banglish/matcher.hpp"
#include "banglish/sentiment.hpp"

namespace banglish::config {

struct ClientConfig {
    bool enabled = false;
    std::string endpoint;
    int timeout_ms = 2000;
};

struct PipelineConfig {
    std::vector<std::string> comments; // raw scraped CSVs, merged in order
    std::string catalog;
    std::string lexicon;
    std::string labels;
    std::string transliteration_table; // empty = no offline table
    std::string output_dir = "out";
    ingest::ColumnSpec columns;
    matcher::MatcherConfig matcher;
    sentiment::SentimentConfig sentiment;
    annotate::SplitConfig split;
    ClientConfig client;
    std::uint64_t seed = 0;
    int threads = 1;
    std::size_t top_n = 10;
};

// Parses and validates a config document. Unknown or ill-typed keys and
// out-of-range values raise ConfigError; referenced input files that do not
// exist raise InputError. Relative paths (including output_dir) are resolved
// against base_dir.
PipelineConfig parse_config(const std::string& json_text, const std::string& base_dir);

// read file + parse_config against the file's directory.
PipelineConfig load_config(const std::string& path);

// Command-line overrides: --seed replaces the seed everywhere (split and
// sentiment included); --threads and --output-dir replace their fields
// verbatim.
void apply_overrides(PipelineConfig& cfg,
                     std::optional<std::uint64_t> seed,
                     std::optional<int> threads,
                     std::optional<std::string> output_dir);

} // namespace banglish::config
