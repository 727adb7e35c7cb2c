#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "banglish/catalog.hpp"
#include "banglish/ingest.hpp"
#include "banglish/matcher.hpp"

namespace banglish::annotate {

enum class Sentiment { Positive, Negative };

struct EntitySpan {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string label = "DEVICE";

    bool operator==(const EntitySpan&) const = default;
};

struct LabeledComment {
    ingest::CleanComment comment;
    std::optional<Sentiment> sentiment;
    std::vector<EntitySpan> entities; // within text bounds, non-overlapping, sorted

    bool operator==(const LabeledComment&) const = default;
};

struct SplitConfig {
    double train_fraction = 0.6;
    std::uint64_t seed = 0;
};

// Runs spell correction + entity extraction per comment; comments with no
// entity are dropped, the stored text becomes the corrected text, and spans
// refer to it. Sentiment is left unset.
std::vector<LabeledComment> auto_annotate(const std::vector<ingest::CleanComment>& comments,
                                          const catalog::DeviceCatalog& catalog,
                                          const matcher::MatcherConfig& cfg,
                                          int threads = 1);

// Sidecar labels CSV: id,sentiment with values pos/neg.
std::unordered_map<std::size_t, Sentiment> load_labels(const std::string& path);

// Attaches labels by comment id; returns how many comments got one.
std::size_t merge_labels(std::vector<LabeledComment>& data,
                         const std::unordered_map<std::size_t, Sentiment>& labels);

// Seeded shuffle, first floor(train_fraction*n) to train, rest to test.
// Throws DataError when data has fewer than 2 items.
std::pair<std::vector<LabeledComment>, std::vector<LabeledComment>>
split(std::vector<LabeledComment> data, const SplitConfig& cfg);

// One JSON array of {"text": ..., "entities": [[begin, end, label], ...]}.
void export_offset_json(const std::vector<LabeledComment>& data, const std::string& path);

struct OffsetDoc {
    std::string text;
    std::vector<EntitySpan> entities;

    bool operator==(const OffsetDoc&) const = default;
};
std::vector<OffsetDoc> import_offset_json(const std::string& path);

// Text file of one comment per line (internal newlines become spaces) plus
// a CSV with header File,Line,Begin Offset,End Offset,Type. Line is
// 0-based; offsets are within the line; End Offset is exclusive.
void export_lines_and_offsets(const std::vector<LabeledComment>& data,
                              const std::string& text_path,
                              const std::string& csv_path);

// Split-file persistence carrying ids and labels alongside spans, so the
// training stage can rehydrate exactly what annotate produced.
void save_split_json(const std::vector<LabeledComment>& data, const std::string& path);
std::vector<LabeledComment> load_split_json(const std::string& path);

} // namespace banglish::annotate
