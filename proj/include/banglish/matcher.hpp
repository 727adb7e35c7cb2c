#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "banglish/catalog.hpp"
#include "banglish/ingest.hpp"
#include "banglish/textprep.hpp"

namespace banglish::matcher {

struct MatcherConfig {
    // Exclusive bound: a candidate is accepted only when distance < this.
    int max_edit_distance = 3;
    // Exclusive bound: a candidate is accepted only when ratio > this.
    double min_ratio = 0.55;
    // Longest token n-gram tried against the catalog; 0 means use the
    // catalog's max_model_tokens.
    std::size_t max_ngram = 0;
};

std::size_t effective_max_ngram(const MatcherConfig& cfg, const catalog::DeviceCatalog& catalog);

// Levenshtein distance, unit costs. Case-sensitive; callers fold first.
std::size_t edit_distance(std::string_view a, std::string_view b);

// Similarity ratio (|a|+|b|-D2)/(|a|+|b|) where D2 charges substitutions
// cost 2 and insert/delete cost 1. Both strings empty yields 1.0.
double levenshtein_ratio(std::string_view a, std::string_view b);

// Edit distance with substitution cost 2 (the ratio's distance).
std::size_t indel_substitution_distance(std::string_view a, std::string_view b);

struct Replacement {
    std::size_t begin = 0; // offsets into the original text
    std::size_t end = 0;
    std::string original;
    std::string replacement;
    std::size_t distance = 0;
    double ratio = 0.0;

    bool operator==(const Replacement&) const = default;
};

struct CorrectionResult {
    std::string corrected_text;
    std::vector<Replacement> replacements; // ordered, non-overlapping
};

// Spell-corrects a tokenized comment against the catalog. Candidate units
// are token n-grams (n = max down to 1), leftmost-first within a length,
// non-overlapping once replaced. A unit is replaced by the catalog entry
// that, among entries passing BOTH thresholds, minimizes edit distance,
// then maximizes ratio, then comes first in catalog order. Comparisons are
// case-folded and space-insensitive (tokens joined without separators
// against space-stripped model names), so "galaxys20" is an exact match;
// the replacement text keeps catalog casing and spacing.
CorrectionResult correct_tokens(const text::TokenizedComment& comment,
                                const catalog::DeviceCatalog& catalog,
                                const MatcherConfig& cfg);

struct EntityMatch {
    long comment_id = 0;
    std::size_t begin = 0; // offsets into the corrected text
    std::size_t end = 0;
    std::string device;

    bool operator==(const EntityMatch&) const = default;
};

// Every maximal case-insensitive, word-bounded occurrence of a catalog
// model in the corrected text; overlaps resolved longest-first then
// leftmost-first. Output ordered by begin offset.
std::vector<EntityMatch> extract_entities(const CorrectionResult& corrected,
                                          long comment_id,
                                          const catalog::DeviceCatalog& catalog);

struct CommentAnalysis {
    std::size_t comment_id = 0;
    CorrectionResult correction;
    std::vector<EntityMatch> entities;
};

// Per-comment correction + extraction over a whole comment table. The
// serial variant is the reference; the threaded variant runs the same
// kernel under OpenMP and must produce identical results for any schedule.
std::vector<CommentAnalysis> process_comments_serial(const std::vector<ingest::CleanComment>& comments,
                                                     const catalog::DeviceCatalog& catalog,
                                                     const MatcherConfig& cfg);
std::vector<CommentAnalysis> process_comments(const std::vector<ingest::CleanComment>& comments,
                                              const catalog::DeviceCatalog& catalog,
                                              const MatcherConfig& cfg,
                                              int threads);

} // namespace banglish::matcher
