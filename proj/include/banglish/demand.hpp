#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "banglish/annotate.hpp"
#include "banglish/catalog.hpp"
#include "banglish/gender.hpp"
#include "banglish/ingest.hpp"
#include "banglish/matcher.hpp"
#include "banglish/sentiment.hpp"

namespace banglish::demand {

struct AnalyzedComment {
    std::size_t comment_id = 0;
    std::vector<std::string> devices; // normalized models, deduplicated, first-mention order
    annotate::Sentiment sentiment = annotate::Sentiment::Positive;
    double probability = 0.0;
    gender::Gender commenter_gender = gender::Gender::Unknown;

    bool operator==(const AnalyzedComment&) const = default;
};

struct DemandRecord {
    std::string device;
    std::size_t pos_male = 0;
    std::size_t pos_female = 0;
    std::size_t pos_unknown = 0;
    std::size_t neg_male = 0;
    std::size_t neg_female = 0;
    std::size_t neg_unknown = 0;
    std::size_t demand_score = 0; // = pos_male + pos_female + pos_unknown

    std::size_t total_mentions() const {
        return pos_male + pos_female + pos_unknown + neg_male + neg_female + neg_unknown;
    }

    bool operator==(const DemandRecord&) const = default;
};

// Per comment: correct + extract entities, classify sentiment on the
// corrected text, attach the commenter's predicted gender. Comments with no
// device are dropped. Gender is resolved once per distinct name, serially
// and in input order, so a rate-limited client is hit predictably; the rest
// of the kernel is pure. The serial variant is the reference the OpenMP one
// is tested against.
std::vector<AnalyzedComment> analyze_serial(const std::vector<ingest::CleanComment>& comments,
                                            const catalog::DeviceCatalog& catalog,
                                            const matcher::MatcherConfig& matcher_cfg,
                                            const sentiment::SentimentModel& model,
                                            const gender::NameGenderLexicon& lexicon,
                                            gender::TransliterationClient* client);
std::vector<AnalyzedComment> analyze(const std::vector<ingest::CleanComment>& comments,
                                     const catalog::DeviceCatalog& catalog,
                                     const matcher::MatcherConfig& matcher_cfg,
                                     const sentiment::SentimentModel& model,
                                     const gender::NameGenderLexicon& lexicon,
                                     gender::TransliterationClient* client,
                                     int threads);

// One record per distinct device, ranked by demand_score descending, then
// total mentions descending, then device name ascending.
std::vector<DemandRecord> aggregate(const std::vector<AnalyzedComment>& analyzed);

std::string report_to_csv(const std::vector<DemandRecord>& records);
std::string report_to_json(const std::vector<DemandRecord>& records);
std::vector<DemandRecord> parse_report_csv(const std::string& csv_text);

enum class ReportFormat { Csv, Json };
void emit_report(const std::vector<DemandRecord>& records, const std::string& path,
                 ReportFormat format);

// Horizontal stacked bars for the top_n ranked devices: male #1f77b4,
// female #ff7f0e, unknown #9e9e9e, widths proportional to positive counts.
// Empty records produce a "no data" placeholder. top_n must be >= 1.
std::string chart_to_svg(const std::vector<DemandRecord>& records, std::size_t top_n);
void emit_chart_svg(const std::vector<DemandRecord>& records, const std::string& path,
                    std::size_t top_n);

} // namespace banglish::demand
