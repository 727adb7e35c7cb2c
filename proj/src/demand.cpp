#include "banglish/demand.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"
#include "banglish/textprep.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace banglish::demand {

using nlohmann::json;

namespace {

// Gender per distinct raw name, resolved up front so the per-comment kernel
// stays pure (the transliteration client may be stateful).
std::unordered_map<std::string, gender::Gender>
resolve_genders(const std::vector<ingest::CleanComment>& comments,
                const gender::NameGenderLexicon& lexicon,
                gender::TransliterationClient* client) {
    std::unordered_map<std::string, gender::Gender> cache;
    for (const ingest::CleanComment& c : comments) {
        if (cache.count(c.commenter_name)) continue;
        cache.emplace(c.commenter_name, gender::predict_gender(c.commenter_name, lexicon, client));
    }
    return cache;
}

bool analyze_one(const ingest::CleanComment& c,
                 const catalog::DeviceCatalog& cat,
                 const matcher::MatcherConfig& mcfg,
                 const sentiment::SentimentModel& model,
                 gender::Gender commenter_gender,
                 AnalyzedComment& out) {
    text::TokenizedComment tok = text::tokenize_comment(static_cast<long>(c.id), c.text);
    matcher::CorrectionResult corr = matcher::correct_tokens(tok, cat, mcfg);
    std::vector<matcher::EntityMatch> entities =
        matcher::extract_entities(corr, static_cast<long>(c.id), cat);
    if (entities.empty()) return false;

    out.comment_id = c.id;
    out.devices.clear();
    for (const matcher::EntityMatch& e : entities) {
        if (std::find(out.devices.begin(), out.devices.end(), e.device) == out.devices.end()) {
            out.devices.push_back(e.device);
        }
    }
    sentiment::Classification cls = sentiment::classify(model, corr.corrected_text);
    out.sentiment = cls.positive ? annotate::Sentiment::Positive : annotate::Sentiment::Negative;
    out.probability = cls.probability;
    out.commenter_gender = commenter_gender;
    return true;
}

std::vector<AnalyzedComment> compact(std::vector<AnalyzedComment>& results,
                                     const std::vector<char>& keep) {
    std::vector<AnalyzedComment> out;
    out.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (keep[i]) out.push_back(std::move(results[i]));
    }
    return out;
}

} // namespace

std::vector<AnalyzedComment> analyze_serial(const std::vector<ingest::CleanComment>& comments,
                                            const catalog::DeviceCatalog& catalog,
                                            const matcher::MatcherConfig& matcher_cfg,
                                            const sentiment::SentimentModel& model,
                                            const gender::NameGenderLexicon& lexicon,
                                            gender::TransliterationClient* client) {
    auto genders = resolve_genders(comments, lexicon, client);
    std::vector<AnalyzedComment> results(comments.size());
    std::vector<char> keep(comments.size(), 0);
    for (std::size_t i = 0; i < comments.size(); ++i) {
        keep[i] = analyze_one(comments[i], catalog, matcher_cfg, model,
                              genders.at(comments[i].commenter_name), results[i]);
    }
    return compact(results, keep);
}

std::vector<AnalyzedComment> analyze(const std::vector<ingest::CleanComment>& comments,
                                     const catalog::DeviceCatalog& catalog,
                                     const matcher::MatcherConfig& matcher_cfg,
                                     const sentiment::SentimentModel& model,
                                     const gender::NameGenderLexicon& lexicon,
                                     gender::TransliterationClient* client,
                                     int threads) {
#ifdef _OPENMP
    if (threads > 1) {
        auto genders = resolve_genders(comments, lexicon, client);
        std::vector<AnalyzedComment> results(comments.size());
        std::vector<char> keep(comments.size(), 0);
        const long n = static_cast<long>(comments.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (long i = 0; i < n; ++i) {
            const auto idx = static_cast<std::size_t>(i);
            keep[idx] = analyze_one(comments[idx], catalog, matcher_cfg, model,
                                    genders.at(comments[idx].commenter_name), results[idx]);
        }
        return compact(results, keep);
    }
#else
    (void)threads;
#endif
    return analyze_serial(comments, catalog, matcher_cfg, model, lexicon, client);
}

std::vector<DemandRecord> aggregate(const std::vector<AnalyzedComment>& analyzed) {
    std::map<std::string, DemandRecord> tally;
    for (const AnalyzedComment& a : analyzed) {
        for (const std::string& device : a.devices) {
            DemandRecord& r = tally[device];
            r.device = device;
            const bool positive = a.sentiment == annotate::Sentiment::Positive;
            switch (a.commenter_gender) {
            case gender::Gender::Male: (positive ? r.pos_male : r.neg_male)++; break;
            case gender::Gender::Female: (positive ? r.pos_female : r.neg_female)++; break;
            case gender::Gender::Unknown: (positive ? r.pos_unknown : r.neg_unknown)++; break;
            }
        }
    }
    std::vector<DemandRecord> records;
    records.reserve(tally.size());
    for (auto& [device, r] : tally) {
        r.demand_score = r.pos_male + r.pos_female + r.pos_unknown;
        records.push_back(std::move(r));
    }
    std::sort(records.begin(), records.end(), [](const DemandRecord& a, const DemandRecord& b) {
        if (a.demand_score != b.demand_score) return a.demand_score > b.demand_score;
        if (a.total_mentions() != b.total_mentions()) return a.total_mentions() > b.total_mentions();
        return a.device < b.device;
    });
    return records;
}

std::string report_to_csv(const std::vector<DemandRecord>& records) {
    std::ostringstream out;
    out << "device,pos_male,pos_female,pos_unknown,neg_male,neg_female,neg_unknown,demand_score\n";
    for (const DemandRecord& r : records) {
        csv::write_row(out, {r.device, std::to_string(r.pos_male), std::to_string(r.pos_female),
                             std::to_string(r.pos_unknown), std::to_string(r.neg_male),
                             std::to_string(r.neg_female), std::to_string(r.neg_unknown),
                             std::to_string(r.demand_score)});
    }
    return out.str();
}

std::string report_to_json(const std::vector<DemandRecord>& records) {
    json arr = json::array();
    for (const DemandRecord& r : records) {
        arr.push_back({{"device", r.device},
                       {"pos_male", r.pos_male},
                       {"pos_female", r.pos_female},
                       {"pos_unknown", r.pos_unknown},
                       {"neg_male", r.neg_male},
                       {"neg_female", r.neg_female},
                       {"neg_unknown", r.neg_unknown},
                       {"demand_score", r.demand_score}});
    }
    return arr.dump(2) + "\n";
}

std::vector<DemandRecord> parse_report_csv(const std::string& csv_text) {
    csv::Table table = csv::parse(csv_text, "report");
    const char* names[] = {"device", "pos_male", "pos_female", "pos_unknown",
                           "neg_male", "neg_female", "neg_unknown", "demand_score"};
    std::size_t cols[8];
    for (std::size_t i = 0; i < 8; ++i) {
        auto c = table.column(names[i]);
        if (!c) throw DataError(std::string("report is missing column '") + names[i] + "'");
        cols[i] = *c;
    }
    auto count = [&](std::size_t row, std::size_t col) {
        const std::string& cell = table.cell(row, col);
        std::size_t value = 0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
        if (ec != std::errc() || ptr != cell.data() + cell.size()) {
            throw DataError("bad count in report: " + cell);
        }
        return value;
    };
    std::vector<DemandRecord> records;
    records.reserve(table.rows.size());
    for (std::size_t row = 0; row < table.rows.size(); ++row) {
        DemandRecord r;
        r.device = table.cell(row, cols[0]);
        r.pos_male = count(row, cols[1]);
        r.pos_female = count(row, cols[2]);
        r.pos_unknown = count(row, cols[3]);
        r.neg_male = count(row, cols[4]);
        r.neg_female = count(row, cols[5]);
        r.neg_unknown = count(row, cols[6]);
        r.demand_score = count(row, cols[7]);
        records.push_back(std::move(r));
    }
    return records;
}

void emit_report(const std::vector<DemandRecord>& records, const std::string& path,
                 ReportFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write report: " + path);
    out << (format == ReportFormat::Csv ? report_to_csv(records) : report_to_json(records));
    if (!out) throw InputError("cannot write report: " + path);
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string chart_to_svg(const std::vector<DemandRecord>& records, std::size_t top_n) {
    if (top_n == 0) throw ConfigError("chart top_n must be >= 1");

    constexpr double kWidth = 900.0;
    constexpr double kLabelWidth = 250.0;
    constexpr double kBarLeft = 260.0;
    constexpr double kBarRight = 860.0;
    constexpr double kTop = 70.0;
    constexpr double kBarHeight = 22.0;
    constexpr double kGap = 12.0;

    const std::size_t n = std::min(top_n, records.size());
    const double height = records.empty() ? 160.0 : kTop + static_cast<double>(n) * (kBarHeight + kGap) + 40.0;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + px(kWidth) +
           "\" height=\"" + px(height) + "\" font-family=\"sans-serif\">\n";
    svg += "  <title>Gendered demand by device</title>\n";
    svg += "  <text x=\"20\" y=\"28\" font-size=\"18\">Gendered demand (positive mentions)</text>\n";

    if (records.empty()) {
        svg += "  <text x=\"" + px(kWidth / 2) +
               "\" y=\"100\" font-size=\"16\" text-anchor=\"middle\" fill=\"#666666\">no data</text>\n";
        svg += "</svg>\n";
        return svg;
    }

    struct Legend {
        const char* label;
        const char* color;
    };
    const Legend legend[] = {{"male", "#1f77b4"}, {"female", "#ff7f0e"}, {"unknown", "#9e9e9e"}};
    double lx = 20.0;
    for (const Legend& item : legend) {
        svg += "  <rect x=\"" + px(lx) + "\" y=\"40\" width=\"14\" height=\"14\" fill=\"" +
               item.color + "\"/>\n";
        svg += "  <text x=\"" + px(lx + 20) + "\" y=\"52\" font-size=\"13\">" + item.label +
               "</text>\n";
        lx += 110.0;
    }

    std::size_t max_score = 0;
    for (std::size_t i = 0; i < n; ++i) max_score = std::max(max_score, records[i].demand_score);
    const double scale =
        max_score == 0 ? 0.0 : (kBarRight - kBarLeft) / static_cast<double>(max_score);

    for (std::size_t i = 0; i < n; ++i) {
        const DemandRecord& r = records[i];
        const double y = kTop + static_cast<double>(i) * (kBarHeight + kGap);
        svg += "  <text x=\"" + px(kLabelWidth) + "\" y=\"" + px(y + kBarHeight - 6) +
               "\" font-size=\"13\" text-anchor=\"end\">" + xml_escape(r.device) + "</text>\n";

        double x = kBarLeft;
        const std::size_t segments[] = {r.pos_male, r.pos_female, r.pos_unknown};
        for (std::size_t s = 0; s < 3; ++s) {
            const double w = static_cast<double>(segments[s]) * scale;
            if (segments[s] > 0) {
                svg += "  <rect x=\"" + px(x) + "\" y=\"" + px(y) + "\" width=\"" + px(w) +
                       "\" height=\"" + px(kBarHeight) + "\" fill=\"" + legend[s].color + "\"/>\n";
            }
            x += w;
        }
        svg += "  <text x=\"" + px(x + 6) + "\" y=\"" + px(y + kBarHeight - 6) +
               "\" font-size=\"12\" fill=\"#333333\">" + std::to_string(r.demand_score) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

void emit_chart_svg(const std::vector<DemandRecord>& records, const std::string& path,
                    std::size_t top_n) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write chart: " + path);
    out << chart_to_svg(records, top_n);
    if (!out) throw InputError("cannot write chart: " + path);
}

} // namespace banglish::demand
