#include "banglish/matcher.hpp"

#include <algorithm>
#include <cctype>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace banglish::matcher {

namespace {

std::size_t size_delta(std::size_t a, std::size_t b) {
    return a > b ? a - b : b - a;
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

// Matching ignores spacing as well as case: "galaxys20" and "galaxy s20"
// are the same device. Model names and token windows are compared with
// spaces removed.
std::string despace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c != ' ') out.push_back(c);
    }
    return out;
}

} // namespace

std::size_t effective_max_ngram(const MatcherConfig& cfg, const catalog::DeviceCatalog& catalog) {
    return cfg.max_ngram > 0 ? cfg.max_ngram : catalog.max_model_tokens;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<std::size_t> prev(m + 1);
    std::vector<std::size_t> curr(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            std::size_t del = prev[j] + 1;
            std::size_t ins = curr[j - 1] + 1;
            curr[j] = std::min({sub, del, ins});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

std::size_t indel_substitution_distance(std::string_view a, std::string_view b) {
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;

    std::vector<std::size_t> prev(m + 1);
    std::vector<std::size_t> curr(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        curr[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 2);
            std::size_t del = prev[j] + 1;
            std::size_t ins = curr[j - 1] + 1;
            curr[j] = std::min({sub, del, ins});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

double levenshtein_ratio(std::string_view a, std::string_view b) {
    const std::size_t total = a.size() + b.size();
    if (total == 0) return 1.0;
    const std::size_t d2 = indel_substitution_distance(a, b);
    return static_cast<double>(total - d2) / static_cast<double>(total);
}

namespace {

struct Candidate {
    bool found = false;
    std::size_t entry = 0;
    std::size_t distance = 0;
    double ratio = 0.0;
};

// Best catalog entry for one unit: among entries passing both thresholds,
// min distance, then max ratio, then catalog order. Both sides arrive
// folded and despaced.
Candidate best_entry(const std::string& unit_key,
                     const std::vector<std::string>& model_keys,
                     const MatcherConfig& cfg) {
    Candidate best;
    const std::size_t max_d = static_cast<std::size_t>(cfg.max_edit_distance);
    for (std::size_t i = 0; i < model_keys.size(); ++i) {
        const std::string& model = model_keys[i];
        // The length gap lower-bounds the distance.
        if (size_delta(unit_key.size(), model.size()) >= max_d) continue;
        std::size_t d = edit_distance(unit_key, model);
        if (d >= max_d) continue;
        if (best.found && d > best.distance) continue;
        double e = levenshtein_ratio(unit_key, model);
        if (e <= cfg.min_ratio) continue;
        if (!best.found || d < best.distance ||
            (d == best.distance && e > best.ratio)) {
            best = Candidate{true, i, d, e};
        }
    }
    return best;
}

} // namespace

CorrectionResult correct_tokens(const text::TokenizedComment& comment,
                                const catalog::DeviceCatalog& catalog,
                                const MatcherConfig& cfg) {
    const std::vector<text::Token>& tokens = comment.tokens;
    const std::size_t count = tokens.size();
    const std::size_t max_n = std::min(effective_max_ngram(cfg, catalog),
                                       count == 0 ? std::size_t{1} : count);

    // Tokens are whitespace-free already, so folding alone makes a key.
    std::vector<std::string> token_keys;
    token_keys.reserve(count);
    for (const text::Token& t : tokens) token_keys.push_back(text::normalize_case(t.text));
    std::vector<std::string> model_keys;
    model_keys.reserve(catalog.folded_models.size());
    for (const std::string& m : catalog.folded_models) model_keys.push_back(despace(m));

    std::vector<bool> used(count, false);
    std::vector<Replacement> replacements;

    for (std::size_t n = max_n; n >= 1; --n) {
        for (std::size_t i = 0; i + n <= count; ++i) {
            bool overlap = false;
            for (std::size_t k = i; k < i + n; ++k) {
                if (used[k]) { overlap = true; break; }
            }
            if (overlap) continue;

            std::string unit = token_keys[i];
            for (std::size_t k = i + 1; k < i + n; ++k) unit += token_keys[k];

            Candidate c = best_entry(unit, model_keys, cfg);
            if (!c.found) continue;

            std::size_t begin = tokens[i].begin;
            std::size_t end = tokens[i + n - 1].end;
            replacements.push_back(Replacement{
                begin, end,
                comment.text.substr(begin, end - begin),
                catalog.entries[c.entry].normalized_model,
                c.distance, c.ratio});
            for (std::size_t k = i; k < i + n; ++k) used[k] = true;
        }
        if (n == 1) break;
    }

    std::sort(replacements.begin(), replacements.end(),
              [](const Replacement& a, const Replacement& b) { return a.begin < b.begin; });

    CorrectionResult result;
    std::size_t cursor = 0;
    for (const Replacement& r : replacements) {
        result.corrected_text += comment.text.substr(cursor, r.begin - cursor);
        result.corrected_text += r.replacement;
        cursor = r.end;
    }
    result.corrected_text += comment.text.substr(cursor);
    result.replacements = std::move(replacements);
    return result;
}

std::vector<EntityMatch> extract_entities(const CorrectionResult& corrected,
                                          long comment_id,
                                          const catalog::DeviceCatalog& catalog) {
    const std::string folded = text::normalize_case(corrected.corrected_text);

    struct Occurrence {
        std::size_t begin, end, entry;
    };
    std::vector<Occurrence> occurrences;
    for (std::size_t e = 0; e < catalog.folded_models.size(); ++e) {
        const std::string& model = catalog.folded_models[e];
        if (model.empty()) continue;
        std::size_t pos = 0;
        while ((pos = folded.find(model, pos)) != std::string::npos) {
            std::size_t end = pos + model.size();
            bool left_ok = pos == 0 || !is_word_char(folded[pos - 1]);
            bool right_ok = end == folded.size() || !is_word_char(folded[end]);
            if (left_ok && right_ok) occurrences.push_back(Occurrence{pos, end, e});
            ++pos;
        }
    }

    std::sort(occurrences.begin(), occurrences.end(),
              [](const Occurrence& a, const Occurrence& b) {
                  std::size_t la = a.end - a.begin, lb = b.end - b.begin;
                  if (la != lb) return la > lb;
                  if (a.begin != b.begin) return a.begin < b.begin;
                  return a.entry < b.entry;
              });

    std::vector<Occurrence> accepted;
    for (const Occurrence& o : occurrences) {
        bool overlaps = false;
        for (const Occurrence& a : accepted) {
            if (o.begin < a.end && a.begin < o.end) { overlaps = true; break; }
        }
        if (!overlaps) accepted.push_back(o);
    }
    std::sort(accepted.begin(), accepted.end(),
              [](const Occurrence& a, const Occurrence& b) { return a.begin < b.begin; });

    std::vector<EntityMatch> matches;
    matches.reserve(accepted.size());
    for (const Occurrence& o : accepted) {
        matches.push_back(EntityMatch{comment_id, o.begin, o.end,
                                      catalog.entries[o.entry].normalized_model});
    }
    return matches;
}

namespace {

CommentAnalysis analyze_one(const ingest::CleanComment& comment,
                            const catalog::DeviceCatalog& catalog,
                            const MatcherConfig& cfg) {
    CommentAnalysis out;
    out.comment_id = comment.id;
    text::TokenizedComment tokenized =
        text::tokenize_comment(static_cast<long>(comment.id), comment.text);
    out.correction = correct_tokens(tokenized, catalog, cfg);
    out.entities = extract_entities(out.correction, static_cast<long>(comment.id), catalog);
    return out;
}

} // namespace

std::vector<CommentAnalysis> process_comments_serial(const std::vector<ingest::CleanComment>& comments,
                                                     const catalog::DeviceCatalog& catalog,
                                                     const MatcherConfig& cfg) {
    std::vector<CommentAnalysis> results(comments.size());
    for (std::size_t i = 0; i < comments.size(); ++i) {
        results[i] = analyze_one(comments[i], catalog, cfg);
    }
    return results;
}

std::vector<CommentAnalysis> process_comments(const std::vector<ingest::CleanComment>& comments,
                                              const catalog::DeviceCatalog& catalog,
                                              const MatcherConfig& cfg,
                                              int threads) {
    if (threads <= 1) return process_comments_serial(comments, catalog, cfg);

    std::vector<CommentAnalysis> results(comments.size());
#ifdef _OPENMP
    const long total = static_cast<long>(comments.size());
    // Results land at their input index, so the schedule cannot change output.
    #pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long i = 0; i < total; ++i) {
        results[static_cast<std::size_t>(i)] =
            analyze_one(comments[static_cast<std::size_t>(i)], catalog, cfg);
    }
#else
    for (std::size_t i = 0; i < comments.size(); ++i) {
        results[i] = analyze_one(comments[i], catalog, cfg);
    }
#endif
    return results;
}

} // namespace banglish::matcher
