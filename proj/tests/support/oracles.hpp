#pragma once
// Independent reference implementations that the library's fast paths are
// checked against. Kept deliberately naive.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "banglish/demand.hpp"
#include "banglish/rng.hpp"

namespace test {

// Textbook full-matrix Levenshtein with per-operation costs, written
// independently of the library's rolling two-row version.
inline std::size_t full_matrix_distance(std::string_view a, std::string_view b,
                                        std::size_t substitution_cost) {
    const std::size_t n = a.size(), m = b.size();
    std::vector<std::vector<std::size_t>> d(n + 1, std::vector<std::size_t>(m + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) d[i][0] = i;
    for (std::size_t j = 0; j <= m; ++j) d[0][j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            const std::size_t sub =
                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : substitution_cost);
            const std::size_t del = d[i - 1][j] + 1;
            const std::size_t ins = d[i][j - 1] + 1;
            d[i][j] = sub;
            if (del < d[i][j]) d[i][j] = del;
            if (ins < d[i][j]) d[i][j] = ins;
        }
    }
    return d[n][m];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) {
    return full_matrix_distance(a, b, 1);
}

inline std::size_t weighted_distance(std::string_view a, std::string_view b) {
    return full_matrix_distance(a, b, 2);
}

inline std::string random_string(std::mt19937_64& gen, std::size_t max_len,
                                 std::string_view alphabet) {
    const std::size_t len = banglish::rng::bounded(gen, max_len + 1);
    std::string s;
    s.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        s.push_back(alphabet[banglish::rng::bounded(gen, alphabet.size())]);
    }
    return s;
}

// Brute recount for demand::aggregate: nested map tally plus an
// independently written ranking comparator.
inline std::vector<banglish::demand::DemandRecord>
naive_recount(const std::vector<banglish::demand::AnalyzedComment>& analyzed) {
    using banglish::annotate::Sentiment;
    using banglish::gender::Gender;

    // counts[device] = {pos_m, pos_f, pos_u, neg_m, neg_f, neg_u}
    std::map<std::string, std::array<std::size_t, 6>> counts;
    for (const banglish::demand::AnalyzedComment& a : analyzed) {
        for (const std::string& device : a.devices) {
            std::size_t idx = a.sentiment == Sentiment::Positive ? 0 : 3;
            if (a.commenter_gender == Gender::Female) idx += 1;
            if (a.commenter_gender == Gender::Unknown) idx += 2;
            counts[device][idx] += 1;
        }
    }
    std::vector<banglish::demand::DemandRecord> records;
    for (const auto& [device, c] : counts) {
        banglish::demand::DemandRecord r;
        r.device = device;
        r.pos_male = c[0];
        r.pos_female = c[1];
        r.pos_unknown = c[2];
        r.neg_male = c[3];
        r.neg_female = c[4];
        r.neg_unknown = c[5];
        r.demand_score = c[0] + c[1] + c[2];
        records.push_back(r);
    }
    std::stable_sort(records.begin(), records.end(),
                     [](const banglish::demand::DemandRecord& x,
                        const banglish::demand::DemandRecord& y) {
                         if (x.demand_score != y.demand_score) {
                             return x.demand_score > y.demand_score;
                         }
                         const std::size_t tx = x.pos_male + x.pos_female + x.pos_unknown +
                                                x.neg_male + x.neg_female + x.neg_unknown;
                         const std::size_t ty = y.pos_male + y.pos_female + y.pos_unknown +
                                                y.neg_male + y.neg_female + y.neg_unknown;
                         if (tx != ty) return tx > ty;
                         return x.device < y.device;
                     });
    return records;
}

} // namespace test
