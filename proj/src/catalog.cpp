#include "banglish/catalog.hpp"

#include <cctype>
#include <unordered_set>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"
#include "banglish/textprep.hpp"

namespace banglish::catalog {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

bool is_year_token(std::string_view tok) {
    if (tok.size() != 4) return false;
    int value = 0;
    for (char c : tok) {
        if (c < '0' || c > '9') return false;
        value = value * 10 + (c - '0');
    }
    return value >= 1990 && value <= 2030;
}

void erase_all(std::string& s, std::string_view needle) {
    std::size_t pos = 0;
    while ((pos = s.find(needle, pos)) != std::string::npos) {
        s.erase(pos, needle.size());
    }
}

bool is_blank(std::string_view s) {
    for (char c : s) {
        if (!is_space(c)) return false;
    }
    return true;
}

} // namespace

std::string strip_markers(std::string_view model) {
    std::string s(model);

    // Parenthesized annotations, e.g. "(2020)", "(Global)".
    std::size_t open;
    while ((open = s.find('(')) != std::string::npos) {
        std::size_t close = s.find(')', open);
        if (close == std::string::npos) {
            s.erase(open);
            break;
        }
        s.erase(open, close - open + 1);
    }

    erase_all(s, "™"); // TM
    erase_all(s, "®"); // (R)

    // Rebuild token by token: drops standalone year tokens and collapses
    // whitespace in one pass.
    std::string out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t begin = i;
        while (i < s.size() && !is_space(s[i])) ++i;
        if (begin == i) break;
        std::string_view tok(s.data() + begin, i - begin);
        if (is_year_token(tok)) continue;
        if (!out.empty()) out.push_back(' ');
        out.append(tok);
    }
    return out;
}

CatalogEntry normalize_model(std::string_view brand, std::string_view full_model) {
    if (is_blank(full_model)) throw DataError("empty model string");

    CatalogEntry entry;
    entry.brand = std::string(brand);
    entry.full_model = std::string(full_model);

    std::string stripped = strip_markers(full_model);
    if (stripped.empty()) {
        throw DataError("model is empty after marker stripping: " + entry.full_model);
    }
    std::string brand_clean = strip_markers(brand);
    entry.normalized_model = stripped;

    if (!brand_clean.empty() && stripped.size() > brand_clean.size()) {
        std::string folded = text::normalize_case(stripped);
        std::string brand_folded = text::normalize_case(brand_clean);
        if (folded.compare(0, brand_folded.size(), brand_folded) == 0 &&
            stripped[brand_clean.size()] == ' ') {
            std::string remainder = stripped.substr(brand_clean.size() + 1);
            if (remainder.size() >= kMinModelChars) {
                entry.normalized_model = remainder;
            }
        }
    }
    return entry;
}

DeviceCatalog make_catalog(const std::vector<std::pair<std::string, std::string>>& rows) {
    DeviceCatalog catalog;
    std::unordered_set<std::string> seen;
    for (const auto& [brand, model] : rows) {
        if (is_blank(model) || strip_markers(model).empty()) continue;
        CatalogEntry entry = normalize_model(brand, model);
        std::string folded = text::normalize_case(entry.normalized_model);
        if (!seen.insert(folded).second) continue;
        catalog.entries.push_back(std::move(entry));
        catalog.folded_models.push_back(std::move(folded));
    }
    if (catalog.entries.empty()) throw DataError("catalog is empty after normalization");

    catalog.max_model_tokens = 1;
    for (const CatalogEntry& e : catalog.entries) {
        std::size_t tokens = text::word_tokenize(e.normalized_model).size();
        if (tokens > catalog.max_model_tokens) catalog.max_model_tokens = tokens;
    }
    return catalog;
}

DeviceCatalog load_catalog(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto brand_col = table.column("brand");
    auto model_col = table.column("model");
    if (!brand_col || !model_col) {
        throw DataError("missing column 'brand' or 'model' in catalog file: " + path);
    }
    std::vector<std::pair<std::string, std::string>> rows;
    rows.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        rows.emplace_back(table.cell(i, *brand_col), table.cell(i, *model_col));
    }
    try {
        return make_catalog(rows);
    } catch (const DataError&) {
        throw DataError("catalog is empty after normalization: " + path);
    }
}

void write_catalog_csv(std::ostream& out, const DeviceCatalog& catalog) {
    csv::write_row(out, {"brand", "full_model", "normalized_model"});
    for (const CatalogEntry& e : catalog.entries) {
        csv::write_row(out, {e.brand, e.full_model, e.normalized_model});
    }
}

DeviceCatalog read_catalog_csv(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto brand_col = table.column("brand");
    auto full_col = table.column("full_model");
    auto norm_col = table.column("normalized_model");
    if (!brand_col || !full_col || !norm_col) {
        throw DataError("missing catalog columns in file: " + path);
    }
    DeviceCatalog catalog;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        CatalogEntry entry{table.cell(i, *brand_col), table.cell(i, *full_col),
                           table.cell(i, *norm_col)};
        if (entry.normalized_model.empty()) {
            throw DataError("empty normalized_model in catalog file: " + path);
        }
        catalog.folded_models.push_back(text::normalize_case(entry.normalized_model));
        catalog.entries.push_back(std::move(entry));
    }
    if (catalog.entries.empty()) throw DataError("catalog file has no rows: " + path);

    catalog.max_model_tokens = 1;
    for (const CatalogEntry& e : catalog.entries) {
        std::size_t tokens = text::word_tokenize(e.normalized_model).size();
        if (tokens > catalog.max_model_tokens) catalog.max_model_tokens = tokens;
    }
    return catalog;
}

} // namespace banglish::catalog
