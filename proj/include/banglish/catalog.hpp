#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace banglish::catalog {

struct CatalogEntry {
    std::string brand;
    std::string full_model;
    std::string normalized_model;

    bool operator==(const CatalogEntry&) const = default;
};

struct DeviceCatalog {
    std::vector<CatalogEntry> entries;
    // Case-folded normalized models, parallel to entries.
    std::vector<std::string> folded_models;
    std::size_t max_model_tokens = 1;

    bool empty() const { return entries.empty(); }
    std::size_t size() const { return entries.size(); }
};

// A brand prefix is only stripped when the remaining model keeps at least
// this many characters (internal spaces included).
inline constexpr std::size_t kMinModelChars = 7;

// Removes parenthesized annotations, standalone 4-digit years 1990-2030,
// and trademark/registered symbols; collapses whitespace and trims.
std::string strip_markers(std::string_view model);

// Strips the leading brand token(s) from full_model when present and when
// the remainder clears kMinModelChars. Throws DataError on empty full_model.
CatalogEntry normalize_model(std::string_view brand, std::string_view full_model);

// Builds a catalog from (brand, model) pairs: normalizes every row, drops
// case-folded duplicate models (first wins), computes max_model_tokens.
// Rows with a whitespace-only model cell are skipped. Throws DataError when
// nothing survives.
DeviceCatalog make_catalog(const std::vector<std::pair<std::string, std::string>>& rows);

// CSV with header columns brand,model. Throws DataError for missing columns
// or an empty catalog.
DeviceCatalog load_catalog(const std::string& path);

// Inspection dump: brand,full_model,normalized_model.
void write_catalog_csv(std::ostream& out, const DeviceCatalog& catalog);

// Reads write_catalog_csv output back without re-normalizing, so the match
// stage consumes exactly what the catalog stage produced.
DeviceCatalog read_catalog_csv(const std::string& path);

} // namespace banglish::catalog
