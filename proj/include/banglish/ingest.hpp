#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace banglish::ingest {

// One scraped row, byte-for-byte as found in the source file. An absent or
// empty cell becomes nullopt; whitespace-only cells are kept verbatim and
// only treated as null by profile/clean.
struct RawComment {
    std::string source_file;
    std::size_t row_index = 0;
    std::optional<std::string> commenter_name;
    std::optional<std::string> text;
};

struct CleanComment {
    std::size_t id = 0;
    std::string commenter_name;
    std::string text;

    bool operator==(const CleanComment&) const = default;
};

struct NullProfile {
    std::size_t rows = 0;
    std::size_t missing_name = 0;
    std::size_t missing_text = 0;
    std::size_t duplicate_pairs = 0; // rows beyond the first occurrence of their (name, text) pair
};

struct ColumnSpec {
    std::string name_column = "name";
    std::string comment_column = "comment";
};

// Concatenates the named columns of each CSV in path order, dropping all
// other columns. Throws InputError for unreadable files, DataError when a
// required column is missing (message names the column and file).
std::vector<RawComment> merge_csv(const std::vector<std::string>& paths,
                                  const ColumnSpec& cols = {});

NullProfile profile(const std::vector<RawComment>& rows);

// Drops rows whose name or text is missing or whitespace-only, collapses
// exact (name, text) duplicates to the first occurrence, and assigns
// sequential ids from 0.
std::vector<CleanComment> clean(const std::vector<RawComment>& rows);

// Canonical comments CSV: header id,name,text.
void write_clean_csv(std::ostream& out, const std::vector<CleanComment>& comments);
std::vector<CleanComment> read_clean_csv(const std::string& path);

std::string format_profile(const NullProfile& p);

} // namespace banglish::ingest
