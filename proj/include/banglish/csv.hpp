#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace banglish::csv {

using Row = std::vector<std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    // Index of a header column by exact name.
    std::optional<std::size_t> column(std::string_view name) const;
    // Cell by row/column; empty string when the row is shorter than the header.
    const std::string& cell(std::size_t row, std::size_t col) const;
};

// Dialect: comma-delimited, header row, quoted fields with doubled-quote
// escaping, quotes may span newlines. Bytes are passed through untouched
// (UTF-8 safe). CRLF line endings are accepted.
Table parse(std::string_view text, const std::string& origin);

// Reads and parses a file. Throws InputError if unreadable, DataError if
// malformed or missing the header row.
Table read_file(const std::string& path);

// Quotes a field only when it contains a comma, quote, or newline.
std::string escape_field(std::string_view field);

void write_row(std::ostream& out, const Row& row);
std::string to_string(const Table& table);

} // namespace banglish::csv
