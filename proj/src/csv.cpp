#include "banglish/csv.hpp"

#include <fstream>
#include <sstream>

#include "banglish/errors.hpp"

namespace banglish::csv {

std::optional<std::size_t> Table::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return std::nullopt;
}

const std::string& Table::cell(std::size_t row, std::size_t col) const {
    static const std::string empty;
    const Row& r = rows[row];
    return col < r.size() ? r[col] : empty;
}

Table parse(std::string_view text, const std::string& origin) {
    std::vector<Row> records;
    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool field_was_quoted = false;

    auto end_field = [&] {
        current.push_back(std::move(field));
        field.clear();
        field_started = false;
        field_was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        records.push_back(std::move(current));
        current.clear();
    };

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < n && text[i + 1] == '"') {
                    field.push_back('"');
                    i += 2;
                } else {
                    in_quotes = false;
                    ++i;
                }
            } else {
                field.push_back(c);
                ++i;
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field_started) {
                in_quotes = true;
                field_started = true;
                field_was_quoted = true;
            } else if (field_was_quoted && field.empty()) {
                // Reopening "" at field start: escaped quote form.
                field.push_back('"');
                in_quotes = true;
            } else if (field_was_quoted) {
                in_quotes = true; // "a""b" continuation already handled above
            } else {
                throw DataError(origin + ": bare quote inside unquoted field");
            }
            ++i;
            break;
        case ',':
            end_field();
            ++i;
            break;
        case '\r':
            if (i + 1 < n && text[i + 1] == '\n') {
                end_record();
                i += 2;
            } else {
                end_record();
                ++i;
            }
            break;
        case '\n':
            end_record();
            ++i;
            break;
        default:
            field.push_back(c);
            field_started = true;
            ++i;
            break;
        }
    }
    if (in_quotes) throw DataError(origin + ": unterminated quoted field");
    if (field_started || !current.empty()) end_record();

    if (records.empty()) throw DataError(origin + ": missing header row");

    Table table;
    table.header = std::move(records.front());
    table.rows.assign(std::make_move_iterator(records.begin() + 1),
                      std::make_move_iterator(records.end()));
    return table;
}

Table read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw InputError("cannot read file: " + path);
    return parse(buf.str(), path);
}

std::string escape_field(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\r\n") != std::string_view::npos;
    if (!needs_quotes) return std::string(field);
    std::string out;
    out.reserve(field.size() + 2);
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << escape_field(row[i]);
    }
    out << '\n';
}

std::string to_string(const Table& table) {
    std::ostringstream out;
    write_row(out, table.header);
    for (const Row& r : table.rows) write_row(out, r);
    return out.str();
}

} // namespace banglish::csv
