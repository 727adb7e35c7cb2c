#include "banglish/ingest.hpp"

#include <cctype>
#include <charconv>
#include <sstream>
#include <unordered_set>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"

namespace banglish::ingest {

namespace {

bool is_blank(const std::optional<std::string>& cell) {
    if (!cell) return true;
    for (char c : *cell) {
        if (std::isspace(static_cast<unsigned char>(c)) == 0) return false;
    }
    return true;
}

std::optional<std::string> cell_value(const csv::Table& t, std::size_t row, std::size_t col) {
    const std::string& v = t.cell(row, col);
    if (v.empty()) return std::nullopt;
    return v;
}

// Key for duplicate detection; missing cells are distinguished from empty text.
std::string pair_key(const RawComment& r) {
    std::string key;
    key.push_back(r.commenter_name ? '1' : '0');
    key.push_back(r.text ? '1' : '0');
    if (r.commenter_name) key += *r.commenter_name;
    key.push_back('\x1f');
    if (r.text) key += *r.text;
    return key;
}

} // namespace

std::vector<RawComment> merge_csv(const std::vector<std::string>& paths,
                                  const ColumnSpec& cols) {
    std::vector<RawComment> out;
    for (const std::string& path : paths) {
        csv::Table table = csv::read_file(path);
        auto name_col = table.column(cols.name_column);
        if (!name_col) {
            throw DataError("missing column '" + cols.name_column + "' in file: " + path);
        }
        auto comment_col = table.column(cols.comment_column);
        if (!comment_col) {
            throw DataError("missing column '" + cols.comment_column + "' in file: " + path);
        }
        for (std::size_t i = 0; i < table.rows.size(); ++i) {
            RawComment r;
            r.source_file = path;
            r.row_index = i;
            r.commenter_name = cell_value(table, i, *name_col);
            r.text = cell_value(table, i, *comment_col);
            out.push_back(std::move(r));
        }
    }
    return out;
}

NullProfile profile(const std::vector<RawComment>& rows) {
    NullProfile p;
    p.rows = rows.size();
    std::unordered_set<std::string> seen;
    for (const RawComment& r : rows) {
        if (is_blank(r.commenter_name)) ++p.missing_name;
        if (is_blank(r.text)) ++p.missing_text;
        if (!seen.insert(pair_key(r)).second) ++p.duplicate_pairs;
    }
    return p;
}

std::vector<CleanComment> clean(const std::vector<RawComment>& rows) {
    std::vector<CleanComment> out;
    std::unordered_set<std::string> seen;
    for (const RawComment& r : rows) {
        if (is_blank(r.commenter_name) || is_blank(r.text)) continue;
        if (!seen.insert(pair_key(r)).second) continue;
        out.push_back(CleanComment{out.size(), *r.commenter_name, *r.text});
    }
    return out;
}

void write_clean_csv(std::ostream& out, const std::vector<CleanComment>& comments) {
    csv::write_row(out, {"id", "name", "text"});
    for (const CleanComment& c : comments) {
        csv::write_row(out, {std::to_string(c.id), c.commenter_name, c.text});
    }
}

std::vector<CleanComment> read_clean_csv(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto id_col = table.column("id");
    auto name_col = table.column("name");
    auto text_col = table.column("text");
    if (!id_col || !name_col || !text_col) {
        throw DataError("not a canonical comments CSV (need id,name,text): " + path);
    }
    std::vector<CleanComment> out;
    out.reserve(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::string& id_cell = table.cell(i, *id_col);
        std::size_t id = 0;
        auto [ptr, ec] = std::from_chars(id_cell.data(), id_cell.data() + id_cell.size(), id);
        if (ec != std::errc{} || ptr != id_cell.data() + id_cell.size()) {
            throw DataError("bad id '" + id_cell + "' in " + path);
        }
        out.push_back(CleanComment{id, table.cell(i, *name_col), table.cell(i, *text_col)});
    }
    return out;
}

std::string format_profile(const NullProfile& p) {
    std::ostringstream out;
    out << "rows: " << p.rows << '\n'
        << "missing name: " << p.missing_name << '\n'
        << "missing text: " << p.missing_text << '\n'
        << "duplicate pairs: " << p.duplicate_pairs << '\n';
    return out.str();
}

} // namespace banglish::ingest
