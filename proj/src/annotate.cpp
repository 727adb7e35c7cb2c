#include "banglish/annotate.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"
#include "banglish/rng.hpp"

namespace banglish::annotate {

using nlohmann::json;

namespace {

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write file: " + path);
    out << content;
    if (!out) throw InputError("cannot write file: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path);
    std::string content((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
    return content;
}

std::string flatten_newlines(std::string text) {
    for (char& c : text) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return text;
}

} // namespace

std::vector<LabeledComment> auto_annotate(const std::vector<ingest::CleanComment>& comments,
                                          const catalog::DeviceCatalog& catalog,
                                          const matcher::MatcherConfig& cfg,
                                          int threads) {
    std::vector<matcher::CommentAnalysis> analyses =
        matcher::process_comments(comments, catalog, cfg, threads);

    std::vector<LabeledComment> out;
    for (std::size_t i = 0; i < comments.size(); ++i) {
        const matcher::CommentAnalysis& a = analyses[i];
        if (a.entities.empty()) continue;
        LabeledComment lc;
        lc.comment = comments[i];
        lc.comment.text = a.correction.corrected_text;
        for (const matcher::EntityMatch& m : a.entities) {
            lc.entities.push_back(EntitySpan{m.begin, m.end, "DEVICE"});
        }
        out.push_back(std::move(lc));
    }
    return out;
}

std::unordered_map<std::size_t, Sentiment> load_labels(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto id_col = table.column("id");
    auto sent_col = table.column("sentiment");
    if (!id_col || !sent_col) {
        throw DataError("missing column 'id' or 'sentiment' in labels file: " + path);
    }
    std::unordered_map<std::size_t, Sentiment> labels;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::string& id_cell = table.cell(i, *id_col);
        std::size_t id = 0;
        auto [ptr, ec] = std::from_chars(id_cell.data(), id_cell.data() + id_cell.size(), id);
        if (ec != std::errc{} || ptr != id_cell.data() + id_cell.size()) {
            throw DataError("bad id '" + id_cell + "' in " + path);
        }
        const std::string& s = table.cell(i, *sent_col);
        if (s == "pos") {
            labels[id] = Sentiment::Positive;
        } else if (s == "neg") {
            labels[id] = Sentiment::Negative;
        } else {
            throw DataError("bad sentiment value '" + s + "' in " + path + " (want pos/neg)");
        }
    }
    return labels;
}

std::size_t merge_labels(std::vector<LabeledComment>& data,
                         const std::unordered_map<std::size_t, Sentiment>& labels) {
    std::size_t matched = 0;
    for (LabeledComment& lc : data) {
        auto it = labels.find(lc.comment.id);
        if (it != labels.end()) {
            lc.sentiment = it->second;
            ++matched;
        }
    }
    return matched;
}

std::pair<std::vector<LabeledComment>, std::vector<LabeledComment>>
split(std::vector<LabeledComment> data, const SplitConfig& cfg) {
    if (data.size() < 2) throw DataError("split needs at least 2 items");
    std::mt19937_64 gen(cfg.seed);
    rng::shuffle(data, gen);
    std::size_t train_size =
        static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(data.size())));
    std::vector<LabeledComment> train(data.begin(), data.begin() + static_cast<long>(train_size));
    std::vector<LabeledComment> test(data.begin() + static_cast<long>(train_size), data.end());
    return {std::move(train), std::move(test)};
}

namespace {

json entities_to_json(const std::vector<EntitySpan>& entities) {
    json arr = json::array();
    for (const EntitySpan& e : entities) {
        arr.push_back(json::array({e.begin, e.end, e.label}));
    }
    return arr;
}

std::vector<EntitySpan> entities_from_json(const json& arr, const std::string& origin) {
    std::vector<EntitySpan> out;
    for (const json& item : arr) {
        if (!item.is_array() || item.size() != 3) {
            throw DataError("bad entity triple in " + origin);
        }
        out.push_back(EntitySpan{item[0].get<std::size_t>(), item[1].get<std::size_t>(),
                                 item[2].get<std::string>()});
    }
    return out;
}

} // namespace

void export_offset_json(const std::vector<LabeledComment>& data, const std::string& path) {
    json arr = json::array();
    for (const LabeledComment& lc : data) {
        arr.push_back({{"text", lc.comment.text}, {"entities", entities_to_json(lc.entities)}});
    }
    write_text_file(path, arr.dump(2) + "\n");
}

std::vector<OffsetDoc> import_offset_json(const std::string& path) {
    json arr;
    try {
        arr = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw DataError("bad JSON in " + path + ": " + e.what());
    }
    if (!arr.is_array()) throw DataError("expected a JSON array in " + path);
    std::vector<OffsetDoc> out;
    for (const json& item : arr) {
        OffsetDoc doc;
        doc.text = item.at("text").get<std::string>();
        doc.entities = entities_from_json(item.at("entities"), path);
        out.push_back(std::move(doc));
    }
    return out;
}

void export_lines_and_offsets(const std::vector<LabeledComment>& data,
                              const std::string& text_path,
                              const std::string& csv_path) {
    std::string lines;
    std::ostringstream csv_out;
    csv::write_row(csv_out, {"File", "Line", "Begin Offset", "End Offset", "Type"});
    const std::string file_name = std::filesystem::path(text_path).filename().string();
    for (std::size_t line = 0; line < data.size(); ++line) {
        const LabeledComment& lc = data[line];
        lines += flatten_newlines(lc.comment.text);
        lines += '\n';
        for (const EntitySpan& e : lc.entities) {
            csv::write_row(csv_out, {file_name, std::to_string(line), std::to_string(e.begin),
                                     std::to_string(e.end), e.label});
        }
    }
    write_text_file(text_path, lines);
    write_text_file(csv_path, csv_out.str());
}

void save_split_json(const std::vector<LabeledComment>& data, const std::string& path) {
    json arr = json::array();
    for (const LabeledComment& lc : data) {
        json item = {{"id", lc.comment.id},
                     {"name", lc.comment.commenter_name},
                     {"text", lc.comment.text},
                     {"entities", entities_to_json(lc.entities)}};
        if (lc.sentiment) {
            item["sentiment"] = *lc.sentiment == Sentiment::Positive ? "pos" : "neg";
        }
        arr.push_back(std::move(item));
    }
    write_text_file(path, arr.dump(2) + "\n");
}

std::vector<LabeledComment> load_split_json(const std::string& path) {
    json arr;
    try {
        arr = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw DataError("bad JSON in " + path + ": " + e.what());
    }
    if (!arr.is_array()) throw DataError("expected a JSON array in " + path);
    std::vector<LabeledComment> out;
    for (const json& item : arr) {
        LabeledComment lc;
        lc.comment.id = item.at("id").get<std::size_t>();
        lc.comment.commenter_name = item.value("name", std::string());
        lc.comment.text = item.at("text").get<std::string>();
        lc.entities = entities_from_json(item.at("entities"), path);
        if (item.contains("sentiment")) {
            std::string s = item["sentiment"].get<std::string>();
            if (s == "pos") {
                lc.sentiment = Sentiment::Positive;
            } else if (s == "neg") {
                lc.sentiment = Sentiment::Negative;
            } else {
                throw DataError("bad sentiment value '" + s + "' in " + path);
            }
        }
        out.push_back(std::move(lc));
    }
    return out;
}

} // namespace banglish::annotate
