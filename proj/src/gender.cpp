#include "banglish/gender.hpp"

#include <array>
#include <cctype>
#include <mutex>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "banglish/csv.hpp"
#include "banglish/errors.hpp"
#include "banglish/textprep.hpp"

namespace banglish::gender {

namespace {

constexpr std::array<std::string_view, 9> kHonorifics = {
    "md", "mohammad", "phd", "dr", "mrs", "miss", "engr", "mr", "mst"};

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

bool is_honorific(std::string_view token) {
    if (!token.empty() && token.back() == '.') token.remove_suffix(1);
    if (token.empty()) return false;
    std::string folded = text::normalize_case(token);
    for (std::string_view h : kHonorifics) {
        if (folded == h) return true;
    }
    return false;
}

} // namespace

std::string_view to_string(Gender g) {
    switch (g) {
    case Gender::Male: return "male";
    case Gender::Female: return "female";
    default: return "unknown";
    }
}

NameGenderLexicon NameGenderLexicon::load(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto name_col = table.column("name");
    auto gender_col = table.column("gender");
    if (!name_col || !gender_col) {
        throw DataError("missing column 'name' or 'gender' in lexicon file: " + path);
    }
    NameGenderLexicon lex;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const std::string& name = table.cell(i, *name_col);
        const std::string& g = table.cell(i, *gender_col);
        if (name.empty()) continue;
        if (g == "male") {
            lex.add(name, Gender::Male);
        } else if (g == "female") {
            lex.add(name, Gender::Female);
        } else {
            throw DataError("bad gender value '" + g + "' in " + path);
        }
    }
    return lex;
}

void NameGenderLexicon::add(std::string_view name, Gender g) {
    entries_[text::normalize_case(trim(name))] = g;
}

std::optional<Gender> NameGenderLexicon::lookup(std::string_view folded_name) const {
    auto it = entries_.find(std::string(folded_name));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

TableTransliterator TableTransliterator::load(const std::string& path) {
    csv::Table table = csv::read_file(path);
    auto rom_col = table.column("romanized");
    auto nat_col = table.column("native");
    if (!rom_col || !nat_col) {
        throw DataError("missing column 'romanized' or 'native' in table: " + path);
    }
    TableTransliterator t;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        t.add(table.cell(i, *rom_col), table.cell(i, *nat_col));
    }
    return t;
}

void TableTransliterator::add(std::string_view romanized, std::string_view native) {
    table_[text::normalize_case(trim(romanized))] = std::string(native);
}

std::string TableTransliterator::transliterate(const std::string& romanized) {
    auto it = table_.find(text::normalize_case(trim(romanized)));
    return it == table_.end() ? std::string() : it->second;
}

namespace {

struct Endpoint {
    std::string host;
    int port = 80;
    std::string path = "/";
};

// Accepts http://host:port/path; anything else is a config error.
Endpoint parse_endpoint(const std::string& endpoint) {
    const std::string scheme = "http://";
    if (endpoint.rfind(scheme, 0) != 0) {
        throw ConfigError("transliteration endpoint must start with http://: " + endpoint);
    }
    Endpoint out;
    std::string rest = endpoint.substr(scheme.size());
    std::size_t slash = rest.find('/');
    std::string hostport = slash == std::string::npos ? rest : rest.substr(0, slash);
    out.path = slash == std::string::npos ? "/" : rest.substr(slash);
    std::size_t colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        out.host = hostport;
    } else {
        out.host = hostport.substr(0, colon);
        try {
            out.port = std::stoi(hostport.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad port in transliteration endpoint: " + endpoint);
        }
    }
    if (out.host.empty()) {
        throw ConfigError("missing host in transliteration endpoint: " + endpoint);
    }
    return out;
}

} // namespace

struct HttpTransliterator::Impl {
    Endpoint endpoint;
    int timeout_ms = 1000;
    std::mutex mutex;
};

HttpTransliterator::HttpTransliterator(std::string endpoint, int timeout_ms)
    : impl_(std::make_unique<Impl>()) {
    impl_->endpoint = parse_endpoint(endpoint);
    impl_->timeout_ms = timeout_ms;
}

HttpTransliterator::~HttpTransliterator() = default;

std::string HttpTransliterator::transliterate(const std::string& romanized) {
    std::lock_guard<std::mutex> lock(impl_->mutex);
    httplib::Client client(impl_->endpoint.host, impl_->endpoint.port);
    client.set_connection_timeout(0, impl_->timeout_ms * 1000);
    client.set_read_timeout(0, impl_->timeout_ms * 1000);

    nlohmann::json body = {{"text", romanized}};
    auto res = client.Post(impl_->endpoint.path, body.dump(), "application/json");
    if (!res || res->status != 200) {
        throw InputError("transliteration request failed: " + impl_->endpoint.host +
                         impl_->endpoint.path);
    }
    nlohmann::json reply = nlohmann::json::parse(res->body);
    if (!reply.contains("translated") || !reply["translated"].is_string()) {
        throw DataError("transliteration reply missing 'translated' field");
    }
    return reply["translated"].get<std::string>();
}

std::string strip_honorifics(std::string_view full_name) {
    std::string_view rest = trim(full_name);
    while (!rest.empty()) {
        std::size_t end = 0;
        while (end < rest.size() && !is_space(rest[end])) ++end;
        if (!is_honorific(rest.substr(0, end))) break;
        rest.remove_prefix(end);
        rest = trim(rest);
    }
    return std::string(rest);
}

std::string first_name(std::string_view full_name) {
    std::string stripped = strip_honorifics(full_name);
    std::string_view rest = stripped;
    std::size_t end = 0;
    while (end < rest.size() && !is_space(rest[end])) ++end;
    return std::string(rest.substr(0, end));
}

Gender predict_gender(std::string_view full_name,
                      const NameGenderLexicon& lexicon,
                      TransliterationClient* client) {
    std::string name = first_name(full_name);
    if (name.empty()) return Gender::Unknown;
    std::string key = text::normalize_case(name);
    if (auto g = lexicon.lookup(key)) return *g;
    if (client != nullptr) {
        try {
            std::string native = client->transliterate(key);
            if (!native.empty()) {
                if (auto g = lexicon.lookup(text::normalize_case(native))) return *g;
            }
        } catch (...) {
            // Client failure falls back to the romanized-only result (a miss).
        }
    }
    return Gender::Unknown;
}

} // namespace banglish::gender
