#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace banglish::gender {

enum class Gender { Male, Female, Unknown };

std::string_view to_string(Gender g);

// First-name -> gender map, keyed by case-folded single tokens. Keys may be
// romanized or native script.
class NameGenderLexicon {
public:
    static NameGenderLexicon load(const std::string& path); // CSV name,gender
    void add(std::string_view name, Gender g);
    std::optional<Gender> lookup(std::string_view folded_name) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, Gender> entries_;
};

// Romanized name -> native-script text. Implementations may throw; the
// gender pipeline treats any throw as a miss.
class TransliterationClient {
public:
    virtual ~TransliterationClient() = default;
    // Empty result means the backend has no answer.
    virtual std::string transliterate(const std::string& romanized) = 0;
};

// Offline lookup-table backend (the default).
class TableTransliterator : public TransliterationClient {
public:
    static TableTransliterator load(const std::string& path); // CSV romanized,native
    void add(std::string_view romanized, std::string_view native);
    std::string transliterate(const std::string& romanized) override;
    std::size_t size() const { return table_.size(); }

private:
    std::unordered_map<std::string, std::string> table_;
};

// HTTP backend: POST {"text": "..."} -> {"translated": "..."}. Calls are
// internally serialized; failures surface as exceptions.
class HttpTransliterator : public TransliterationClient {
public:
    HttpTransliterator(std::string endpoint, int timeout_ms);
    ~HttpTransliterator() override;
    std::string transliterate(const std::string& romanized) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Removes leading honorific tokens (md, mohammad, phd, dr, mrs, miss, engr,
// mr, mst; case-insensitive, optional trailing period), repeating until the
// first token is not an honorific. Result is trimmed; honorific-only names
// come back empty.
std::string strip_honorifics(std::string_view full_name);

// First whitespace token after honorific stripping; empty when none remains.
std::string first_name(std::string_view full_name);

// strip_honorifics -> first_name -> case-fold -> lexicon lookup; on miss,
// transliterate (client may be null) and look up the native key; on miss,
// Unknown. Never throws.
Gender predict_gender(std::string_view full_name,
                      const NameGenderLexicon& lexicon,
                      TransliterationClient* client);

} // namespace banglish::gender
