#include "banglish/textprep.hpp"

#include <cctype>

namespace banglish::text {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

} // namespace

bool is_edge_punct(char c) {
    switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '(': case ')': case '[': case ']': case '"': case '\'':
        return true;
    default:
        return false;
    }
}

std::vector<Token> word_tokenize(std::string_view s) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n) {
        while (i < n && is_space(s[i])) ++i;
        if (i >= n) break;
        std::size_t begin = i;
        while (i < n && !is_space(s[i])) ++i;
        std::size_t end = i;
        while (begin < end && is_edge_punct(s[begin])) ++begin;
        while (end > begin && is_edge_punct(s[end - 1])) --end;
        if (begin < end) {
            tokens.push_back(Token{std::string(s.substr(begin, end - begin)), begin, end});
        }
    }
    return tokens;
}

TokenizedComment tokenize_comment(long comment_id, std::string_view s) {
    TokenizedComment out;
    out.comment_id = comment_id;
    out.text = std::string(s);
    out.tokens = word_tokenize(s);
    return out;
}

std::string normalize_case(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

} // namespace banglish::text
