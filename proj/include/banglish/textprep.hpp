#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace banglish::text {

// Token with half-open [begin, end) byte offsets into the source string.
// Source slicing at the offsets reproduces the token text exactly.
struct Token {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Token&) const = default;
};

struct TokenizedComment {
    long comment_id = 0;
    std::string text;
    std::vector<Token> tokens;
};

// Splits on whitespace, then strips .,!?;:()[]"' from token edges. A token
// that is all punctuation is dropped. Offsets point at the stripped token.
std::vector<Token> word_tokenize(std::string_view s);

TokenizedComment tokenize_comment(long comment_id, std::string_view s);

// ASCII-only case fold; non-ASCII bytes pass through, so UTF-8 stays intact.
std::string normalize_case(std::string_view s);

bool is_edge_punct(char c);

} // namespace banglish::text
