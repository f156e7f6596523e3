#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace patlake {

enum class TokenKind : unsigned char { Letter, Digit, Space, Symbol };

const char* to_string(TokenKind kind);

/// A coarse lexer token: a maximal letter/digit/space run or one symbol character.
struct Token {
    TokenKind kind;
    std::string text;     // UTF-8 bytes as they appear in the value
    std::u32string chars; // decoded code points

    friend bool operator==(const Token&, const Token&) = default;
};

/// Decodes UTF-8. An invalid byte b maps to the code point 0xDC00 | b so that
/// encode_utf8 restores the original bytes.
std::u32string decode_utf8(std::string_view text);
std::string encode_utf8(std::u32string_view chars);

TokenKind kind_of(char32_t cp);

std::vector<Token> tokenize(std::string_view value);

/// t(v): number of tokens, whitespace runs included.
std::size_t token_count(std::string_view value);

}  // namespace patlake
