#include "patlake/tokenize.hpp"

namespace patlake {

const char* to_string(TokenKind kind) {
    switch (kind) {
        case TokenKind::Letter: return "letter";
        case TokenKind::Digit: return "digit";
        case TokenKind::Space: return "space";
        case TokenKind::Symbol: return "symbol";
    }
    return "?";
}

std::u32string decode_utf8(std::string_view text) {
    std::u32string out;
    out.reserve(text.size());
    std::size_t i = 0;
    auto raw = [&](unsigned char b) { out.push_back(char32_t(0xDC00u | b)); ++i; };
    while (i < text.size()) {
        auto b0 = static_cast<unsigned char>(text[i]);
        if (b0 < 0x80) {
            out.push_back(b0);
            ++i;
            continue;
        }
        int len = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; min = 0x80; }
        else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; min = 0x800; }
        else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; min = 0x10000; }
        if (len == 0 || i + len > text.size()) {
            raw(b0);
            continue;
        }
        bool ok = true;
        for (int k = 1; k < len; ++k) {
            auto b = static_cast<unsigned char>(text[i + k]);
            if ((b & 0xC0) != 0x80) { ok = false; break; }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            raw(b0);
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

std::string encode_utf8(std::u32string_view chars) {
    std::string out;
    out.reserve(chars.size());
    for (char32_t cp : chars) {
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp >= 0xDC80 && cp <= 0xDCFF) {
            out.push_back(static_cast<char>(cp & 0xFF));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    }
    return out;
}

TokenKind kind_of(char32_t cp) {
    if (cp >= '0' && cp <= '9') return TokenKind::Digit;
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return TokenKind::Letter;
    if (cp == ' ') return TokenKind::Space;
    return TokenKind::Symbol;
}

std::vector<Token> tokenize(std::string_view value) {
    std::vector<Token> tokens;
    std::u32string chars = decode_utf8(value);
    std::size_t i = 0;
    while (i < chars.size()) {
        TokenKind kind = kind_of(chars[i]);
        std::size_t j = i + 1;
        if (kind != TokenKind::Symbol)
            while (j < chars.size() && kind_of(chars[j]) == kind) ++j;
        std::u32string run = chars.substr(i, j - i);
        tokens.push_back(Token{kind, encode_utf8(run), std::move(run)});
        i = j;
    }
    return tokens;
}

std::size_t token_count(std::string_view value) {
    std::size_t count = 0;
    std::u32string chars = decode_utf8(value);
    for (std::size_t i = 0; i < chars.size(); ++i) {
        TokenKind kind = kind_of(chars[i]);
        if (kind == TokenKind::Symbol || i == 0 || kind_of(chars[i - 1]) != kind) ++count;
    }
    return count;
}

}  // namespace patlake
