#include "patlake/pattern.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <unordered_map>

#include "patlake/error.hpp"

namespace patlake {

namespace {

bool is_escaped_char(char32_t cp) {
    return cp == '<' || cp == '>' || cp == '{' || cp == '}' || cp == '+' || cp == '\\';
}

void append_hex_byte(std::string& out, unsigned b) {
    static const char* digits = "0123456789abcdef";
    out += "\\x";
    out += digits[(b >> 4) & 15];
    out += digits[b & 15];
}

std::vector<Atom> canonicalize(std::vector<Atom> in) {
    std::vector<Atom> out;
    out.reserve(in.size());
    for (auto& a : in) {
        if (a.is_literal()) {
            if (a.literal.empty()) continue;
            if (!out.empty() && out.back().is_literal()) out.back().literal += a.literal;
            else out.push_back(std::move(a));
        } else {
            if (a.min_len == 0) throw Error(ErrorCode::InvalidPattern, "class atom with zero length");
            a.literal.clear();
            if (!out.empty() && !out.back().is_literal() && out.back().cls == a.cls) {
                out.back().min_len += a.min_len;
                out.back().unbounded = out.back().unbounded || a.unbounded;
            } else {
                out.push_back(std::move(a));
            }
        }
    }
    return out;
}

// run[i] = number of consecutive members of `cls` starting at chars[i].
std::vector<std::uint32_t> class_runs(std::u32string_view chars, ClassId cls, const Hierarchy& h) {
    std::vector<std::uint32_t> run(chars.size() + 1, 0);
    for (std::size_t i = chars.size(); i-- > 0;)
        run[i] = h.contains(cls, chars[i]) ? run[i + 1] + 1 : 0;
    return run;
}

}  // namespace

Pattern::Pattern(std::vector<Atom> atoms) : atoms_(canonicalize(std::move(atoms))) {}

Pattern Pattern::trivial(const Hierarchy& h) { return Pattern({Atom::plus(h.root())}); }

std::vector<std::vector<Atom>> token_choices(std::span<const Token> tokens, const Hierarchy& h) {
    std::vector<std::vector<Atom>> choices;
    choices.reserve(tokens.size());
    for (const auto& tok : tokens) {
        std::vector<Atom> opts;
        opts.push_back(Atom::text(tok.chars));
        for (ClassId c : h.covering_classes(tok.chars)) {
            opts.push_back(Atom::exact(c, static_cast<std::uint32_t>(tok.chars.size())));
            opts.push_back(Atom::plus(c));
        }
        choices.push_back(std::move(opts));
    }
    return choices;
}


bool Pattern::is_trivial(const Hierarchy& h) const {
    return atoms_.size() == 1 && !atoms_[0].is_literal() && atoms_[0].cls == h.root() &&
           atoms_[0].unbounded && atoms_[0].min_len == 1;
}

bool Pattern::uses_root(const Hierarchy& h) const {
    return std::any_of(atoms_.begin(), atoms_.end(),
                       [&](const Atom& a) { return !a.is_literal() && a.cls == h.root(); });
}

Pattern concatenate(std::span<const Pattern> parts) {
    std::vector<Atom> atoms;
    for (const auto& p : parts) atoms.insert(atoms.end(), p.atoms().begin(), p.atoms().end());
    return Pattern(std::move(atoms));
}

void append_text(std::string& out, const Atom& a, const Hierarchy& h) {
    if (a.is_literal()) {
        for (char32_t cp : a.literal) {
            if (is_escaped_char(cp)) {
                out += '\\';
                out += static_cast<char>(cp);
            } else if (cp < 0x20 || cp == 0x7f) {
                append_hex_byte(out, static_cast<unsigned>(cp));
            } else if (cp >= 0xDC80 && cp <= 0xDCFF) {
                append_hex_byte(out, static_cast<unsigned>(cp & 0xFF));
            } else {
                out += encode_utf8(std::u32string_view(&cp, 1));
            }
        }
        return;
    }
    const std::string& name = h.at(a.cls).name;
    auto tag = [&] {
        out += '<';
        out += name;
        out += '>';
    };
    tag();
    if (a.unbounded) {
        out += '+';
        if (a.min_len == 1) return;
        tag();
        out += '{';
        out += std::to_string(a.min_len - 1);
    } else {
        out += '{';
        out += std::to_string(a.min_len);
    }
    out += '}';
}

std::string to_text(const Pattern& p, const Hierarchy& h) {
    std::string out;
    for (const auto& a : p.atoms()) append_text(out, a, h);
    return out;
}

Pattern parse_pattern(std::string_view text, const Hierarchy& h) {
    auto fail = [&](const std::string& why) -> Error {
        return Error(ErrorCode::InvalidPattern, "invalid pattern '" + std::string(text) + "': " + why);
    };
    std::vector<Atom> atoms;
    std::string pending;  // raw UTF-8 literal bytes not yet decoded
    auto flush = [&] {
        if (!pending.empty()) {
            atoms.push_back(Atom::text(decode_utf8(pending)));
            pending.clear();
        }
    };
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\\') {
            if (i + 1 >= text.size()) throw fail("dangling escape");
            char e = text[i + 1];
            if (e == 'x') {
                if (i + 4 > text.size()) throw fail("short \\x escape");
                unsigned v = 0;
                for (std::size_t k = i + 2; k < i + 4; ++k) {
                    char d = text[k];
                    v <<= 4;
                    if (d >= '0' && d <= '9') v |= unsigned(d - '0');
                    else if (d >= 'a' && d <= 'f') v |= unsigned(d - 'a' + 10);
                    else if (d >= 'A' && d <= 'F') v |= unsigned(d - 'A' + 10);
                    else throw fail("bad \\x escape");
                }
                flush();
                atoms.push_back(Atom::text(std::u32string(1, v < 0x80 ? char32_t(v) : char32_t(0xDC00 | v))));
                i += 4;
            } else if (is_escaped_char(static_cast<unsigned char>(e))) {
                pending += e;
                i += 2;
            } else {
                throw fail(std::string("unknown escape \\") + e);
            }
        } else if (c == '<') {
            auto close = text.find('>', i);
            if (close == std::string_view::npos) throw fail("unterminated class");
            auto name = text.substr(i + 1, close - i - 1);
            auto cls = h.find(name);
            if (!cls) throw fail("unknown class <" + std::string(name) + ">");
            i = close + 1;
            if (i >= text.size()) throw fail("class without quantifier");
            flush();
            if (text[i] == '+') {
                atoms.push_back(Atom::plus(*cls));
                ++i;
            } else if (text[i] == '{') {
                auto end = text.find('}', i);
                if (end == std::string_view::npos || end == i + 1) throw fail("bad quantifier");
                std::uint64_t n = 0;
                for (std::size_t k = i + 1; k < end; ++k) {
                    if (text[k] < '0' || text[k] > '9') throw fail("bad quantifier");
                    n = n * 10 + std::uint64_t(text[k] - '0');
                    if (n > std::numeric_limits<std::uint32_t>::max()) throw fail("quantifier too large");
                }
                if (n == 0) throw fail("quantifier {0}");
                atoms.push_back(Atom::exact(*cls, static_cast<std::uint32_t>(n)));
                i = end + 1;
            } else {
                throw fail("class without quantifier");
            }
        } else if (c == '>' || c == '{' || c == '}' || c == '+') {
            throw fail(std::string("unescaped '") + c + "'");
        } else {
            pending += c;
            ++i;
        }
    }
    flush();
    return Pattern(std::move(atoms));
}

bool matches(const Pattern& p, std::u32string_view chars, const Hierarchy& h) {
    const std::size_t n = chars.size();
    std::vector<char> reach(n + 1, 0), next(n + 1, 0);
    reach[0] = 1;
    for (const auto& a : p.atoms()) {
        std::fill(next.begin(), next.end(), 0);
        bool any = false;
        if (a.is_literal()) {
            const std::size_t len = a.literal.size();
            for (std::size_t pos = 0; pos + len <= n; ++pos) {
                if (reach[pos] && chars.compare(pos, len, a.literal) == 0) {
                    next[pos + len] = 1;
                    any = true;
                }
            }
        } else {
            auto run = class_runs(chars, a.cls, h);
            std::size_t filled = 0;  // next[0, filled) already settled for unbounded spans
            for (std::size_t pos = 0; pos <= n; ++pos) {
                if (!reach[pos] || run[pos] < a.min_len) continue;
                if (!a.unbounded) {
                    next[pos + a.min_len] = 1;
                    any = true;
                    continue;
                }
                std::size_t from = std::max<std::size_t>(pos + a.min_len, filled);
                std::size_t to = pos + run[pos];
                for (std::size_t q = from; q <= to; ++q) next[q] = 1;
                if (from <= to) any = true;
                filled = std::max(filled, to + 1);
            }
        }
        if (!any) return false;
        reach.swap(next);
    }
    return reach[n] != 0;
}

bool matches(const Pattern& p, std::string_view value, const Hierarchy& h) {
    return matches(p, std::u32string_view(decode_utf8(value)), h);
}

bool in_pattern_space(const Pattern& p, std::span<const Token> tokens, const Hierarchy& h) {
    if (tokens.empty() || p.empty()) return false;
    if (p.uses_root(h)) return p.is_trivial(h);

    const auto& atoms = p.atoms();
    const std::size_t k = tokens.size();
    // reach[j * (k + 1) + i]: atoms [0, j) are produced exactly by tokens [0, i).
    std::vector<char> reach((atoms.size() + 1) * (k + 1), 0);
    auto at = [&](std::size_t j, std::size_t i) -> char& { return reach[j * (k + 1) + i]; };
    at(0, 0) = 1;

    std::map<ClassId, std::vector<char>> covered;
    auto covers = [&](ClassId c, std::size_t i) {
        auto [it, fresh] = covered.try_emplace(c);
        if (fresh) {
            it->second.resize(k);
            for (std::size_t t = 0; t < k; ++t) {
                const auto& chars = tokens[t].chars;
                it->second[t] = std::all_of(chars.begin(), chars.end(),
                                            [&](char32_t cp) { return h.contains(c, cp); });
            }
        }
        return it->second[i] != 0;
    };

    for (std::size_t j = 0; j < atoms.size(); ++j) {
        const Atom& a = atoms[j];
        for (std::size_t i = 0; i < k; ++i) {
            if (!at(j, i)) continue;
            if (a.is_literal()) {
                std::size_t pos = 0;
                for (std::size_t t = i; t < k; ++t) {
                    const auto& chars = tokens[t].chars;
                    if (pos + chars.size() > a.literal.size() ||
                        a.literal.compare(pos, chars.size(), chars) != 0)
                        break;
                    pos += chars.size();
                    if (pos == a.literal.size()) {
                        at(j + 1, t + 1) = 1;
                        break;
                    }
                }
                continue;
            }
            // Each token of the block contributes its length (exact) or 1 (plus).
            std::uint64_t total = 0;
            std::vector<char> any_sums{1};       // reductions reachable by any subset
            std::vector<char> nonempty_sums{0};  // reductions reachable by a non-empty subset
            for (std::size_t t = i; t < k; ++t) {
                if (!covers(a.cls, t)) break;
                const std::size_t len = tokens[t].chars.size();
                total += len;
                if (!a.unbounded) {
                    if (total == a.min_len) at(j + 1, t + 1) = 1;
                    if (total >= a.min_len) break;
                    continue;
                }
                const std::size_t d = len - 1;
                std::vector<char> any2(any_sums.size() + d, 0), ne2(any_sums.size() + d, 0);
                for (std::size_t s = 0; s < any_sums.size(); ++s) {
                    if (any_sums[s]) { any2[s] = 1; any2[s + d] = 1; ne2[s + d] = 1; }
                    if (s < nonempty_sums.size() && nonempty_sums[s]) ne2[s] = 1;
                }
                any_sums.swap(any2);
                nonempty_sums.swap(ne2);
                if (total >= a.min_len) {
                    const std::uint64_t need = total - a.min_len;
                    if (need < nonempty_sums.size() && nonempty_sums[need]) at(j + 1, t + 1) = 1;
                }
                // Minimum reachable length is the block size; stop once it overshoots.
                if (t - i + 1 > a.min_len) break;
            }
        }
    }
    return at(atoms.size(), k) != 0;
}

bool in_pattern_space(const Pattern& p, std::string_view value, const Hierarchy& h) {
    auto tokens = tokenize(value);
    return in_pattern_space(p, tokens, h);
}

std::string pattern_to_regex(const Pattern& p, const Hierarchy& h) {
    auto bracket_char = [](std::string& out, unsigned c) {
        if (c < 0x20 || c == 0x7f) {
            append_hex_byte(out, c);
        } else {
            if (c == '\\' || c == ']' || c == '[' || c == '^' || c == '-') out += '\\';
            out += static_cast<char>(c);
        }
    };
    auto class_expr = [&](ClassId id) {
        const auto& node = h.at(id);
        if (id == h.root()) return std::string(".");
        // A class with non-ASCII members is rendered as the complement of its ASCII non-members.
        std::bitset<128> set = node.non_ascii ? ~node.ascii : node.ascii;
        std::string out = node.non_ascii ? "[^" : "[";
        unsigned c = 0;
        while (c < 128) {
            if (!set.test(c)) { ++c; continue; }
            unsigned end = c;
            while (end + 1 < 128 && set.test(end + 1)) ++end;
            bracket_char(out, c);
            if (end > c + 1) out += '-';
            if (end > c) bracket_char(out, end);
            c = end + 1;
        }
        out += ']';
        return out;
    };
    std::string out = "^";
    for (const auto& a : p.atoms()) {
        if (a.is_literal()) {
            for (char32_t cp : a.literal) {
                if (cp < 0x20 || cp == 0x7f) append_hex_byte(out, static_cast<unsigned>(cp));
                else if (cp >= 0xDC80 && cp <= 0xDCFF) append_hex_byte(out, static_cast<unsigned>(cp & 0xFF));
                else if (cp < 0x80 && kind_of(cp) == TokenKind::Symbol) {
                    out += '\\';
                    out += static_cast<char>(cp);
                } else {
                    out += encode_utf8(std::u32string_view(&cp, 1));
                }
            }
            continue;
        }
        out += class_expr(a.cls);
        if (!a.unbounded) out += "{" + std::to_string(a.min_len) + "}";
        else if (a.min_len == 1) out += "+";
        else out += "{" + std::to_string(a.min_len) + ",}";
    }
    out += "$";
    return out;
}

std::uint64_t pattern_space_bound(std::span<const Token> tokens, const Hierarchy& h) {
    if (tokens.empty()) return 0;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t product = 1;
    for (const auto& tok : tokens) {
        const std::uint64_t choices = 1 + 2 * h.covering_classes(tok.chars).size();
        if (product > (kMax - 1) / choices) return kMax;
        product *= choices;
    }
    return product + 1;
}

bool within_budget(std::span<const Token> tokens, const Hierarchy& h, const PatternBudget& budget) {
    if (tokens.size() >= budget.max_tokens) return false;
    const std::uint64_t bound = pattern_space_bound(tokens, h);
    return bound == 0 || bound - 1 <= budget.max_patterns;
}

void enumerate_patterns(std::span<const Token> tokens, const Hierarchy& h,
                        const std::function<void(const Pattern&)>& visit) {
    if (tokens.empty()) return;
    const auto choices = token_choices(tokens, h);
    std::vector<std::size_t> idx(choices.size(), 0);
    std::vector<Atom> atoms(choices.size());
    while (true) {
        for (std::size_t t = 0; t < choices.size(); ++t) atoms[t] = choices[t][idx[t]];
        visit(Pattern(atoms));
        std::size_t t = choices.size();
        while (t > 0) {
            --t;
            if (++idx[t] < choices[t].size()) break;
            idx[t] = 0;
            if (t == 0) {
                visit(Pattern::trivial(h));
                return;
            }
        }
    }
}

std::vector<Pattern> generate_patterns(std::string_view value, const Hierarchy& h, const PatternBudget& budget) {
    auto tokens = tokenize(value);
    if (!within_budget(tokens, h, budget))
        throw Error(ErrorCode::TokenBudgetExceeded,
                    "value has " + std::to_string(tokens.size()) + " tokens / " +
                        std::to_string(pattern_space_bound(tokens, h)) + " pattern choices, beyond budget");
    std::unordered_map<std::string, Pattern> unique;
    enumerate_patterns(tokens, h, [&](const Pattern& p) { unique.try_emplace(to_text(p, h), p); });
    std::vector<std::pair<std::string, Pattern>> sorted(unique.begin(), unique.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Pattern> out;
    out.reserve(sorted.size());
    for (auto& [text, p] : sorted) out.push_back(std::move(p));
    return out;
}

}  // namespace patlake
