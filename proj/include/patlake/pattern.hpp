#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patlake/hierarchy.hpp"
#include "patlake/tokenize.hpp"

namespace patlake {

/// Limits on per-value pattern enumeration.
struct PatternBudget {
    /// tau: values with token_count(v) >= max_tokens are not enumerated.
    std::size_t max_tokens = 13;
    /// Values whose raw choice product exceeds this are treated like wide values.
    std::uint64_t max_patterns = std::uint64_t{1} << 16;

    friend bool operator==(const PatternBudget&, const PatternBudget&) = default;
};

/// One element of a pattern: literal text, or a run of characters drawn from a class.
///
/// A class atom is a merged run: it accepts exactly `min_len` characters when
/// bounded, or at least `min_len` when unbounded. In text form a bounded run is
/// `<c>{n}` and an unbounded run is `<c>+` followed by `<c>{n-1}` when n > 1.
struct Atom {
    enum class Kind : unsigned char { Literal, Class };

    Kind kind = Kind::Literal;
    ClassId cls = 0;
    std::uint32_t min_len = 0;
    bool unbounded = false;
    std::u32string literal;

    static Atom text(std::u32string chars) { return Atom{Kind::Literal, 0, 0, false, std::move(chars)}; }
    static Atom exact(ClassId c, std::uint32_t n) { return Atom{Kind::Class, c, n, false, {}}; }
    static Atom plus(ClassId c) { return Atom{Kind::Class, c, 1, true, {}}; }

    bool is_literal() const { return kind == Kind::Literal; }

    friend bool operator==(const Atom&, const Atom&) = default;
};

/// A canonical sequence of atoms. Adjacent literals are concatenated and
/// adjacent runs of the same class are merged, so two patterns accepting the
/// same atom-wise language compare equal and format identically.
class Pattern {
public:
    Pattern() = default;
    explicit Pattern(std::vector<Atom> atoms);

    /// `<any>+`, the pattern every non-empty value matches.
    static Pattern trivial(const Hierarchy& h);

    const std::vector<Atom>& atoms() const { return atoms_; }
    bool empty() const { return atoms_.empty(); }
    bool is_trivial(const Hierarchy& h) const;
    /// True if any atom uses the hierarchy root.
    bool uses_root(const Hierarchy& h) const;

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::vector<Atom> atoms_;
};

/// Appends patterns atom-wise and canonicalizes the result.
Pattern concatenate(std::span<const Pattern> parts);

std::string to_text(const Pattern& p, const Hierarchy& h);
/// Appends the text of one atom; a canonical pattern's text is the concatenation.
void append_text(std::string& out, const Atom& a, const Hierarchy& h);

/// Per-token alternatives: the literal token, then (class, exact) and (class, plus)
/// for every non-root class covering the token.
std::vector<std::vector<Atom>> token_choices(std::span<const Token> tokens, const Hierarchy& h);
Pattern parse_pattern(std::string_view text, const Hierarchy& h);

/// Anchored full-value match.
bool matches(const Pattern& p, std::u32string_view chars, const Hierarchy& h);
bool matches(const Pattern& p, std::string_view value, const Hierarchy& h);

/// p in P(v): p is produced by generalizing v's tokens one by one.
/// Stricter than `matches` (e.g. `<alnum>+` matches "a1" but is not in P("a1")).
bool in_pattern_space(const Pattern& p, std::span<const Token> tokens, const Hierarchy& h);
bool in_pattern_space(const Pattern& p, std::string_view value, const Hierarchy& h);

/// Anchored regex accepting the same values as `matches`, in ECMAScript/PCRE syntax.
std::string pattern_to_regex(const Pattern& p, const Hierarchy& h);

/// Number of per-token choice combinations (plus one for the trivial pattern);
/// an upper bound on |P(v)|. Saturates at UINT64_MAX.
std::uint64_t pattern_space_bound(std::span<const Token> tokens, const Hierarchy& h);

/// Whether v is narrow enough to enumerate under `budget`.
bool within_budget(std::span<const Token> tokens, const Hierarchy& h, const PatternBudget& budget);

/// Calls `visit` for each element of P(v), possibly more than once for the same
/// canonical pattern when different token choices collapse. No budget check.
void enumerate_patterns(std::span<const Token> tokens, const Hierarchy& h,
                        const std::function<void(const Pattern&)>& visit);

/// P(v), deduplicated and sorted by text. Throws TokenBudgetExceeded when the
/// value is outside `budget`. The empty value has no patterns.
std::vector<Pattern> generate_patterns(std::string_view value, const Hierarchy& h,
                                       const PatternBudget& budget = {});

}  // namespace patlake
