#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patlake/pattern.hpp"

namespace patlake::detail {

/// Canonical patterns of several values stored by shared atom prefix, so that
/// generating P(v) and matching many patterns against one value share work.
class PatternTrie {
public:
    explicit PatternTrie(const Hierarchy& h);

    /// Inserts P(v) without the trivial pattern.
    void add_value(std::span<const Token> tokens);

    std::size_t pattern_count() const { return terminals_.size(); }
    const std::string& text(std::size_t id) const { return nodes_[terminals_[id]].text; }
    Pattern pattern(std::size_t id) const;

    /// Calls hit(id) once for every stored pattern that matches `chars`.
    template <class F>
    void match(std::u32string_view chars, F&& hit) const {
        MatchState st(*this, chars);
        walk(st, 0, 0, [&](std::uint32_t id) { hit(static_cast<std::size_t>(id)); });
    }

private:
    static constexpr std::uint32_t kNone = UINT32_MAX;

    struct Node {
        Atom atom;
        std::uint32_t parent = kNone;
        std::uint32_t terminal = kNone;
        std::uint32_t depth = 0;
        std::string text;
        std::vector<std::uint32_t> children;
    };

    struct MatchState {
        MatchState(const PatternTrie& t, std::u32string_view c);
        const std::vector<std::uint32_t>& runs(ClassId cls);

        const PatternTrie& trie;
        std::u32string_view chars;
        std::size_t words;
        std::vector<std::vector<std::uint64_t>> sets;  // reachable end positions per depth
        std::vector<std::vector<std::uint32_t>> run_cache;
        std::vector<char> run_ready;
    };

    std::uint32_t child(std::uint32_t node, const Atom& a);
    void insert(std::span<const std::vector<Atom>> choices, std::size_t t, std::uint32_t node, const Atom* pending);
    bool step(MatchState& st, const Atom& a, const std::vector<std::uint64_t>& from, std::vector<std::uint64_t>& to) const;

    template <class F>
    void walk(MatchState& st, std::uint32_t node, std::uint32_t depth, F&& hit) const {
        if (st.sets.size() <= depth + 1) st.sets.resize(depth + 2, std::vector<std::uint64_t>(st.words));
        const std::size_t n = st.chars.size();
        for (std::uint32_t c : nodes_[node].children) {
            const Node& ch = nodes_[c];
            if (!step(st, ch.atom, st.sets[depth], st.sets[depth + 1])) continue;
            if (ch.terminal != kNone && (st.sets[depth + 1][n / 64] >> (n % 64) & 1)) hit(ch.terminal);
            if (!ch.children.empty()) walk(st, c, depth + 1, hit);
        }
    }

    const Hierarchy& h_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> terminals_;
};

}  // namespace patlake::detail
