#include "pattern_trie.hpp"

#include <algorithm>

namespace patlake::detail {

namespace {

bool mergeable(const Atom& a, const Atom& b) {
    if (a.is_literal() != b.is_literal()) return false;
    return a.is_literal() || a.cls == b.cls;
}

Atom merged(const Atom& a, const Atom& b) {
    Atom out = a;
    if (a.is_literal()) {
        out.literal += b.literal;
    } else {
        out.min_len += b.min_len;
        out.unbounded = a.unbounded || b.unbounded;
    }
    return out;
}

}  // namespace

PatternTrie::PatternTrie(const Hierarchy& h) : h_(h) { nodes_.emplace_back(); }

Pattern PatternTrie::pattern(std::size_t id) const {
    std::vector<Atom> atoms;
    for (std::uint32_t n = terminals_[id]; n != 0; n = nodes_[n].parent) atoms.push_back(nodes_[n].atom);
    std::reverse(atoms.begin(), atoms.end());
    return Pattern(std::move(atoms));
}

std::uint32_t PatternTrie::child(std::uint32_t node, const Atom& a) {
    for (std::uint32_t c : nodes_[node].children)
        if (nodes_[c].atom == a) return c;
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    Node n;
    n.atom = a;
    n.parent = node;
    n.depth = nodes_[node].depth + 1;
    n.text = nodes_[node].text;
    append_text(n.text, a, h_);
    nodes_.push_back(std::move(n));
    nodes_[node].children.push_back(id);
    return id;
}

void PatternTrie::insert(std::span<const std::vector<Atom>> choices, std::size_t t, std::uint32_t node,
                         const Atom* pending) {
    if (t == choices.size()) {
        const std::uint32_t leaf = child(node, *pending);
        if (nodes_[leaf].terminal == kNone) {
            nodes_[leaf].terminal = static_cast<std::uint32_t>(terminals_.size());
            terminals_.push_back(leaf);
        }
        return;
    }
    std::uint32_t flushed = pending ? kNone : node;
    for (const Atom& c : choices[t]) {
        if (pending && mergeable(*pending, c)) {
            const Atom m = merged(*pending, c);
            insert(choices, t + 1, node, &m);
        } else {
            if (flushed == kNone) flushed = child(node, *pending);
            insert(choices, t + 1, flushed, &c);
        }
    }
}

void PatternTrie::add_value(std::span<const Token> tokens) {
    if (tokens.empty()) return;
    const auto choices = token_choices(tokens, h_);
    insert(choices, 0, 0, nullptr);
}

PatternTrie::MatchState::MatchState(const PatternTrie& t, std::u32string_view c)
    : trie(t), chars(c), words(c.size() / 64 + 1), run_cache(t.h_.size()), run_ready(t.h_.size(), 0) {
    sets.assign(2, std::vector<std::uint64_t>(words, 0));
    sets[0][0] = 1;
}

const std::vector<std::uint32_t>& PatternTrie::MatchState::runs(ClassId cls) {
    if (!run_ready[cls]) {
        auto& run = run_cache[cls];
        run.assign(chars.size() + 1, 0);
        for (std::size_t i = chars.size(); i-- > 0;) run[i] = trie.h_.contains(cls, chars[i]) ? run[i + 1] + 1 : 0;
        run_ready[cls] = 1;
    }
    return run_cache[cls];
}

bool PatternTrie::step(MatchState& st, const Atom& a, const std::vector<std::uint64_t>& from,
                       std::vector<std::uint64_t>& to) const {
    std::fill(to.begin(), to.end(), 0);
    const std::size_t n = st.chars.size();
    bool any = false;
    auto set = [&](std::size_t q) {
        to[q / 64] |= std::uint64_t{1} << (q % 64);
        any = true;
    };
    const std::vector<std::uint32_t>* run = a.is_literal() ? nullptr : &st.runs(a.cls);
    for (std::size_t w = 0; w < from.size(); ++w) {
        for (std::uint64_t bits = from[w]; bits; bits &= bits - 1) {
            const std::size_t pos = w * 64 + static_cast<std::size_t>(__builtin_ctzll(bits));
            if (a.is_literal()) {
                const std::size_t len = a.literal.size();
                if (pos + len <= n && st.chars.compare(pos, len, a.literal) == 0) set(pos + len);
                continue;
            }
            const std::uint32_t r = (*run)[pos];
            if (r < a.min_len) continue;
            if (!a.unbounded) {
                set(pos + a.min_len);
            } else {
                for (std::size_t q = pos + a.min_len; q <= pos + r; ++q) set(q);
            }
        }
    }
    return any;
}

}  // namespace patlake::detail
