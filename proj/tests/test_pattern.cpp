#include <doctest.h>

#include <algorithm>
#include <random>
#include <regex>
#include <set>

#include "oracles/random_values.hpp"
#include "patlake/error.hpp"
#include "patlake/pattern.hpp"

using namespace patlake;

namespace {

const Hierarchy& H() { return Hierarchy::standard(); }

std::set<std::string> texts_of(const std::vector<Pattern>& ps) {
    std::set<std::string> out;
    for (const auto& p : ps) out.insert(to_text(p, H()));
    return out;
}

std::vector<std::string> token_texts(std::string_view v) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(v)) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("hierarchy: standard lattice shape") {
    const auto& h = H();
    for (auto name : {"any", "alnum", "letter", "upper", "lower", "num", "digit", "hex", "sym", "ws"})
        CHECK(h.find(name).has_value());
    CHECK(h.at(h.root()).name == "any");

    auto id = [&](const char* n) { return *h.find(n); };
    // Base classes are pairwise disjoint.
    std::vector<ClassId> base{id("digit"), id("upper"), id("lower"), id("sym"), id("ws")};
    for (char32_t cp = 0; cp < 128; ++cp) {
        int hits = 0;
        for (auto b : base) hits += h.contains(b, cp);
        CHECK(hits == 1);
        CHECK(h.contains(id("letter"), cp) == (h.contains(id("upper"), cp) || h.contains(id("lower"), cp)));
        CHECK(h.contains(id("alnum"), cp) == (h.contains(id("letter"), cp) || h.contains(id("digit"), cp)));
        if (h.contains(id("hex"), cp)) CHECK(h.contains(id("alnum"), cp));
    }
    CHECK(h.contains(id("sym"), U'é'));
    CHECK(h.contains(id("sym"), U'\t'));
    CHECK_FALSE(h.contains(id("ws"), U'\t'));
}

TEST_CASE("hierarchy: every character has a unique chain ending at the root") {
    const auto& h = H();
    for (char32_t cp : std::u32string(U"aZ09 #\t\x7f") + U"é") {
        auto chain = h.chain(cp);
        REQUIRE(!chain.empty());
        CHECK(chain.back() == h.root());
        for (auto c : chain) CHECK(h.contains(c, cp));
        for (std::size_t i = 1; i < chain.size(); ++i) CHECK(h.is_ancestor(chain[i], chain[i - 1]));
    }
    auto names = [&](char32_t cp) {
        std::string s;
        for (auto c : h.chain(cp)) s += h.at(c).name + " ";
        return s;
    };
    CHECK(names('F') == "upper letter alnum any ");
    CHECK(names('7') == "digit num alnum any ");
}

TEST_CASE("hierarchy: serialization and fingerprint") {
    const auto& h = H();
    auto again = Hierarchy::parse(h.serialize());
    CHECK(again.fingerprint() == h.fingerprint());
    CHECK(again.serialize() == h.serialize());

    auto changed = Hierarchy::parse(h.serialize() + "dot sym 2e\n");
    CHECK(changed.fingerprint() != h.fingerprint());

    CHECK_THROWS_AS(Hierarchy::parse("any - *\nother - 41\n"), Error);          // two roots
    CHECK_THROWS_AS(Hierarchy::parse("any - *\nx y 41\n"), Error);              // unknown parent
    CHECK_THROWS_AS(Hierarchy::parse("any - *\nd any 30\ne d 31\n"), Error);    // not a subset
    CHECK_THROWS_AS(Hierarchy::parse("top - 00-40\n"), Error);                  // root incomplete
}

TEST_CASE("tokenize: coarse runs") {
    CHECK(token_texts("9/12/2019") == std::vector<std::string>{"9", "/", "12", "/", "2019"});
    auto toks = tokenize("9/12/2019");
    CHECK(toks[0].kind == TokenKind::Digit);
    CHECK(toks[1].kind == TokenKind::Symbol);
    CHECK(tokenize("").empty());
    CHECK(token_texts("CUST#0FF125") == std::vector<std::string>{"CUST", "#", "0", "FF", "125"});
    CHECK(token_texts("a  b") == std::vector<std::string>{"a", "  ", "b"});
    CHECK(token_texts("--") == std::vector<std::string>{"-", "-"});
    CHECK(token_texts("é1") == std::vector<std::string>{"é", "1"});
}

TEST_CASE("tokenize: concatenation identity") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        auto v = testing::random_value(rng, 8);
        std::string joined;
        for (const auto& t : tokenize(v)) joined += t.text;
        CHECK(joined == v);
        CHECK(token_count(v) == tokenize(v).size());
    }
    std::string bad = "a\xff\xc3";
    std::string joined;
    for (const auto& t : tokenize(bad)) joined += t.text;
    CHECK(joined == bad);
}

TEST_CASE("token_count") {
    CHECK(token_count("9:07") == 3);
    CHECK(token_count("") == 0);
    CHECK(token_count("02/18/2015 00:00:00") == 11);
}

TEST_CASE("generate_patterns: 9:07") {
    auto ps = texts_of(generate_patterns("9:07", H()));
    for (auto expected : {"<digit>{1}:<digit>{2}", "<digit>+:<digit>{2}", "<digit>{1}:<digit>+",
                          "<num>{1}:<digit>+", "<num>+:<digit>+", "9:<digit>{2}", "9:07", "<any>+"})
        CHECK_MESSAGE(ps.count(expected) == 1, expected);
    // digit token: literal + {digit,num,hex,alnum} x {exact,plus} = 9; ':' gives 3.
    CHECK(ps.size() == 9 * 3 * 9 + 1);
}

TEST_CASE("generate_patterns: single character") {
    CHECK(texts_of(generate_patterns("g", H())) ==
          std::set<std::string>{"g", "<lower>{1}", "<lower>+", "<letter>{1}", "<letter>+", "<alnum>{1}",
                                "<alnum>+", "<any>+"});
    // 'a' is also a hex digit.
    CHECK(texts_of(generate_patterns("a", H())) ==
          std::set<std::string>{"a", "<lower>{1}", "<lower>+", "<letter>{1}", "<letter>+", "<alnum>{1}",
                                "<alnum>+", "<hex>{1}", "<hex>+", "<any>+"});
    CHECK(generate_patterns("", H()).empty());
}

TEST_CASE("generate_patterns: merged runs") {
    auto ps = texts_of(generate_patterns("0FF", H()));
    CHECK(ps.count("<hex>{3}") == 1);
    CHECK(ps.count("<hex>+<hex>{2}") == 1);  // one plus, one exact(2) token
    CHECK(ps.count("<alnum>+<alnum>{1}") == 1);
    CHECK(ps.count("<hex>{1}FF") == 1);
}

TEST_CASE("generate_patterns: budget") {
    PatternBudget tight{3, 1u << 16};
    CHECK_THROWS_AS(generate_patterns("9:07", H(), tight), Error);
    CHECK_NOTHROW(generate_patterns("9:0", H(), PatternBudget{4, 1000}));
    PatternBudget small{13, 100};
    CHECK_THROWS_AS(generate_patterns("9:07", H(), small), Error);
    auto toks = tokenize("9:07");
    CHECK(pattern_space_bound(toks, H()) == 244);
}

TEST_CASE("pattern text: parse/format") {
    auto p = parse_pattern("<digit>{2}<digit>+:\\<x\\>", H());
    CHECK(to_text(p, H()) == "<digit>+<digit>{2}:\\<x\\>");
    CHECK(to_text(parse_pattern("<alnum>+<alnum>+", H()), H()) == "<alnum>+<alnum>{1}");
    CHECK(to_text(parse_pattern("a\\x09b", H()), H()) == "a\\x09b");
    CHECK_THROWS_AS(parse_pattern("<digit>", H()), Error);
    CHECK_THROWS_AS(parse_pattern("<digit>{0}", H()), Error);
    CHECK_THROWS_AS(parse_pattern("<nope>+", H()), Error);
    CHECK_THROWS_AS(parse_pattern("a+", H()), Error);
    CHECK(Pattern::trivial(H()).is_trivial(H()));
    CHECK(to_text(Pattern::trivial(H()), H()) == "<any>+");
}

TEST_CASE("matches: examples") {
    CHECK(matches(parse_pattern("<digit>{2}:<digit>{2}", H()), "10:02", H()));
    CHECK_FALSE(matches(parse_pattern("<digit>{1}:<digit>{2}", H()), "10:02", H()));
    CHECK(matches(parse_pattern("<digit>+:<digit>{2}", H()), "10:02", H()));
    CHECK(matches(parse_pattern("<alnum>+", H()), "a1", H()));
    CHECK_FALSE(in_pattern_space(parse_pattern("<alnum>+", H()), "a1", H()));
    CHECK(matches(parse_pattern("<alnum>+<alnum>{2}", H()), "a1b", H()));
    CHECK_FALSE(matches(parse_pattern("<alnum>+<alnum>{2}", H()), "a1", H()));
    CHECK_FALSE(matches(Pattern::trivial(H()), "", H()));
    CHECK(matches(parse_pattern("CUST#<hex>{6}", H()), "CUST#0FF125", H()));
    CHECK_FALSE(matches(parse_pattern("CUST#<hex>{6}", H()), "CUST#0FG125", H()));
}

TEST_CASE("property: generation soundness and membership agreement") {
    std::mt19937_64 rng(42);
    int checked = 0;
    for (int round = 0; round < 200; ++round) {
        auto v = testing::random_value(rng, 4);
        auto tokens = tokenize(v);
        if (!within_budget(tokens, H(), PatternBudget{})) continue;
        auto ps = generate_patterns(v, H());
        for (int k = 0; k < 5 && !ps.empty(); ++k) {
            const auto& p = ps[rng() % ps.size()];
            CHECK_MESSAGE(matches(p, v, H()), to_text(p, H()) << " vs " << v);
            CHECK(in_pattern_space(p, tokens, H()));
            ++checked;
        }
        // Membership of other values' patterns agrees with set membership.
        auto w = testing::random_value(rng, 3);
        auto wt = tokenize(w);
        if (!within_budget(wt, H(), PatternBudget{})) continue;
        auto wset = texts_of(generate_patterns(w, H()));
        for (const auto& p : ps)
            CHECK(in_pattern_space(p, wt, H()) == (wset.count(to_text(p, H())) == 1));
    }
    CHECK(checked >= 1000);
}

TEST_CASE("property: canonical text round trip") {
    std::mt19937_64 rng(3);
    for (int round = 0; round < 100; ++round) {
        auto v = testing::random_value(rng, 3);
        for (const auto& p : generate_patterns(v, H())) {
            auto text = to_text(p, H());
            CHECK(parse_pattern(text, H()) == p);
            CHECK(to_text(parse_pattern(text, H()), H()) == text);
        }
    }
}

TEST_CASE("property: generalizing an atom to an ancestor never loses a match") {
    const auto& h = H();
    std::mt19937_64 rng(11);
    for (int round = 0; round < 200; ++round) {
        auto v = testing::random_value(rng, 3);
        auto ps = generate_patterns(v, h);
        const auto& p = ps[rng() % ps.size()];
        auto atoms = p.atoms();
        for (auto& a : atoms) {
            if (a.is_literal() || !h.at(a.cls).parent || *h.at(a.cls).parent == h.root()) continue;
            a.cls = *h.at(a.cls).parent;
        }
        Pattern general(atoms);
        CHECK(matches(general, v, h));
    }
}

TEST_CASE("pattern_to_regex") {
    CHECK(pattern_to_regex(parse_pattern("<digit>{2}", H()), H()) == "^[0-9]{2}$");
    CHECK(pattern_to_regex(parse_pattern("#", H()), H()) == "^\\#$");
    CHECK(pattern_to_regex(Pattern::trivial(H()), H()) == "^.+$");
    CHECK(pattern_to_regex(parse_pattern("<upper>+<upper>{2}", H()), H()) == "^[A-Z]{3,}$");

    std::mt19937_64 rng(5);
    int compared = 0;
    for (int round = 0; round < 100; ++round) {
        auto v = testing::random_value(rng, 3);
        auto ps = generate_patterns(v, H());
        const auto& p = ps[rng() % ps.size()];
        std::regex re(pattern_to_regex(p, H()), std::regex::ECMAScript);
        for (int k = 0; k < 10; ++k) {
            auto w = k == 0 ? v : testing::random_value(rng, 3);
            CHECK_MESSAGE(std::regex_match(w, re) == matches(p, w, H()), pattern_to_regex(p, H()) << " on " << w);
            ++compared;
        }
    }
    CHECK(compared == 1000);
}
