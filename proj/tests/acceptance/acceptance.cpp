// Acceptance suite: one PASS/FAIL line per criterion. Exit status 0 iff all pass.
// Usage: patlake_acceptance [criterion numbers...]

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/drift_oracle.hpp"
#include "oracles/horizontal_fixture.hpp"
#include "oracles/index_oracle.hpp"
#include "oracles/planted.hpp"
#include "oracles/random_values.hpp"
#include "oracles/solver_oracle.hpp"
#include "oracles/temp_dir.hpp"
#include "patlake/cli.hpp"
#include "patlake/corpus_index.hpp"
#include "patlake/drift_stats.hpp"
#include "patlake/error.hpp"
#include "patlake/horizontal_cuts.hpp"
#include "patlake/optimizer.hpp"
#include "patlake/vertical_cuts.hpp"

using namespace patlake;
using namespace patlake::testing;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

const Hierarchy& H() { return Hierarchy::standard(); }

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Collects failed checks for one criterion.
class Checker {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        failed_ += !ok;
    }
    void note(const std::string& s) { notes_.push_back(s); }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream out;
        out << checks_ << " checks";
        if (failed_) out << ", " << failed_ << " failed";
        for (const auto& n : notes_) out << "; " << n;
        for (const auto& f : failures_) out << "; FAILED " << f;
        return out.str();
    }

private:
    std::size_t checks_ = 0, failed_ = 0;
    std::vector<std::string> failures_, notes_;
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. Worked examples

void worked_examples(Checker& c) {
    const auto start = Clock::now();
    const auto clock = make_column({"9:07:02 AM", "8:30:15 AM", "7:45:00 AM", "6:12:59 AM", "10:02:20 AM",
                                    "11:15:42 AM", "10:30:00 AM", "11:59:59 AM", "10:00:01 AM", "11:11:11 AM",
                                    "12:01:32 PM", "12:45:10 PM"});
    auto imp = [&](const char* p) { return impurity(clock, parse_pattern(p, H()), H()); };
    c.expect(imp("<digit>+:<digit>{2}:<digit>{2} AM") == Rational(2, 12), "impurity 2/12");
    c.expect(imp("<digit>{1}:<digit>{2}:<digit>{2} <letter>{2}") == Rational(8, 12), "impurity 8/12");
    c.expect(imp("<digit>+:<digit>{2}:<digit>{2} <letter>{2}") == 0, "impurity 0/12");

    const IndexConfig cfg{H().fingerprint(), PatternBudget{}, 1000};
    CorpusIndex fpr(cfg);
    for (int i = 0; i < 4800; ++i) fpr.add_raw("<digit>+:<digit>{2}", 0, 100), fpr.count_column();
    for (int i = 0; i < 200; ++i) fpr.add_raw("<digit>+:<digit>{2}", 1, 100), fpr.count_column();
    auto s = fpr.lookup("<digit>+:<digit>{2}");
    c.expect(s && s->cov == 5000 && s->fpr_exact == Rational(4, 10000), "FPR_T = 0.04%");

    CorpusIndex fnr(cfg);
    for (int i = 0; i < 2000; ++i) fnr.add_raw("<digit>+:<digit>{2}", 0, 10), fnr.count_column();
    for (int i = 0; i < 3000; ++i) fnr.add_raw("<digit>+:<digit>{2}", 5, 10), fnr.count_column();
    auto t = fnr.lookup("<digit>+:<digit>{2}");
    c.expect(t && t->cov == 5000 && t->fpr_exact == Rational(3, 10), "FNR_T = 30%");
    const std::vector<std::string> query{"9:07", "8:30", "7:45"};
    c.expect(!solve_cmdt(query, fnr, H(), SolverConfig{Rational(29, 100), 100, Mode::Tag}), "FNR 30% rejected at r<30%");

    CorpusIndex cov(cfg);
    cov.insert("<digit>{1}:<digit>{2}", IndexEntry{20000, {}});
    cov.insert("<digit>+:<digit>{2}", IndexEntry{500000, {}});
    cov.insert("<alnum>+:<alnum>{2}", IndexEntry{10000000, {}});
    auto best = solve_cmdt(query, cov, H(), SolverConfig{Rational(1, 100), 100, Mode::Tag});
    c.expect(best && best->text == "<digit>{1}:<digit>{2}" && best->cov == 20000, "CMDT picks the 20K candidate");

    const double secs = seconds_since(start);
    c.note("runtime " + fmt("%.3f s", secs));
    c.expect(secs < 1.0, "runtime < 1 s");
}

// ---------------------------------------------------------------------------
// 2. Brute-force oracle equivalence

// Corpus of <= 10 columns x <= 5 values drawn around a few shapes, plus a query
// column of the same shape.
std::pair<std::vector<Column>, std::vector<std::string>> shaped_corpus(std::mt19937_64& rng) {
    std::vector<std::string> shapes;
    for (int i = 0; i < 3; ++i) shapes.push_back(random_value(rng, 3));
    auto mutate = [&](std::string v) {
        for (auto& ch : v) {
            if (ch >= '0' && ch <= '9') ch = char('0' + rng() % 10);
            else if (ch >= 'a' && ch <= 'z') ch = char('a' + rng() % 26);
            else if (ch >= 'A' && ch <= 'Z' && rng() % 2) ch = char('a' + rng() % 26);
        }
        return v;
    };
    std::vector<Column> corpus;
    const int cols = 1 + static_cast<int>(rng() % 10);
    for (int i = 0; i < cols; ++i) {
        std::vector<std::string> vals;
        const int n = 1 + static_cast<int>(rng() % 5);
        for (int j = 0; j < n; ++j)
            vals.push_back(rng() % 5 ? mutate(shapes[rng() % shapes.size()]) : random_value(rng, 3));
        corpus.push_back(make_column(vals));
    }
    std::vector<std::string> query;
    const auto shape = shapes[rng() % shapes.size()];
    for (int j = 0; j < 4; ++j) query.push_back(mutate(shape));
    return {corpus, query};
}

void oracle_equivalence(Checker& c) {
    const auto start = Clock::now();
    std::mt19937_64 rng(2024);
    std::size_t index_ok = 0, solved = 0;
    // Rounds past 200 use a reduced token budget and check the index only.
    const int rounds = 250;
    for (int round = 0; round < rounds; ++round) {
        auto [corpus, query] = shaped_corpus(rng);
        const PatternBudget budget = round < 200 ? PatternBudget{} : PatternBudget{3, 1 << 16};
        const auto idx = build_index(corpus, H(), budget, 1000, 1);
        const bool same = idx == oracle_index(corpus, H(), budget, 1000);
        c.expect(same, "build_index oracle, corpus " + std::to_string(round));
        index_ok += same;

        if (round >= 200) continue;
        for (Mode mode : {Mode::Validate, Mode::Tag}) {
            const SolverConfig cfg{Rational(rng() % 4 + 1, 4), 1 + rng() % 3, mode};
            const auto expect = oracle_ranking(query, idx, H(), cfg);
            const auto got = mode == Mode::Validate ? solve_fmdv(query, idx, H(), cfg) : solve_cmdt(query, idx, H(), cfg);
            const bool match = got.has_value() == !expect.empty() && (!got || *got == expect.front());
            c.expect(match, std::string(mode == Mode::Validate ? "FMDV" : "CMDT") + " optimum, corpus " +
                                std::to_string(round));
            solved += got.has_value();
        }
    }
    c.note("(a) " + std::to_string(index_ok) + "/" + std::to_string(rounds) + " indexes exact");
    c.note("(b) " + std::to_string(solved) + " feasible optima");
    c.expect(solved >= 50, "suite exercises feasible optima");

    int compared = 0, multi = 0;
    while (compared < 100) {
        auto g = random_generator(rng, 8);
        std::vector<Column> corpus;
        for (int k = 0; k < 14; ++k) {
            std::size_t b = rng() % g.parts.size();
            std::size_t e = b + 1 + rng() % (g.parts.size() - b);
            if (k < 2) b = 0, e = g.parts.size();
            auto sub = slice(g, b, e);
            std::vector<std::string> vals;
            for (int i = 0; i < 5; ++i) vals.push_back(rng() % 6 ? sub.sample(rng) : junk_value(rng));
            corpus.push_back(make_column(vals));
        }
        const std::size_t tau = 3 + rng() % 6;
        const auto idx = build_index(corpus, H(), PatternBudget{tau, 1 << 16}, 1000, 1);
        std::vector<std::string> query;
        for (int i = 0; i < 5; ++i) query.push_back(g.sample(rng));
        const auto a = align(query);
        if (a.width() > 8) continue;
        const SolverConfig cfg{Rational(1 + rng() % 4, 4), 1 + rng() % 2, Mode::Validate};
        const auto got = solve_fmdv_v(a, idx, H(), cfg);
        const auto want = exhaustive_segmentation(a, idx, H(), cfg);
        ++compared;
        bool match = got.has_value() == want.feasible;
        if (match && got) {
            std::vector<std::string> pats;
            for (const auto& s : got->segments) pats.push_back(s.hypothesis.text);
            match = got->total_fpr == want.cost && got->cuts() == want.cuts && pats == want.patterns;
            multi += got->segments.size() > 1;
        }
        c.expect(match, "FMDV-V vs exhaustive, column " + std::to_string(compared));
    }
    c.note("(c) " + std::to_string(compared) + " columns, " + std::to_string(multi) + " multi-segment");

    const double secs = seconds_since(start);
    c.note("runtime " + fmt("%.1f s", secs));
    c.expect(secs < 60.0, "runtime < 60 s");
}

// ---------------------------------------------------------------------------
// 3. Planted-domain recovery

struct Planted {
    Generator g;
    std::string expect;
};

const std::string kHexish = "abcdef";

// Letter and digit parts are always separated by a symbol or space.
std::vector<Planted> planted_generators() {
    return {
        {{{run(kUpper, 3), lit("-"), run(kDigit, 4)}}, "<upper>{3}-<digit>{4}"},
        {{{run(kDigit, 1, 2), lit("/"), run(kDigit, 4)}}, "<digit>+/<digit>{4}"},
        {{{run(kUpper, 2), lit("_"), run(kDigit, 6)}}, "<upper>{2}_<digit>{6}"},
        {{{run(kLower, 3, 8), lit("@"), run(kLower, 3, 8)}}, "<lower>+@<lower>+"},
        {{{run(kDigit, 3), lit("-"), run(kDigit, 4)}}, "<digit>{3}-<digit>{4}"},
        {{{run(kDigit, 2), lit(":"), run(kDigit, 2)}}, "<digit>{2}:<digit>{2}"},
        {{{lit("ID"), lit("-"), run(kDigit, 5)}}, "ID-<digit>{5}"},
        {{{run(kUpper, 2, 9), lit(" "), run(kUpper, 2, 9)}}, "<upper>+ <upper>+"},
        {{{run(kDigit, 1, 4), lit("."), run(kDigit, 2)}}, "<digit>+.<digit>{2}"},
        {{{lit("$"), run(kDigit, 1, 6)}}, "$<digit>+"},
        {{{run(kUpper, 2), lit("-"), run(kDigit, 3)}}, "<upper>{2}-<digit>{3}"},
        {{{run(kDigit, 4), lit("-"), run(kDigit, 2)}}, "<digit>{4}-<digit>{2}"},
        {{{lit("v"), lit("."), run(kDigit, 1, 3)}}, "v.<digit>+"},
        {{{run(kLower, 4), lit("_"), run(kDigit, 2)}}, "<lower>{4}_<digit>{2}"},
        {{{lit("#"), run(kDigit, 6)}}, "#<digit>{6}"},
        {{{run(kUpper, 3), lit(" "), run(kDigit, 3)}}, "<upper>{3} <digit>{3}"},
        {{{run(kDigit, 1, 3), lit("%")}}, "<digit>+%"},
        {{{run(kDigit, 1, 4), lit(" "), lit("kg")}}, "<digit>+ kg"},
        {{{run(kUpper, 2, 6), lit("_"), run(kUpper, 2, 6)}}, "<upper>+_<upper>+"},
        {{{run(kDigit, 5)}}, "<digit>{5}"},
    };
}

char swap_symbol(char ch) {
    static const std::map<char, char> swaps{{'-', ':'}, {':', '-'}, {'/', '.'}, {'.', '/'}, {'_', '~'},
                                            {'@', '#'}, {'$', '#'}, {'#', '$'}, {'%', '&'}};
    auto it = swaps.find(ch);
    return it == swaps.end() ? ';' : it->second;
}

char rot13(char ch) {
    if (ch >= 'a' && ch <= 'z') return char('a' + (ch - 'a' + 13) % 26);
    if (ch >= 'A' && ch <= 'Z') return char('A' + (ch - 'A' + 13) % 26);
    return ch;
}

// One near-miss generator per way a part can be generalized past the planted pattern:
// a sibling character class, a longer fixed-length run, another literal of the same kind.
std::vector<Generator> near_misses(const Generator& g) {
    std::vector<Generator> out;
    auto with = [&](std::size_t i, Part p) {
        Generator n = g;
        n.parts[i] = std::move(p);
        out.push_back(std::move(n));
    };
    for (std::size_t i = 0; i < g.parts.size(); ++i) {
        const Part& p = g.parts[i];
        if (p.alphabet.empty()) {
            const std::string& s = p.literal;
            if (s == " ") {
                with(i, lit("  "));
            } else if (std::isalpha(static_cast<unsigned char>(s[0]))) {
                std::string other;
                for (char ch : s) other += rot13(ch);
                with(i, lit(other));
                with(i, lit(s + rot13(s.back())));
            } else {
                with(i, lit(std::string(1, swap_symbol(s[0]))));
            }
            continue;
        }
        const std::string sibling = p.alphabet == kUpper ? kLower : p.alphabet == kLower ? kUpper : kHexish;
        with(i, run(sibling, p.min_len, p.max_len));
        if (p.min_len == p.max_len) with(i, run(p.alphabet, p.min_len + 1));
    }
    return out;
}

void planted_recovery(Checker& c) {
    const auto start = Clock::now();
    int recovered = 0, total = 0;
    std::mt19937_64 rng(3);
    for (const auto& planted : planted_generators()) {
        const std::string expect = to_text(parse_pattern(planted.expect, H()), H());
        const auto near = near_misses(planted.g);
        std::vector<Column> corpus;
        for (int i = 0; i < 500; ++i) corpus.push_back(make_column(planted.g.column(rng, 100)));
        for (int i = 0; i < 500; ++i) corpus.push_back(make_column(dirty_column(near[i % near.size()], rng, 100)));
        std::string got;
        {
            const auto idx = build_index(corpus, H(), PatternBudget{}, 1000);
            corpus.clear();
            const auto query = planted.g.column(rng, 100);
            const auto best = solve_fmdv(query, idx, H(), SolverConfig{0, 10, Mode::Validate});
            got = best ? best->text : "(infeasible)";
        }
        ++total;
        if (got == expect) ++recovered;
        else c.note("missed " + expect + " -> " + got);
    }
    const double secs = seconds_since(start);
    c.note(std::to_string(recovered) + "/" + std::to_string(total) + " recovered");
    c.note("runtime " + fmt("%.1f s", secs));
    c.expect(recovered >= 19, "at least 19/20 planted patterns recovered");
    c.expect(secs < 300.0, "runtime < 5 min");
}

// ---------------------------------------------------------------------------
// 4. FMDV-H

void horizontal_cuts(Checker& c) {
    std::mt19937_64 rng(41);
    int feasible = 0;
    for (int round = 0; round < 100; ++round) {
        auto g = random_generator(rng, 5);
        std::vector<Column> corpus;
        for (int k = 0; k < 8; ++k)
            corpus.push_back(make_column(rng() % 4 ? g.column(rng, 5) : dirty_column(g, rng, 6)));
        const auto idx = build_index(corpus, H(), PatternBudget{}, 1000, 1);
        const auto values = g.column(rng, 8);
        const SolverConfig cfg{Rational(rng() % 3, 4), 1 + rng() % 4, Mode::Validate};
        const auto f = solve_fmdv(values, idx, H(), cfg);
        std::vector<std::size_t> removed;
        const auto p = solve_fmdv_h(values, idx, H(), cfg, ToleranceConfig{0}, &removed);
        bool same = p.has_value() == f.has_value();
        if (same && f) {
            ++feasible;
            same = p->patterns == std::vector<std::string>{f->text} && p->fpr == f->fpr_exact && removed.empty();
            const auto v = program_violation(*p, values, idx, H(), cfg, ToleranceConfig{0});
            c.expect(v.empty(), "recheck theta=0 fixture " + std::to_string(round) + ": " + v);
        }
        c.expect(same, "theta=0 equivalence, fixture " + std::to_string(round));
    }
    c.note(std::to_string(feasible) + "/100 theta=0 fixtures feasible");
    c.expect(feasible >= 50, "theta=0 suite exercises feasible fixtures");

    const auto idx = digit_commas_index(H());
    std::mt19937_64 rng2(99);
    auto values = digit_commas().column(rng2, 100);
    values[37] = "-";
    const SolverConfig cfg{0, 10, Mode::Validate};
    const ToleranceConfig tol;
    std::vector<std::size_t> removed;
    const auto p = solve_fmdv_h(values, idx, H(), cfg, tol, &removed);
    c.expect(p.has_value(), "99% fixture feasible");
    if (p) {
        c.expect(p->patterns == std::vector<std::string>{kCommas}, "99% fixture returns the digit-commas pattern");
        c.expect(removed == std::vector<std::size_t>{37}, "99% fixture cuts exactly the '-' value");
        const auto v = program_violation(*p, values, idx, H(), cfg, tol);
        c.expect(v.empty(), "recheck 99% fixture: " + v);
    }
}

// ---------------------------------------------------------------------------
// 5. Statistics

void statistics(Checker& c) {
    const Pascal pascal(40);
    std::size_t tables = 0, fisher_bad = 0;
    for (std::uint64_t n = 2; n <= 40; ++n)
        for (std::uint64_t a = 0; a <= n; ++a)
            for (std::uint64_t b = 0; a + b <= n; ++b)
                for (std::uint64_t cc = 0; a + b + cc <= n; ++cc) {
                    const ContingencyTable2x2 t{a, b, cc, n - a - b - cc};
                    if (a + b == 0 || t.c + t.d == 0) continue;
                    ++tables;
                    fisher_bad += !close(fisher_exact(t), fisher_oracle(t, pascal), 1e-10L);
                }
    c.expect(fisher_bad == 0, std::to_string(fisher_bad) + " Fisher tables off by more than 1e-10");
    c.note(std::to_string(tables) + " Fisher tables");

    std::size_t yates = 0, yates_bad = 0;
    for (std::uint64_t a = 0; a <= 60; a += 3)
        for (std::uint64_t b = 0; b <= 60; b += 4)
            for (std::uint64_t cc = 0; cc <= 60; cc += 5)
                for (std::uint64_t d = 0; d <= 60; d += 6) {
                    const ContingencyTable2x2 t{a, b, cc, d};
                    if (a + b == 0 || cc + d == 0 || degenerate_margins(t)) continue;
                    ++yates;
                    yates_bad += !close(chi_squared_yates_statistic(t), static_cast<long double>(yates_oracle(t)),
                                        1e-12L);
                }
    c.expect(yates_bad == 0, std::to_string(yates_bad) + " Yates statistics off by more than 1e-12");
    c.note(std::to_string(yates) + " Yates tables");

    const auto program = digit_program(Rational(1, 1000), 1000);
    for (auto test : {DriftTest::Fisher, DriftTest::ChiSquaredYates}) {
        const auto loud = drift_check(program, test_column(1000, 500), H(), 0.01, test);
        c.expect(loud.alarm, std::string("0.1% -> 50% alarms (") + to_string(test) + ")");
        const auto quiet = drift_check(program, test_column(10000, 11), H(), 0.01, test);
        c.expect(quiet.theta_test == Rational(11, 10000) && !quiet.alarm,
                 std::string("0.1% -> 0.11% stays silent (") + to_string(test) + ")");
    }
}

// ---------------------------------------------------------------------------
// 6. Index round-trip and merge

void round_trip_and_merge(Checker& c) {
    std::mt19937_64 rng(66);
    TempDir dir;
    for (int round = 0; round < 50; ++round) {
        std::vector<Column> corpus;
        const int cols = 2 + static_cast<int>(rng() % 12);
        for (int i = 0; i < cols; ++i) {
            std::vector<std::string> vals;
            const int n = 1 + static_cast<int>(rng() % 6);
            for (int j = 0; j < n; ++j) vals.push_back(random_value(rng, 4));
            corpus.push_back(make_column(vals));
        }
        const auto whole = build_index(corpus, H(), PatternBudget{}, 1000, 1);
        const auto path = dir.path() / "idx.txt";
        save_index(whole, path);
        c.expect(load_index(path) == whole, "load(save(x)) == x, corpus " + std::to_string(round));

        std::vector<Column> a, b;
        for (auto& col : corpus) (rng() % 2 ? a : b).push_back(col);
        const auto merged =
            merge_indexes(build_index(a, H(), PatternBudget{}, 1000, 1), build_index(b, H(), PatternBudget{}, 1000, 1));
        c.expect(merged == whole, "build(A u B) == merge(build(A), build(B)), partition " + std::to_string(round));
    }
}

// ---------------------------------------------------------------------------
// 7. Latency and footprint

std::string csv(const std::vector<std::string>& values) {
    std::string s = "value\n";
    for (const auto& v : values) s += v + "\n";
    return s;
}

std::uintmax_t tree_bytes(const fs::path& root) {
    std::uintmax_t total = 0;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) total += e.file_size();
    return total;
}

void latency_and_footprint(Checker& c) {
    TempDir dir;
    std::mt19937_64 rng(7);
    const auto gens = planted_generators();

    // Latency fixture: a small corpus whose index has at least 10^4 entries.
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (int k = 0; k < 3; ++k) {
            char name[64];
            std::snprintf(name, sizeof name, "small/g%02zu_%d.csv", i, k);
            dir.write(name, csv(gens[i].g.column(rng, 12)));
        }
    const auto small_index = dir.path() / "small.idx";
    std::ostringstream sink, err;
    c.expect(run_cli({"index", (dir.path() / "small").string(), "-o", small_index.string()}, sink, err) == kExitOk,
             "small index built");
    const auto entries = load_index(small_index).size();
    c.expect(entries >= 10000, "latency fixture has >= 10^4 entries");

    std::vector<fs::path> queries;
    for (int q = 0; q < 100; ++q)
        queries.push_back(dir.write("q/q" + std::to_string(q) + ".csv", csv(gens[q % gens.size()].g.column(rng, 50))));
    int answered = 0;
    const auto start = Clock::now();
    for (const auto& q : queries) {
        std::ostringstream out, qerr;
        const int code = run_cli({"suggest", "-i", small_index.string(), "--column", q.string(), "--min-cov", "2",
                                  "--fpr-max", "0.5", "--top-k", "5"},
                                 out, qerr);
        answered += code == kExitOk;
        c.expect(code == kExitOk || code == kExitNoResult, "suggest exit code " + std::to_string(code));
    }
    const double mean_ms = seconds_since(start) * 1000.0 / static_cast<double>(queries.size());
    c.note("index entries " + std::to_string(entries));
    c.note("suggest mean " + fmt("%.1f ms", mean_ms) + " (" + std::to_string(answered) + "/100 answered)");
    c.expect(mean_ms < 100.0, "suggest mean latency < 100 ms");

    // Footprint fixture: 100 columns x 1000 values.
    for (int k = 0; k < 100; ++k) {
        char name[64];
        std::snprintf(name, sizeof name, "big/c%03d.csv", k);
        dir.write(name, csv(gens[k % gens.size()].g.column(rng, 1000)));
    }
    const auto big_index = dir.path() / "big.idx";
    c.expect(run_cli({"index", (dir.path() / "big").string(), "-o", big_index.string()}, sink, err) == kExitOk,
             "footprint index built");
    const auto corpus_bytes = tree_bytes(dir.path() / "big");
    const auto index_bytes = fs::file_size(big_index);
    const double ratio = static_cast<double>(index_bytes) / static_cast<double>(corpus_bytes);
    c.note("corpus " + std::to_string(corpus_bytes) + " B, index " + std::to_string(index_bytes) + " B, ratio " +
           fmt("%.4g", ratio));
    c.expect(ratio <= 0.01, "index <= 1/100 of corpus bytes");
}

struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "worked-example fidelity", worked_examples},
        {2, "brute-force oracle equivalence", oracle_equivalence},
        {3, "planted-domain recovery", planted_recovery},
        {4, "FMDV-H", horizontal_cuts},
        {5, "statistics", statistics},
        {6, "index round-trip and merge", round_trip_and_merge},
        {7, "latency and footprint", latency_and_footprint},
    };
    std::vector<int> only;
    for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));

    bool all = true;
    for (const auto& cr : criteria) {
        if (!only.empty() && std::find(only.begin(), only.end(), cr.id) == only.end()) continue;
        Checker c;
        const auto start = Clock::now();
        try {
            cr.run(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        all = all && c.ok();
        std::cout << (c.ok() ? "PASS" : "FAIL") << " criterion " << cr.id << " (" << cr.name << ", "
                  << fmt("%.1f s", seconds_since(start)) << "): " << c.summary() << std::endl;
    }
    return all ? 0 : 1;
}
