#pragma once

#include <string>
#include <vector>

#include "oracles/planted.hpp"
#include "patlake/horizontal_cuts.hpp"

namespace patlake::testing {

// FMDV-H constraints recomputed from scratch on the original column.
// Returns the first violated constraint, or an empty string.
inline std::string program_violation(const ValidationProgram& p, const std::vector<std::string>& values,
                                     const CorpusIndex& idx, const Hierarchy& h, const SolverConfig& cfg,
                                     const ToleranceConfig& tol) {
    if (p.patterns.size() != 1) return "expected one pattern";
    const auto pat = parse_pattern(p.patterns[0], h);
    if (to_text(pat, h) == to_text(Pattern::trivial(h), h)) return "trivial pattern";
    std::uint64_t members = 0, matching = 0;
    for (const auto& v : values) {
        members += in_pattern_space(pat, v, h);
        matching += matches(pat, v, h);
    }
    if (members < 1) return "no value has the pattern in its space";
    if (Rational(members) < (1 - tol.theta) * values.size()) return "too few values in the pattern space";
    const auto stats = idx.lookup(p.patterns[0]);
    if (!stats) return "pattern not indexed";
    if (stats->fpr_exact > cfg.r) return "FPR above r";
    if (stats->fpr_exact != p.fpr) return "program FPR differs from the index";
    if (stats->cov < cfg.m) return "coverage below m";
    if (p.theta_train != Rational(values.size() - matching, values.size())) return "theta_train miscounted";
    if (p.theta_train > tol.theta) return "theta_train above tolerance";
    if (p.train_size != values.size()) return "train_size differs";
    return {};
}

inline const std::string kCommas = "<digit>+,<digit>+,<digit>+,<digit>+,<digit>+";

inline Generator digit_commas() {
    return {{run(kDigit, 1, 3), lit(","), run(kDigit, 1, 3), lit(","), run(kDigit, 1, 3), lit(","), run(kDigit, 1, 3),
             lit(","), run(kDigit, 1, 3)}};
}

// Nine-token values are above the per-value enumeration cap, so the corpus
// statistics for this fixture are given directly.
inline CorpusIndex digit_commas_index(const Hierarchy& h) {
    CorpusIndex idx(IndexConfig{h.fingerprint(), PatternBudget{}, 1000});
    idx.set_column_count(100000);
    auto add = [&](const std::string& text, std::uint64_t cov, Rational fpr) {
        IndexEntry e;
        e.cov_count = cov;
        e.impurity_sum = ImpuritySum(Rational(fpr * cov));
        idx.insert(text, e);
    };
    add(kCommas, 800, 0);
    add("<num>+,<num>+,<num>+,<num>+,<num>+", 800, 0);
    add("<alnum>+,<alnum>+,<alnum>+,<alnum>+,<alnum>+", 2000, Rational(5, 100));
    add("<hex>+,<hex>+,<hex>+,<hex>+,<hex>+", 1200, Rational(2, 100));
    add("<digit>+<sym>{1}<digit>+<sym>{1}<digit>+<sym>{1}<digit>+<sym>{1}<digit>+", 900, Rational(3, 100));
    add("<digit>{1},<digit>{1},<digit>{1},<digit>{1},<digit>{1}", 300, 0);
    add("<digit>+,<digit>+,<digit>+", 3000, 0);
    add("-", 5000, Rational(40, 100));
    add("<sym>{1}", 9000, Rational(60, 100));
    add("<any>+", 100000, Rational(90, 100));
    return idx;
}

}  // namespace patlake::testing
