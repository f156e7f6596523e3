#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patlake/corpus_index.hpp"

namespace patlake {

enum class Mode { Validate, Tag };

struct SolverConfig {
    /// Max FPR_T (Validate) or FNR_T (Tag).
    Rational r = Rational(1, 1000);
    /// Min Cov_T.
    std::uint64_t m = 100;
    Mode mode = Mode::Validate;

    friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

/// A candidate pattern with its index statistics. In Tag mode `fpr` is FNR_T.
struct Hypothesis {
    Pattern pattern;
    std::string text;
    Rational fpr_exact;
    double fpr = 0;
    std::uint64_t cov = 0;

    friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// Throws InvalidArgument unless 0 <= r <= 1 and m >= 1.
void validate_config(const SolverConfig& cfg);

/// Solver order. Validate: (FPR, Cov, text). Tag: (Cov, FNR, text).
bool better(const Hypothesis& a, const Hypothesis& b, Mode mode);

bool feasible(const Hypothesis& hyp, const SolverConfig& cfg);

/// True iff some indexed non-trivial pattern lies in P(v) for every v in C.
bool has_indexed_hypothesis(std::span<const std::string> values, const CorpusIndex& index, const Hierarchy& h);

/// H(C): patterns in P(v) for every v in C, minus the trivial pattern, sorted by text.
/// Throws TokenBudgetExceeded if some value is outside the budget, EmptyColumn if C is empty.
std::vector<Pattern> hypothesis_space(std::span<const std::string> values, const Hierarchy& h,
                                      const PatternBudget& budget = {});
inline std::vector<Pattern> hypothesis_space(const Column& c, const Hierarchy& h, const PatternBudget& budget = {}) {
    return hypothesis_space(c.values, h, budget);
}

/// How rank_hypotheses finds H(C) members. Enumerate walks P(v) of the value
/// with the smallest pattern space (throws TokenBudgetExceeded above the cap);
/// IndexScan tests every indexed pattern for membership. Both give the same
/// result, since an unindexed pattern has Cov_T = 0. Auto enumerates when
/// that space is within the cap and no larger than the index.
enum class SpaceMethod { Auto, Enumerate, IndexScan };

/// Indexed non-trivial patterns meeting the r and m constraints, in solver
/// order. Reusable across queries against the same index and config.
class CandidatePool {
public:
    CandidatePool(const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg);

    const CorpusIndex& index() const { return *index_; }
    const SolverConfig& config() const { return cfg_; }
    const std::vector<Hypothesis>& candidates() const { return candidates_; }
    std::size_t size() const { return candidates_.size(); }

private:
    const CorpusIndex* index_;
    SolverConfig cfg_;
    std::vector<Hypothesis> candidates_;
};

/// Up to `top_k` feasible members of H(C) in solver order. Uses the index's tau
/// and requires the index to have been built with `h`.
std::vector<Hypothesis> rank_hypotheses(std::span<const std::string> values, const CorpusIndex& index,
                                        const Hierarchy& h, const SolverConfig& cfg, std::size_t top_k,
                                        SpaceMethod method = SpaceMethod::Auto);
std::vector<Hypothesis> rank_hypotheses(std::span<const std::string> values, const CandidatePool& pool,
                                        const Hierarchy& h, std::size_t top_k, SpaceMethod method = SpaceMethod::Auto);
inline std::vector<Hypothesis> rank_hypotheses(const Column& c, const CorpusIndex& index, const Hierarchy& h,
                                               const SolverConfig& cfg, std::size_t top_k,
                                               SpaceMethod method = SpaceMethod::Auto) {
    return rank_hypotheses(c.values, index, h, cfg, top_k, method);
}

/// FMDV: min FPR_T subject to FPR_T <= r and Cov_T >= m. nullopt when infeasible.
std::optional<Hypothesis> solve_fmdv(std::span<const std::string> values, const CorpusIndex& index,
                                     const Hierarchy& h, const SolverConfig& cfg);
/// CMDT: min Cov_T subject to FNR_T <= r and Cov_T >= m. nullopt when infeasible.
std::optional<Hypothesis> solve_cmdt(std::span<const std::string> values, const CorpusIndex& index,
                                     const Hierarchy& h, const SolverConfig& cfg);

/// FMDV or CMDT per the pool's mode.
std::optional<Hypothesis> solve(std::span<const std::string> values, const CandidatePool& pool, const Hierarchy& h);

inline std::optional<Hypothesis> solve_fmdv(const Column& c, const CorpusIndex& index, const Hierarchy& h,
                                            const SolverConfig& cfg) {
    return solve_fmdv(c.values, index, h, cfg);
}
inline std::optional<Hypothesis> solve_cmdt(const Column& c, const CorpusIndex& index, const Hierarchy& h,
                                            const SolverConfig& cfg) {
    return solve_cmdt(c.values, index, h, cfg);
}

}  // namespace patlake
