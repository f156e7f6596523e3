#include "patlake/optimizer.hpp"

#include <algorithm>
#include <unordered_set>

#include "patlake/error.hpp"

namespace patlake {

namespace {

struct Distinct {
    std::vector<std::vector<Token>> tokens;
    std::size_t smallest = 0;  // index of the value with the smallest pattern space
    std::uint64_t smallest_bound = 0;

    bool enumerable(const PatternBudget& budget) const {
        return smallest_bound == 0 || smallest_bound - 1 <= budget.max_patterns;
    }
};

Distinct prepare(std::span<const std::string> values, const Hierarchy& h, const PatternBudget& budget,
                 bool require_enumerable) {
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "query column is empty");
    Distinct d;
    std::unordered_set<std::string_view> seen;
    std::uint64_t best = UINT64_MAX;
    for (const auto& v : values) {
        if (!seen.insert(v).second) continue;
        auto toks = tokenize(v);
        if (toks.size() >= budget.max_tokens)
            throw Error(ErrorCode::TokenBudgetExceeded,
                        "value has " + std::to_string(toks.size()) + " tokens (tau = " +
                            std::to_string(budget.max_tokens) + "); use vertical cuts");
        const auto bound = pattern_space_bound(toks, h);
        if (bound < best) {
            best = bound;
            d.smallest = d.tokens.size();
        }
        d.tokens.push_back(std::move(toks));
    }
    d.smallest_bound = best;
    if (require_enumerable && !d.enumerable(budget))
        throw Error(ErrorCode::TokenBudgetExceeded, "pattern space of every value exceeds the enumeration cap");
    return d;
}

bool in_all(const Pattern& p, const Distinct& d, const Hierarchy& h, bool skip_smallest = true) {
    for (std::size_t i = 0; i < d.tokens.size(); ++i)
        if ((i != d.smallest || !skip_smallest) && !in_pattern_space(p, d.tokens[i], h)) return false;
    return true;
}

// Non-trivial members of P(v_min), deduplicated by text.
template <class F>
void for_each_candidate(const Distinct& d, const Hierarchy& h, F&& f) {
    std::unordered_set<std::string> seen;
    enumerate_patterns(d.tokens[d.smallest], h, [&](const Pattern& p) {
        if (p.is_trivial(h)) return;
        auto text = to_text(p, h);
        if (!seen.insert(text).second) return;
        f(p, std::move(text));
    });
}

}  // namespace

void validate_config(const SolverConfig& cfg) {
    if (cfg.r < 0 || cfg.r > 1) throw Error(ErrorCode::InvalidArgument, "r must lie in [0, 1]");
    if (cfg.m < 1) throw Error(ErrorCode::InvalidArgument, "m must be at least 1");
}

bool better(const Hypothesis& a, const Hypothesis& b, Mode mode) {
    if (mode == Mode::Validate) {
        if (a.fpr_exact != b.fpr_exact) return a.fpr_exact < b.fpr_exact;
        if (a.cov != b.cov) return a.cov < b.cov;
    } else {
        if (a.cov != b.cov) return a.cov < b.cov;
        if (a.fpr_exact != b.fpr_exact) return a.fpr_exact < b.fpr_exact;
    }
    return a.text < b.text;
}

bool feasible(const Hypothesis& hyp, const SolverConfig& cfg) { return hyp.fpr_exact <= cfg.r && hyp.cov >= cfg.m; }

std::vector<Pattern> hypothesis_space(std::span<const std::string> values, const Hierarchy& h,
                                      const PatternBudget& budget) {
    const auto d = prepare(values, h, budget, true);
    std::vector<std::pair<std::string, Pattern>> kept;
    for_each_candidate(d, h, [&](const Pattern& p, std::string text) {
        if (in_all(p, d, h)) kept.emplace_back(std::move(text), p);
    });
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Pattern> out;
    out.reserve(kept.size());
    for (auto& kv : kept) out.push_back(std::move(kv.second));
    return out;
}

CandidatePool::CandidatePool(const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg)
    : index_(&index), cfg_(cfg) {
    validate_config(cfg);
    index.require_hierarchy(h);
    const auto trivial = to_text(Pattern::trivial(h), h);
    for (const auto& [text, e] : index.entries()) {
        if (e.cov_count < cfg.m || text == trivial) continue;
        Hypothesis hyp{Pattern{}, text, e.fpr(), 0, e.cov_count};
        if (hyp.fpr_exact > cfg.r) continue;
        hyp.fpr = to_double(hyp.fpr_exact);
        candidates_.push_back(std::move(hyp));
    }
    std::sort(candidates_.begin(), candidates_.end(),
              [&](const Hypothesis& a, const Hypothesis& b) { return better(a, b, cfg.mode); });
    for (auto& c : candidates_) c.pattern = parse_pattern(c.text, h);
}

bool has_indexed_hypothesis(std::span<const std::string> values, const CorpusIndex& index, const Hierarchy& h) {
    index.require_hierarchy(h);
    const auto d = prepare(values, h, index.config().budget, false);
    const auto trivial = to_text(Pattern::trivial(h), h);
    for (const auto& entry : index.entries())
        if (entry.first != trivial && in_all(parse_pattern(entry.first, h), d, h, false)) return true;
    return false;
}

namespace {

std::vector<Hypothesis> rank_enumerated(const Distinct& d, const CorpusIndex& index, const Hierarchy& h,
                                        const SolverConfig& cfg, std::size_t top_k) {
    // Index lookups and constraint checks are cheap; membership in the other
    // values' pattern spaces is checked lazily in solver order.
    std::vector<Hypothesis> candidates;
    for_each_candidate(d, h, [&](const Pattern& p, std::string text) {
        const IndexEntry* e = index.find(text);
        if (!e || e->cov_count < cfg.m) return;
        Hypothesis hyp{p, std::move(text), e->fpr(), 0, e->cov_count};
        if (!feasible(hyp, cfg)) return;
        hyp.fpr = to_double(hyp.fpr_exact);
        candidates.push_back(std::move(hyp));
    });
    std::sort(candidates.begin(), candidates.end(),
              [&](const Hypothesis& a, const Hypothesis& b) { return better(a, b, cfg.mode); });
    std::vector<Hypothesis> out;
    for (auto& c : candidates) {
        if (!in_all(c.pattern, d, h)) continue;
        out.push_back(std::move(c));
        if (out.size() == top_k) break;
    }
    return out;
}

std::vector<Hypothesis> rank_scanned(const Distinct& d, const CandidatePool& pool, const Hierarchy& h,
                                     std::size_t top_k) {
    std::vector<Hypothesis> out;
    for (const auto& c : pool.candidates()) {
        if (!in_all(c.pattern, d, h, false)) continue;
        out.push_back(c);
        if (out.size() == top_k) break;
    }
    return out;
}

}  // namespace

std::vector<Hypothesis> rank_hypotheses(std::span<const std::string> values, const CorpusIndex& index,
                                        const Hierarchy& h, const SolverConfig& cfg, std::size_t top_k,
                                        SpaceMethod method) {
    validate_config(cfg);
    index.require_hierarchy(h);
    if (top_k == 0) return {};
    const auto& budget = index.config().budget;
    const auto d = prepare(values, h, budget, method == SpaceMethod::Enumerate);
    if (method == SpaceMethod::Auto)
        method = d.enumerable(budget) && d.smallest_bound <= index.size() ? SpaceMethod::Enumerate
                                                                           : SpaceMethod::IndexScan;
    if (method == SpaceMethod::Enumerate) return rank_enumerated(d, index, h, cfg, top_k);
    return rank_scanned(d, CandidatePool(index, h, cfg), h, top_k);
}

std::vector<Hypothesis> rank_hypotheses(std::span<const std::string> values, const CandidatePool& pool,
                                        const Hierarchy& h, std::size_t top_k, SpaceMethod method) {
    pool.index().require_hierarchy(h);
    if (top_k == 0) return {};
    const auto& budget = pool.index().config().budget;
    const auto d = prepare(values, h, budget, method == SpaceMethod::Enumerate);
    if (method == SpaceMethod::Auto)
        method = d.enumerable(budget) && d.smallest_bound <= pool.size() ? SpaceMethod::Enumerate
                                                                          : SpaceMethod::IndexScan;
    if (method == SpaceMethod::Enumerate) return rank_enumerated(d, pool.index(), h, pool.config(), top_k);
    return rank_scanned(d, pool, h, top_k);
}

std::optional<Hypothesis> solve(std::span<const std::string> values, const CandidatePool& pool, const Hierarchy& h) {
    auto best = rank_hypotheses(values, pool, h, 1);
    if (best.empty()) return std::nullopt;
    return std::move(best.front());
}

std::optional<Hypothesis> solve_fmdv(std::span<const std::string> values, const CorpusIndex& index,
                                     const Hierarchy& h, const SolverConfig& cfg) {
    if (cfg.mode != Mode::Validate) throw Error(ErrorCode::InvalidArgument, "solve_fmdv requires Validate mode");
    auto best = rank_hypotheses(values, index, h, cfg, 1);
    if (best.empty()) return std::nullopt;
    return std::move(best.front());
}

std::optional<Hypothesis> solve_cmdt(std::span<const std::string> values, const CorpusIndex& index,
                                     const Hierarchy& h, const SolverConfig& cfg) {
    if (cfg.mode != Mode::Tag) throw Error(ErrorCode::InvalidArgument, "solve_cmdt requires Tag mode");
    auto best = rank_hypotheses(values, index, h, cfg, 1);
    if (best.empty()) return std::nullopt;
    return std::move(best.front());
}

}  // namespace patlake
