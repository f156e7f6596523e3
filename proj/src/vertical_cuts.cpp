#include "patlake/vertical_cuts.hpp"

#include <algorithm>
#include <limits>

#include "patlake/error.hpp"

namespace patlake {

AlignedColumn align(std::span<const std::string> values) {
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "cannot align an empty column");
    AlignedColumn out;
    for (const auto& v : values) {
        const auto tokens = tokenize(v);
        const std::size_t k = tokens.size(), n = out.slots.size();
        // cost[i][j]: first i tokens against first j slots.
        std::vector<std::vector<std::uint32_t>> cost(k + 1, std::vector<std::uint32_t>(n + 1, 0));
        for (std::size_t i = 0; i <= k; ++i)
            for (std::size_t j = 0; j <= n; ++j) {
                if (i == 0 || j == 0) {
                    cost[i][j] = static_cast<std::uint32_t>(i + j);
                    continue;
                }
                const std::uint32_t diag = cost[i - 1][j - 1] + (tokens[i - 1].kind == out.slots[j - 1] ? 0 : 1);
                cost[i][j] = std::min({diag, cost[i][j - 1] + 1, cost[i - 1][j] + 1});
            }
        // Trace back; on ties prefer diagonal, then a gap in the value, then a new slot.
        std::vector<std::string> row;
        std::vector<std::size_t> new_slots;  // positions (in the final template) of inserted slots
        std::vector<std::pair<int, std::size_t>> ops;  // 0 diag, 1 value gap, 2 insert; token index
        std::size_t i = k, j = n;
        while (i > 0 || j > 0) {
            if (i > 0 && j > 0 &&
                cost[i][j] == cost[i - 1][j - 1] + (tokens[i - 1].kind == out.slots[j - 1] ? 0 : 1)) {
                ops.emplace_back(0, --i);
                --j;
            } else if (j > 0 && cost[i][j] == cost[i][j - 1] + 1) {
                ops.emplace_back(1, 0);
                --j;
            } else {
                ops.emplace_back(2, --i);
            }
        }
        std::reverse(ops.begin(), ops.end());
        std::vector<TokenKind> slots;
        for (auto [op, t] : ops) {
            const std::size_t pos = slots.size();
            if (op == 0) {
                slots.push_back(out.slots[pos - new_slots.size()]);
                row.push_back(tokens[t].text);
            } else if (op == 1) {
                slots.push_back(out.slots[pos - new_slots.size()]);
                row.emplace_back();
            } else {
                slots.push_back(tokens[t].kind);
                row.push_back(tokens[t].text);
                new_slots.push_back(pos);
            }
        }
        for (auto& prev : out.cells)
            for (std::size_t pos : new_slots) prev.insert(prev.begin() + static_cast<std::ptrdiff_t>(pos), std::string());
        out.slots = std::move(slots);
        out.cells.push_back(std::move(row));
    }
    return out;
}

std::vector<std::string> segment_column(const AlignedColumn& aligned, std::size_t begin, std::size_t end) {
    if (begin > end || end > aligned.width())
        throw Error(ErrorCode::InvalidArgument, "segment bounds out of range");
    std::vector<std::string> out;
    out.reserve(aligned.rows());
    for (const auto& row : aligned.cells) {
        std::string v;
        for (std::size_t j = begin; j < end; ++j) v += row[j];
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<std::size_t> Segmentation::cuts() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < segments.size(); ++i) out.push_back(segments[i].begin);
    return out;
}

Pattern Segmentation::combined(const Hierarchy&) const {
    std::vector<Pattern> parts;
    for (const auto& s : segments) parts.push_back(s.hypothesis.pattern);
    return concatenate(parts);
}

namespace {

SolverConfig validate_mode(SolverConfig cfg) {
    cfg.mode = Mode::Validate;
    return cfg;
}

}  // namespace

std::optional<Hypothesis> solve_segment(const AlignedColumn& aligned, std::size_t begin, std::size_t end,
                                        const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg) {
    return solve_segment(aligned, begin, end, CandidatePool(index, h, validate_mode(cfg)), h);
}

std::optional<Hypothesis> solve_segment(const AlignedColumn& aligned, std::size_t begin, std::size_t end,
                                        const CandidatePool& pool, const Hierarchy& h) {
    if (pool.config().mode != Mode::Validate) throw Error(ErrorCode::InvalidArgument, "segments are solved with FMDV");
    const auto values = segment_column(aligned, begin, end);
    try {
        return solve(values, pool, h);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TokenBudgetExceeded) return std::nullopt;
        throw;
    }
}

namespace {

struct Best {
    Rational cost;
    std::size_t segments = 0;
    std::vector<std::size_t> cuts;
};

bool less(const Best& a, const Best& b) {
    if (a.cost != b.cost) return a.cost < b.cost;
    if (a.segments != b.segments) return a.segments < b.segments;
    return a.cuts < b.cuts;
}

}  // namespace

std::optional<Segmentation> solve_fmdv_v(const AlignedColumn& aligned, const CorpusIndex& index,
                                         const Hierarchy& h, const SolverConfig& cfg) {
    validate_config(cfg);
    index.require_hierarchy(h);
    if (aligned.width() == 0) return std::nullopt;
    return solve_fmdv_v(aligned, CandidatePool(index, h, validate_mode(cfg)), h);
}

std::optional<Segmentation> solve_fmdv_v(const AlignedColumn& aligned, const CandidatePool& pool,
                                         const Hierarchy& h) {
    const auto& index = pool.index();
    const auto& cfg = pool.config();
    const std::size_t n = aligned.width();
    if (n == 0) return std::nullopt;
    const std::size_t tau = index.config().budget.max_tokens;

    // single[b][e] / best[b][e] over slot spans [b, e).
    std::vector<std::vector<std::optional<Hypothesis>>> single(n + 1, std::vector<std::optional<Hypothesis>>(n + 1));
    std::vector<std::vector<std::optional<Best>>> best(n + 1, std::vector<std::optional<Best>>(n + 1));
    for (std::size_t len = 1; len <= n; ++len) {
        for (std::size_t b = 0; b + len <= n; ++b) {
            const std::size_t e = b + len;
            std::optional<Best> cur;
            if (len <= tau) {
                single[b][e] = solve_segment(aligned, b, e, pool, h);
                if (single[b][e]) cur = Best{single[b][e]->fpr_exact, 1, {}};
            }
            for (std::size_t t = b + 1; t < e; ++t) {
                const auto& l = best[b][t];
                const auto& r = best[t][e];
                if (!l || !r) continue;
                Best cand{l->cost + r->cost, l->segments + r->segments, l->cuts};
                cand.cuts.push_back(t);
                cand.cuts.insert(cand.cuts.end(), r->cuts.begin(), r->cuts.end());
                if (!cur || less(cand, *cur)) cur = std::move(cand);
            }
            best[b][e] = std::move(cur);
        }
    }
    const auto& top = best[0][n];
    if (!top || top->cost > cfg.r) return std::nullopt;

    Segmentation out;
    out.total_fpr = top->cost;
    std::size_t b = 0;
    auto bounds = top->cuts;
    bounds.push_back(n);
    for (std::size_t e : bounds) {
        out.segments.push_back(Segment{b, e, *single[b][e]});
        b = e;
    }
    return out;
}

std::optional<Segmentation> solve_fmdv_v(std::span<const std::string> values, const CorpusIndex& index,
                                         const Hierarchy& h, const SolverConfig& cfg) {
    return solve_fmdv_v(align(values), index, h, cfg);
}

}  // namespace patlake
