#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "patlake/optimizer.hpp"

namespace patlake {

/// Token-wise alignment of a column. Slot j of row i holds the token text value i
/// contributes to slot j, or "" for a gap.
struct AlignedColumn {
    std::vector<TokenKind> slots;               // kind of each slot's first occupant
    std::vector<std::vector<std::string>> cells;  // rows x slots

    std::size_t width() const { return slots.size(); }
    std::size_t rows() const { return cells.size(); }
};

/// Greedy progressive alignment in row order (match 0, mismatch 1, gap 1).
/// Throws EmptyColumn.
AlignedColumn align(std::span<const std::string> values);

/// Row-wise concatenation of slots [begin, end).
std::vector<std::string> segment_column(const AlignedColumn& aligned, std::size_t begin, std::size_t end);

struct Segment {
    std::size_t begin = 0;  // slot range [begin, end)
    std::size_t end = 0;
    Hypothesis hypothesis;
};

struct Segmentation {
    std::vector<Segment> segments;
    Rational total_fpr = 0;  // sum of per-segment FPR_T

    /// Interior cut positions, ascending.
    std::vector<std::size_t> cuts() const;
    /// Segment patterns concatenated; a value conforms iff it matches this.
    Pattern combined(const Hierarchy& h) const;
};

/// FMDV-V: segmentation minimizing the summed FPR_T subject to sum <= r and
/// Cov_T >= m per segment. Segments span at most tau slots. Ties: fewer segments,
/// then lexicographically smaller cut positions. nullopt when infeasible.
std::optional<Segmentation> solve_fmdv_v(const AlignedColumn& aligned, const CorpusIndex& index,
                                         const Hierarchy& h, const SolverConfig& cfg);
std::optional<Segmentation> solve_fmdv_v(std::span<const std::string> values, const CorpusIndex& index,
                                         const Hierarchy& h, const SolverConfig& cfg);
/// Same, with a pool built in Validate mode.
std::optional<Segmentation> solve_fmdv_v(const AlignedColumn& aligned, const CandidatePool& pool, const Hierarchy& h);

/// Best single pattern for one segment (FMDV on the segment's values); nullopt if
/// infeasible, including segments with empty or over-budget values.
std::optional<Hypothesis> solve_segment(const AlignedColumn& aligned, std::size_t begin, std::size_t end,
                                        const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg);
std::optional<Hypothesis> solve_segment(const AlignedColumn& aligned, std::size_t begin, std::size_t end,
                                        const CandidatePool& pool, const Hierarchy& h);

}  // namespace patlake
