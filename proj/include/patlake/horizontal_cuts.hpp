#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "patlake/vertical_cuts.hpp"

namespace patlake {

struct ToleranceConfig {
    /// Max fraction of non-conforming values, 0 <= theta < 1.
    Rational theta = Rational(1, 20);
};

/// Throws InvalidArgument unless 0 <= theta < 1.
void validate_tolerance(const ToleranceConfig& tol);

enum class Strategy { Basic, Horizontal, Vertical, HorizontalVertical };

const char* to_string(Strategy s);
/// Accepts "basic", "horizontal", "vertical", "horizontal-vertical".
Strategy parse_strategy(std::string_view text);

/// A learned validation rule plus its training statistics.
struct ValidationProgram {
    Strategy strategy = Strategy::Basic;
    /// One pattern text, or one per segment for vertical programs.
    std::vector<std::string> patterns;
    /// Objective: FPR_T of the pattern, or the summed per-segment FPR_T.
    Rational fpr = 0;
    /// Fraction of training values that do not conform.
    Rational theta_train = 0;
    std::uint64_t train_size = 0;
    SolverConfig cfg;
    Rational tolerance = Rational(1, 20);
    std::size_t tau = PatternBudget{}.max_tokens;
    std::uint64_t hierarchy_fingerprint = 0;

    /// Segment patterns concatenated. Throws FingerprintMismatch for a foreign hierarchy.
    Pattern combined(const Hierarchy& h) const;

    friend bool operator==(const ValidationProgram&, const ValidationProgram&) = default;
};

/// Values grouped by coarse token-kind sequence, in greedy removal order:
/// ascending size, ties by kind sequence. Each group lists value positions.
std::vector<std::vector<std::size_t>> outlier_groups(std::span<const std::string> values);

/// FMDV-H. Greedily removes the smallest token-sequence groups, at most
/// floor(theta |C|) values in total, and keeps the best FMDV result over the
/// removal steps (ties: fewer removals). `removed`, if given, receives the cut
/// value positions, ascending. nullopt when every step is infeasible; throws
/// ToleranceExceeded when no step has a non-empty hypothesis space.
std::optional<ValidationProgram> solve_fmdv_h(std::span<const std::string> values, const CorpusIndex& index,
                                              const Hierarchy& h, const SolverConfig& cfg,
                                              const ToleranceConfig& tol, std::vector<std::size_t>* removed = nullptr);

/// Basic FMDV when H(C) is non-empty and within budget. Otherwise the same
/// greedy removal steps as solve_fmdv_h, each solved with FMDV if the remainder
/// has a common pattern and with FMDV-V otherwise; the cheapest step wins
/// (ties: fewer removals).
std::optional<ValidationProgram> solve_auto(std::span<const std::string> values, const CorpusIndex& index,
                                            const Hierarchy& h, const SolverConfig& cfg, const ToleranceConfig& tol,
                                            std::vector<std::size_t>* removed = nullptr);

/// Program from a single pattern or a segmentation, with theta_train measured on `values`.
ValidationProgram make_program(Strategy strategy, const Hypothesis& hyp, std::span<const std::string> values,
                               const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg,
                               const ToleranceConfig& tol);
ValidationProgram make_program(Strategy strategy, const Segmentation& seg, std::span<const std::string> values,
                               const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg,
                               const ToleranceConfig& tol);

/// Number of values not matching the program's combined pattern.
std::uint64_t count_nonconforming(std::span<const std::string> values, const Pattern& combined, const Hierarchy& h);

/// theta_C: non-conforming fraction. Throws EmptyColumn.
Rational conforming_ratio(std::span<const std::string> values, const ValidationProgram& program, const Hierarchy& h);

/// Versioned text form ("PATLAKE-PROGRAM v1").
std::string serialize_program(const ValidationProgram& program);
ValidationProgram parse_program(std::string_view text);
void save_program(const ValidationProgram& program, const std::filesystem::path& path);
ValidationProgram load_program(const std::filesystem::path& path);

}  // namespace patlake
