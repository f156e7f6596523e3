#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "patlake/horizontal_cuts.hpp"

namespace patlake {

/// Rows: training, test. Columns: conforming, non-conforming.
struct ContingencyTable2x2 {
    std::uint64_t a = 0;  // train conforming
    std::uint64_t b = 0;  // train non-conforming
    std::uint64_t c = 0;  // test conforming
    std::uint64_t d = 0;  // test non-conforming

    std::uint64_t total() const { return a + b + c + d; }
    friend bool operator==(const ContingencyTable2x2&, const ContingencyTable2x2&) = default;
};

/// Throws InvalidArgument unless both rows are non-empty.
void validate_table(const ContingencyTable2x2& t);

/// True when a column margin is zero; both tests then report p = 1.
bool degenerate_margins(const ContingencyTable2x2& t);

/// Two-sided Fisher exact test: total probability of same-margin tables no more
/// likely than the observed one. Exact integer weights up to `kFisherExactLimit`
/// observations, a long-double ratio recurrence beyond.
inline constexpr std::uint64_t kFisherExactLimit = 20000;
double fisher_exact(const ContingencyTable2x2& t);

/// N (max(0, |ad - bc| - N/2))^2 / ((a+b)(c+d)(a+c)(b+d)); 0 for degenerate margins.
double chi_squared_yates_statistic(const ContingencyTable2x2& t);
/// Survival function of chi-squared with 1 dof: erfc(sqrt(x/2)).
double chi_squared_yates(const ContingencyTable2x2& t);

enum class DriftTest { Fisher, ChiSquaredYates };
const char* to_string(DriftTest t);
/// Accepts "fisher" and "chi2".
DriftTest parse_drift_test(std::string_view text);

inline constexpr double kDefaultAlpha = 0.01;

struct DriftReport {
    Rational theta_train = 0;
    Rational theta_test = 0;
    ContingencyTable2x2 table;
    DriftTest test = DriftTest::Fisher;
    double p_value = 1;
    double alpha = kDefaultAlpha;
    /// p_value < alpha and theta_test > theta_train.
    bool alarm = false;
};

/// Training counts come from the program (theta_train * train_size, rounded half up);
/// test counts from matching `values` against the program. Throws EmptyColumn.
DriftReport drift_check(const ValidationProgram& program, std::span<const std::string> values, const Hierarchy& h,
                        double alpha = kDefaultAlpha, DriftTest test = DriftTest::Fisher);

/// Report from an explicit table.
DriftReport drift_report(const ContingencyTable2x2& t, double alpha = kDefaultAlpha,
                         DriftTest test = DriftTest::Fisher);

/// One tab-separated line of key=value fields.
std::string format_report(const DriftReport& r);
/// One sentence for people.
std::string summarize_report(const DriftReport& r);

}  // namespace patlake
