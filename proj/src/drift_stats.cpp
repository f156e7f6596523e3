#include "patlake/drift_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "patlake/error.hpp"

namespace patlake {

namespace {

using boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;

// Hypergeometric support for the (1,1) cell given the margins.
struct Margins {
    std::uint64_t r1, r2, c1, lo, hi;
};

Margins margins(const ContingencyTable2x2& t) {
    Margins m{t.a + t.b, t.c + t.d, t.a + t.c, 0, 0};
    m.lo = m.c1 > m.r2 ? m.c1 - m.r2 : 0;
    m.hi = std::min(m.r1, m.c1);
    return m;
}

// w(x) = C(r1, x) C(r2, c1 - x), built by exact ratio steps from x = lo.
double fisher_exact_integer(const ContingencyTable2x2& t) {
    const auto m = margins(t);
    auto binom = [](std::uint64_t n, std::uint64_t k) {
        cpp_int r = 1;
        for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
        return r;
    };
    std::vector<cpp_int> w;
    w.reserve(m.hi - m.lo + 1);
    w.push_back(binom(m.r1, m.lo) * binom(m.r2, m.c1 - m.lo));
    for (std::uint64_t x = m.lo; x < m.hi; ++x)
        w.push_back(w.back() * ((m.r1 - x) * (m.c1 - x)) / ((x + 1) * (m.r2 - m.c1 + x + 1)));
    const cpp_int& obs = w[t.a - m.lo];
    cpp_int le = 0, all = 0;
    for (const auto& v : w) {
        all += v;
        if (v <= obs) le += v;
    }
    return static_cast<double>(cpp_bin_float_50(le) / cpp_bin_float_50(all));
}

double fisher_exact_float(const ContingencyTable2x2& t) {
    const auto m = margins(t);
    std::vector<long double> lw;
    lw.reserve(m.hi - m.lo + 1);
    lw.push_back(0);
    for (std::uint64_t x = m.lo; x < m.hi; ++x)
        lw.push_back(lw.back() + std::log((long double)(m.r1 - x)) + std::log((long double)(m.c1 - x)) -
                     std::log((long double)(x + 1)) - std::log((long double)(m.r2 - m.c1 + x + 1)));
    const long double top = *std::max_element(lw.begin(), lw.end());
    const long double obs = lw[t.a - m.lo];
    long double le = 0, all = 0;
    for (auto v : lw) {
        const long double p = std::exp(v - top);
        all += p;
        if (v <= obs + 1e-12L * std::max(1.0L, std::fabs(obs))) le += p;
    }
    return static_cast<double>(std::min(1.0L, le / all));
}

}  // namespace

void validate_table(const ContingencyTable2x2& t) {
    if (t.a + t.b == 0 || t.c + t.d == 0)
        throw Error(ErrorCode::InvalidArgument, "contingency table rows must be non-empty");
}

bool degenerate_margins(const ContingencyTable2x2& t) { return t.a + t.c == 0 || t.b + t.d == 0; }

double fisher_exact(const ContingencyTable2x2& t) {
    validate_table(t);
    if (degenerate_margins(t)) return 1;
    const double p = t.total() <= kFisherExactLimit ? fisher_exact_integer(t) : fisher_exact_float(t);
    return std::clamp(p, 0.0, 1.0);
}

double chi_squared_yates_statistic(const ContingencyTable2x2& t) {
    validate_table(t);
    if (degenerate_margins(t)) return 0;
    const cpp_bin_float_50 a(t.a), b(t.b), c(t.c), d(t.d);
    const cpp_bin_float_50 n = a + b + c + d;
    cpp_bin_float_50 diff = abs(a * d - b * c) - n / 2;
    if (diff < 0) diff = 0;
    const cpp_bin_float_50 stat = n * diff * diff / ((a + b) * (c + d) * (a + c) * (b + d));
    return static_cast<double>(stat);
}

double chi_squared_yates(const ContingencyTable2x2& t) {
    const double x = chi_squared_yates_statistic(t);
    return std::clamp(std::erfc(std::sqrt(x / 2)), 0.0, 1.0);
}

const char* to_string(DriftTest t) { return t == DriftTest::Fisher ? "fisher" : "chi2"; }

DriftTest parse_drift_test(std::string_view text) {
    if (text == "fisher") return DriftTest::Fisher;
    if (text == "chi2") return DriftTest::ChiSquaredYates;
    throw Error(ErrorCode::InvalidArgument, "unknown test '" + std::string(text) + "' (expected fisher or chi2)");
}

DriftReport drift_report(const ContingencyTable2x2& t, double alpha, DriftTest test) {
    validate_table(t);
    if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");
    DriftReport r;
    r.table = t;
    r.theta_train = Rational(t.b, t.a + t.b);
    r.theta_test = Rational(t.d, t.c + t.d);
    r.test = test;
    r.alpha = alpha;
    r.p_value = test == DriftTest::Fisher ? fisher_exact(t) : chi_squared_yates(t);
    r.alarm = r.p_value < alpha && r.theta_test > r.theta_train;
    return r;
}

DriftReport drift_check(const ValidationProgram& program, std::span<const std::string> values, const Hierarchy& h,
                        double alpha, DriftTest test) {
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "empty column to validate");
    if (program.train_size == 0) throw Error(ErrorCode::InvalidArgument, "program has no training rows");
    const Rational bad = program.theta_train * program.train_size + Rational(1, 2);
    const auto train_bad = static_cast<std::uint64_t>(boost::multiprecision::numerator(bad) /
                                                      boost::multiprecision::denominator(bad));
    ContingencyTable2x2 t;
    t.b = std::min<std::uint64_t>(train_bad, program.train_size);
    t.a = program.train_size - t.b;
    t.d = count_nonconforming(values, program.combined(h), h);
    t.c = values.size() - t.d;
    auto r = drift_report(t, alpha, test);
    r.theta_train = program.theta_train;
    return r;
}

std::string format_report(const DriftReport& r) {
    char p[64], alpha[64];
    std::snprintf(p, sizeof p, "%.12g", r.p_value);
    std::snprintf(alpha, sizeof alpha, "%.12g", r.alpha);
    return "theta_train=" + to_string(r.theta_train) + "\ttheta_test=" + to_string(r.theta_test) +
           "\ttrain=" + std::to_string(r.table.a) + "/" + std::to_string(r.table.b) +
           "\ttest=" + std::to_string(r.table.c) + "/" + std::to_string(r.table.d) + "\tmethod=" + to_string(r.test) +
           "\tp_value=" + p + "\talpha=" + alpha + "\talarm=" + (r.alarm ? "1" : "0");
}

std::string summarize_report(const DriftReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %.4g%% non-conforming vs %.4g%% in training (%s p = %.3g, alpha = %g)",
                  r.alarm ? "DRIFT" : "ok", 100 * to_double(r.theta_test), 100 * to_double(r.theta_train),
                  to_string(r.test), r.p_value, r.alpha);
    return buf;
}

}  // namespace patlake
