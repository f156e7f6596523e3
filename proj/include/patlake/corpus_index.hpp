#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "patlake/hierarchy.hpp"
#include "patlake/ingest.hpp"
#include "patlake/pattern.hpp"
#include "patlake/rational.hpp"

namespace patlake {

/// Exact sum of fractions. Terms sharing the first denominator seen are kept as
/// one integer numerator (columns usually share a size), others as a rational.
class ImpuritySum {
public:
    ImpuritySum() = default;
    ImpuritySum(const Rational& r) { add(r); }
    ImpuritySum(const ImpuritySum& o) : num_(o.num_), den_(o.den_), rest_(o.rest_ ? new Rational(*o.rest_) : nullptr) {}
    ImpuritySum(ImpuritySum&&) noexcept = default;
    ImpuritySum& operator=(ImpuritySum o) noexcept {
        num_ = o.num_;
        den_ = o.den_;
        rest_ = std::move(o.rest_);
        return *this;
    }

    void add(std::uint64_t num, std::uint64_t den);
    void add(const Rational& r);
    ImpuritySum& operator+=(const ImpuritySum& o);

    Rational value() const;
    bool is_zero() const { return num_ == 0 && !rest_; }
    /// value() as "num/den" in lowest terms.
    std::string to_string() const;

    friend bool operator==(const ImpuritySum& a, const ImpuritySum& b) { return a.value() == b.value(); }

private:
    std::uint64_t num_ = 0;
    std::uint64_t den_ = 0;
    std::unique_ptr<Rational> rest_;
};

/// Aggregates for one pattern over the corpus columns it covers.
struct IndexEntry {
    std::uint64_t cov_count = 0;  // columns with at least one matching value
    ImpuritySum impurity_sum;     // sum of Imp_D(p) over those columns

    /// FPR_T (or FNR_T): mean impurity over covered columns.
    Rational fpr() const { return cov_count ? impurity_sum.value() / cov_count : Rational(0); }

    friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

/// Settings that must agree for two indexes to be merged or compared.
struct IndexConfig {
    std::uint64_t hierarchy_fingerprint = 0;
    PatternBudget budget;
    std::size_t sample_rows = 1000;

    friend bool operator==(const IndexConfig&, const IndexConfig&) = default;
};

struct PatternStats {
    Rational fpr_exact;
    double fpr = 0;
    std::uint64_t cov = 0;
};

/// Pattern-keyed summary statistics of a corpus. Immutable once built.
class CorpusIndex {
public:
    using EntryMap = std::unordered_map<std::string, IndexEntry>;

    CorpusIndex() = default;
    explicit CorpusIndex(IndexConfig config) : config_(config) {}

    const IndexConfig& config() const { return config_; }
    std::uint64_t column_count() const { return column_count_; }
    std::size_t size() const { return entries_.size(); }
    const EntryMap& entries() const { return entries_; }

    /// Entries sorted by pattern text.
    std::vector<std::pair<std::string, IndexEntry>> sorted_entries() const;

    const IndexEntry* find(std::string_view pattern_text) const;
    /// FPR_T and Cov_T of a stored pattern; nullopt when absent (Cov_T = 0).
    std::optional<PatternStats> lookup(std::string_view pattern_text) const;
    std::optional<PatternStats> lookup(const Pattern& p, const Hierarchy& h) const {
        return lookup(to_text(p, h));
    }

    /// Throws FingerprintMismatch unless built with `h`.
    void require_hierarchy(const Hierarchy& h) const;

    /// Adds one column's per-pattern impurities (as produced by `column_impurities`).
    void add_column(const std::vector<std::pair<std::string, Rational>>& impurities);

    /// Adds one column's statistics for one pattern: `misses` of `total` values fail it.
    /// Call `count_column()` once per column.
    void add_raw(const std::string& pattern_text, std::uint64_t misses, std::uint64_t total);
    void count_column() { ++column_count_; }

    /// Field-wise sum; both indexes must share a config.
    void merge_from(const CorpusIndex& other);

    friend bool operator==(const CorpusIndex& a, const CorpusIndex& b) {
        return a.config_ == b.config_ && a.column_count_ == b.column_count_ && a.entries_ == b.entries_;
    }

    /// Used by the loader.
    void set_column_count(std::uint64_t n) { column_count_ = n; }
    void insert(std::string pattern_text, IndexEntry entry) { entries_.insert_or_assign(std::move(pattern_text), std::move(entry)); }

private:
    IndexConfig config_;
    std::uint64_t column_count_ = 0;
    EntryMap entries_;
};

/// P(D): union of P(v) over values within the budget, sorted by text.
std::vector<Pattern> column_patterns(const Column& column, const Hierarchy& h, const PatternBudget& budget);

/// Imp_D(p): fraction of values of D that do not match p. Throws EmptyColumn.
Rational impurity(const Column& column, const Pattern& p, const Hierarchy& h);

/// (text, Imp_D(p)) for every p in P(D), sorted by text. Empty for wide columns.
std::vector<std::pair<std::string, Rational>> column_impurities(const Column& column, const Hierarchy& h,
                                                                const PatternBudget& budget);

/// One scan of the corpus. `threads == 0` uses the hardware concurrency.
CorpusIndex build_index(std::span<const Column> corpus, const Hierarchy& h, const PatternBudget& budget,
                        std::size_t sample_rows, unsigned threads = 0);

/// Streams columns from disk; unreadable files and bad rows become warnings.
CorpusIndex build_index(const CorpusSpec& spec, const Hierarchy& h, const PatternBudget& budget,
                        std::vector<std::string>* warnings = nullptr, unsigned threads = 0);

/// Throws ConfigMismatch if the configs differ.
CorpusIndex merge_indexes(const CorpusIndex& a, const CorpusIndex& b);

std::string serialize_index(const CorpusIndex& index);
CorpusIndex parse_index(std::string_view text);
void save_index(const CorpusIndex& index, const std::filesystem::path& path);
CorpusIndex load_index(const std::filesystem::path& path);

}  // namespace patlake
