#include "patlake/corpus_index.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "patlake/error.hpp"
#include "pattern_trie.hpp"
#include "text_io.hpp"

namespace patlake {

using detail::hex64;

namespace {

constexpr std::string_view kIndexHeader = "PATLAKE-INDEX v1";

// Distinct values in first-seen order with multiplicities.
struct DistinctValues {
    std::vector<std::u32string> chars;
    std::vector<std::vector<Token>> tokens;
    std::vector<std::uint64_t> weight;
};

DistinctValues distinct_values(const Column& column) {
    DistinctValues out;
    std::unordered_map<std::string_view, std::size_t> seen;
    for (const auto& v : column.values) {
        auto [it, fresh] = seen.try_emplace(v, out.chars.size());
        if (fresh) {
            out.chars.push_back(decode_utf8(v));
            out.tokens.push_back(tokenize(v));
            out.weight.push_back(1);
        } else {
            ++out.weight[it->second];
        }
    }
    return out;
}

}  // namespace

void ImpuritySum::add(std::uint64_t num, std::uint64_t den) {
    if (num == 0) return;
    if (den_ == 0) den_ = den;
    if (den == den_ && num_ <= UINT64_MAX - num) {
        num_ += num;
        return;
    }
    add(Rational(num, den));
}

void ImpuritySum::add(const Rational& r) {
    if (r == 0) return;
    using boost::multiprecision::cpp_int;
    const cpp_int& n = boost::multiprecision::numerator(r);
    const cpp_int& d = boost::multiprecision::denominator(r);
    if (n > 0 && n <= UINT64_MAX && d <= UINT64_MAX && (den_ == 0 || den_ == d)) {
        add(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(d));
        return;
    }
    if (rest_) *rest_ += r;
    else rest_ = std::make_unique<Rational>(r);
    if (*rest_ == 0) rest_.reset();
}

ImpuritySum& ImpuritySum::operator+=(const ImpuritySum& o) {
    if (o.num_) add(o.num_, o.den_);
    if (o.rest_) add(*o.rest_);
    return *this;
}

Rational ImpuritySum::value() const {
    Rational v = num_ ? Rational(num_, den_) : Rational(0);
    if (rest_) v += *rest_;
    return v;
}

std::string ImpuritySum::to_string() const {
    if (rest_) return patlake::to_string(value());
    if (num_ == 0) return "0/1";
    const std::uint64_t g = std::gcd(num_, den_);
    return std::to_string(num_ / g) + "/" + std::to_string(den_ / g);
}

std::vector<std::pair<std::string, IndexEntry>> CorpusIndex::sorted_entries() const {
    std::vector<std::pair<std::string, IndexEntry>> out(entries_.begin(), entries_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

const IndexEntry* CorpusIndex::find(std::string_view pattern_text) const {
    auto it = entries_.find(std::string(pattern_text));
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<PatternStats> CorpusIndex::lookup(std::string_view pattern_text) const {
    const IndexEntry* e = find(pattern_text);
    if (!e) return std::nullopt;
    PatternStats s;
    s.fpr_exact = e->fpr();
    s.fpr = to_double(s.fpr_exact);
    s.cov = e->cov_count;
    return s;
}

void CorpusIndex::require_hierarchy(const Hierarchy& h) const {
    if (h.fingerprint() != config_.hierarchy_fingerprint)
        throw Error(ErrorCode::FingerprintMismatch, "index was built with hierarchy " +
                                                        hex64(config_.hierarchy_fingerprint) +
                                                        ", current hierarchy is " + h.fingerprint_hex());
}

void CorpusIndex::add_column(const std::vector<std::pair<std::string, Rational>>& impurities) {
    ++column_count_;
    for (const auto& [text, imp] : impurities) {
        auto& e = entries_[text];
        ++e.cov_count;
        if (imp != 0) e.impurity_sum.add(imp);
    }
}

void CorpusIndex::add_raw(const std::string& pattern_text, std::uint64_t misses, std::uint64_t total) {
    auto& e = entries_[pattern_text];
    ++e.cov_count;
    if (misses) e.impurity_sum.add(misses, total);
}

void CorpusIndex::merge_from(const CorpusIndex& other) {
    if (!(config_ == other.config_))
        throw Error(ErrorCode::ConfigMismatch, "cannot merge indexes built with different settings");
    column_count_ += other.column_count_;
    for (const auto& [text, entry] : other.entries_) {
        auto& e = entries_[text];
        e.cov_count += entry.cov_count;
        e.impurity_sum += entry.impurity_sum;
    }
}

std::vector<Pattern> column_patterns(const Column& column, const Hierarchy& h, const PatternBudget& budget) {
    std::unordered_map<std::string, Pattern> unique;
    for (const auto& v : column.values) {
        auto tokens = tokenize(v);
        if (!within_budget(tokens, h, budget)) continue;
        enumerate_patterns(tokens, h, [&](const Pattern& p) { unique.try_emplace(to_text(p, h), p); });
    }
    std::vector<std::pair<std::string, Pattern>> sorted(unique.begin(), unique.end());
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Pattern> out;
    out.reserve(sorted.size());
    for (auto& kv : sorted) out.push_back(std::move(kv.second));
    return out;
}

Rational impurity(const Column& column, const Pattern& p, const Hierarchy& h) {
    if (column.values.empty()) throw Error(ErrorCode::EmptyColumn, "impurity of an empty column");
    std::uint64_t misses = 0;
    for (const auto& v : column.values)
        if (!matches(p, v, h)) ++misses;
    return Rational(misses, column.values.size());
}

namespace {

// Calls emit(text, misses, |D|) for every p in P(D), in no particular order.
template <class Emit>
void scan_column(const Column& column, const Hierarchy& h, const PatternBudget& budget, Emit&& emit) {
    if (column.values.empty()) return;
    const auto values = distinct_values(column);

    detail::PatternTrie trie(h);
    bool any_enumerated = false;
    std::uint64_t non_empty = 0;
    for (std::size_t id = 0; id < values.tokens.size(); ++id) {
        if (!values.chars[id].empty()) non_empty += values.weight[id];
        if (values.tokens[id].empty() || !within_budget(values.tokens[id], h, budget)) continue;
        trie.add_value(values.tokens[id]);
        any_enumerated = true;
    }
    if (!any_enumerated) return;

    std::vector<std::uint64_t> matched(trie.pattern_count(), 0);
    for (std::size_t id = 0; id < values.chars.size(); ++id)
        trie.match(values.chars[id], [&](std::size_t p) { matched[p] += values.weight[id]; });

    const std::uint64_t total = column.values.size();
    for (std::size_t p = 0; p < trie.pattern_count(); ++p) emit(trie.text(p), total - matched[p], total);
    emit(to_text(Pattern::trivial(h), h), total - non_empty, total);
}

}  // namespace

std::vector<std::pair<std::string, Rational>> column_impurities(const Column& column, const Hierarchy& h,
                                                                const PatternBudget& budget) {
    std::vector<std::pair<std::string, Rational>> out;
    scan_column(column, h, budget, [&](const std::string& text, std::uint64_t misses, std::uint64_t total) {
        out.emplace_back(text, Rational(misses, total));
    });
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

namespace {

IndexConfig make_config(const Hierarchy& h, const PatternBudget& budget, std::size_t sample_rows) {
    if (sample_rows == 0) throw Error(ErrorCode::InvalidArgument, "sample_rows must be at least 1");
    return IndexConfig{h.fingerprint(), budget, sample_rows};
}

// Shard-local partial indexes merged pairwise; exact sums make the result order-independent.
CorpusIndex build_sharded(std::span<const Column> corpus, const IndexConfig& config, const Hierarchy& h,
                          unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, corpus.size())));
    std::vector<CorpusIndex> shards(threads);
    auto work = [&](unsigned shard) {
        const std::size_t begin = corpus.size() * shard / threads;
        const std::size_t end = corpus.size() * (shard + 1) / threads;
        CorpusIndex acc(config);
        for (std::size_t i = begin; i < end; ++i) {
            acc.count_column();
            scan_column(corpus[i], h, config.budget,
                        [&](const std::string& text, std::uint64_t misses, std::uint64_t total) {
                            acc.add_raw(text, misses, total);
                        });
        }
        shards[shard] = std::move(acc);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& t : pool) t.join();
    }
    for (std::size_t step = 1; step < shards.size(); step *= 2)
        for (std::size_t i = 0; i + step < shards.size(); i += 2 * step) shards[i].merge_from(shards[i + step]);
    return std::move(shards[0]);
}

}  // namespace

CorpusIndex build_index(std::span<const Column> corpus, const Hierarchy& h, const PatternBudget& budget,
                        std::size_t sample_rows, unsigned threads) {
    const auto config = make_config(h, budget, sample_rows);
    bool truncated = std::any_of(corpus.begin(), corpus.end(),
                                 [&](const Column& c) { return c.values.size() > sample_rows; });
    if (!truncated) return build_sharded(corpus, config, h, threads);
    std::vector<Column> capped(corpus.begin(), corpus.end());
    for (auto& c : capped)
        if (c.values.size() > sample_rows) c.values.resize(sample_rows);
    return build_sharded(capped, config, h, threads);
}

CorpusIndex build_index(const CorpusSpec& spec, const Hierarchy& h, const PatternBudget& budget,
                        std::vector<std::string>* warnings, unsigned threads) {
    const auto config = make_config(h, budget, spec.sample_rows);
    CorpusIndex index(config);
    std::vector<Column> batch;
    auto flush = [&] {
        if (batch.empty()) return;
        index.merge_from(build_sharded(batch, config, h, threads));
        batch.clear();
    };
    for_each_column(
        spec,
        [&](Column&& c) {
            batch.push_back(std::move(c));
            if (batch.size() >= 256) flush();
        },
        warnings);
    flush();
    return index;
}

CorpusIndex merge_indexes(const CorpusIndex& a, const CorpusIndex& b) {
    CorpusIndex out = a;
    out.merge_from(b);
    return out;
}

std::string serialize_index(const CorpusIndex& index) {
    const auto& cfg = index.config();
    std::ostringstream out;
    out << kIndexHeader << '\n'
        << "fingerprint\t" << hex64(cfg.hierarchy_fingerprint) << '\n'
        << "tau\t" << cfg.budget.max_tokens << '\n'
        << "sample_rows\t" << cfg.sample_rows << '\n'
        << "column_count\t" << index.column_count() << '\n'
        << "max_patterns\t" << cfg.budget.max_patterns << '\n';
    for (const auto& [text, entry] : index.sorted_entries())
        out << text << '\t' << entry.cov_count << '\t' << entry.impurity_sum.to_string() << '\n';
    return out.str();
}

CorpusIndex parse_index(std::string_view text) {
    detail::LineReader reader(text);
    auto next_line = [&](std::string_view& line) { return reader.next(line); };
    std::string_view line;
    if (!next_line(line)) throw Error(ErrorCode::Format, "index: empty file");
    if (line != kIndexHeader) {
        if (line.substr(0, 14) == "PATLAKE-INDEX ")
            throw Error(ErrorCode::VersionMismatch, "index: unsupported version '" + std::string(line) + "'");
        throw Error(ErrorCode::Format, "index: missing PATLAKE-INDEX header");
    }
    auto field = [&](std::string_view key) {
        std::string_view l;
        if (!next_line(l)) throw Error(ErrorCode::Format, "index: truncated header");
        auto tab = l.find('\t');
        if (tab == std::string_view::npos || l.substr(0, tab) != key)
            throw Error(ErrorCode::Format, "index: expected '" + std::string(key) + "' on line " + std::to_string(reader.line_number()));
        return l.substr(tab + 1);
    };
    IndexConfig cfg;
    cfg.hierarchy_fingerprint = detail::parse_hex64(field("fingerprint"), "index");
    cfg.budget.max_tokens = detail::parse_u64(field("tau"), "index: tau");
    cfg.sample_rows = detail::parse_u64(field("sample_rows"), "index: sample_rows");
    const std::uint64_t columns = detail::parse_u64(field("column_count"), "index: column_count");
    cfg.budget.max_patterns = detail::parse_u64(field("max_patterns"), "index: max_patterns");

    CorpusIndex index(cfg);
    index.set_column_count(columns);
    while (next_line(line)) {
        if (line.empty()) continue;
        auto t2 = line.rfind('\t');
        auto t1 = t2 == std::string_view::npos ? t2 : line.rfind('\t', t2 - 1);
        if (t1 == std::string_view::npos || t2 == 0)
            throw Error(ErrorCode::Format, "index: malformed entry on line " + std::to_string(reader.line_number()));
        IndexEntry e;
        e.cov_count = detail::parse_u64(line.substr(t1 + 1, t2 - t1 - 1), "index: cov_count");
        const auto sum = parse_rational(line.substr(t2 + 1));
        if (e.cov_count == 0 || sum < 0 || sum > e.cov_count)
            throw Error(ErrorCode::Format, "index: inconsistent entry on line " + std::to_string(reader.line_number()));
        e.impurity_sum.add(sum);
        index.insert(std::string(line.substr(0, t1)), std::move(e));
    }
    return index;
}

void save_index(const CorpusIndex& index, const std::filesystem::path& path) {
    detail::write_text_file(path, serialize_index(index));
}

CorpusIndex load_index(const std::filesystem::path& path) { return parse_index(detail::read_text_file(path)); }

}  // namespace patlake
