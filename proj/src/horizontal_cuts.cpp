#include "patlake/horizontal_cuts.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "patlake/error.hpp"
#include "text_io.hpp"

namespace patlake {

namespace {

constexpr std::string_view kProgramHeader = "PATLAKE-PROGRAM v1";

std::string kind_key(std::string_view value) {
    std::string key;
    for (const auto& t : tokenize(value)) {
        switch (t.kind) {
            case TokenKind::Letter: key += 'L'; break;
            case TokenKind::Digit: key += 'D'; break;
            case TokenKind::Space: key += 'W'; break;
            case TokenKind::Symbol: key += 'S'; break;
        }
    }
    return key;
}

std::uint64_t cut_budget(const Rational& theta, std::size_t n) {
    const Rational x = theta * n;
    return static_cast<std::uint64_t>(boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x));
}

// H(C) non-empty. Above the enumeration cap only indexed patterns are considered.
bool has_common_pattern(std::span<const std::string> values, const CorpusIndex& index, const Hierarchy& h) {
    const auto& budget = index.config().budget;
    for (const auto& v : values)
        if (token_count(v) >= budget.max_tokens) return false;
    try {
        return !hypothesis_space(values, h, budget).empty();
    } catch (const Error& e) {
        if (e.code() != ErrorCode::TokenBudgetExceeded) throw;
    }
    return has_indexed_hypothesis(values, index, h);
}

std::optional<Hypothesis> fmdv_or_none(std::span<const std::string> values, const CandidatePool& pool,
                                       const Hierarchy& h) {
    try {
        return solve(values, pool, h);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::TokenBudgetExceeded) return std::nullopt;
        throw;
    }
}

void check_inputs(std::span<const std::string> values, const CorpusIndex& index, const Hierarchy& h,
                  const SolverConfig& cfg, const ToleranceConfig& tol) {
    validate_config(cfg);
    validate_tolerance(tol);
    if (cfg.mode != Mode::Validate) throw Error(ErrorCode::InvalidArgument, "tolerance solvers require validate mode");
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "empty query column");
    index.require_hierarchy(h);
}

// Removal steps: step s removes the first s groups; stops before exceeding the budget
// and never removes the last group.
class RemovalSteps {
public:
    RemovalSteps(std::span<const std::string> values, const ToleranceConfig& tol)
        : values_(values), groups_(outlier_groups(values)), budget_(cut_budget(tol.theta, values.size())),
          cut_(values.size(), false) {}

    bool advance() {
        if (step_ == 0 && !started_) {
            started_ = true;
            return true;
        }
        if (step_ + 1 >= groups_.size()) return false;
        const auto& g = groups_[step_];
        if (removed_ + g.size() > budget_) return false;
        for (auto i : g) cut_[i] = true;
        removed_ += g.size();
        ++step_;
        return true;
    }

    std::vector<std::string> remaining() const {
        std::vector<std::string> out;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (!cut_[i]) out.push_back(values_[i]);
        return out;
    }

    std::vector<std::size_t> removed() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < values_.size(); ++i)
            if (cut_[i]) out.push_back(i);
        return out;
    }

    std::size_t step() const { return step_; }

private:
    std::span<const std::string> values_;
    std::vector<std::vector<std::size_t>> groups_;
    std::uint64_t budget_;
    std::vector<bool> cut_;
    std::size_t step_ = 0;
    std::uint64_t removed_ = 0;
    bool started_ = false;
};

// Constraint recheck on the full column.
bool satisfies_tolerance(const Pattern& p, std::span<const std::string> values, const Hierarchy& h,
                         const ToleranceConfig& tol) {
    std::uint64_t members = 0;
    for (const auto& v : values) members += in_pattern_space(p, v, h);
    return Rational(members) >= (1 - tol.theta) * values.size();
}

}  // namespace

void validate_tolerance(const ToleranceConfig& tol) {
    if (tol.theta < 0 || tol.theta >= 1)
        throw Error(ErrorCode::InvalidArgument, "tolerance must satisfy 0 <= theta < 1, got " + to_string(tol.theta));
}

const char* to_string(Strategy s) {
    switch (s) {
        case Strategy::Basic: return "basic";
        case Strategy::Horizontal: return "horizontal";
        case Strategy::Vertical: return "vertical";
        case Strategy::HorizontalVertical: return "horizontal-vertical";
    }
    return "unknown";
}

Strategy parse_strategy(std::string_view text) {
    for (auto s : {Strategy::Basic, Strategy::Horizontal, Strategy::Vertical, Strategy::HorizontalVertical})
        if (text == to_string(s)) return s;
    throw Error(ErrorCode::InvalidArgument, "unknown strategy '" + std::string(text) + "'");
}

Pattern ValidationProgram::combined(const Hierarchy& h) const {
    if (h.fingerprint() != hierarchy_fingerprint)
        throw Error(ErrorCode::FingerprintMismatch, "program was learned with a different hierarchy");
    std::vector<Pattern> parts;
    for (const auto& p : patterns) parts.push_back(parse_pattern(p, h));
    return concatenate(parts);
}

std::vector<std::vector<std::size_t>> outlier_groups(std::span<const std::string> values) {
    std::map<std::string, std::vector<std::size_t>> by_key;
    for (std::size_t i = 0; i < values.size(); ++i) by_key[kind_key(values[i])].push_back(i);
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups(by_key.begin(), by_key.end());
    std::stable_sort(groups.begin(), groups.end(),
                     [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
    std::vector<std::vector<std::size_t>> out;
    for (auto& g : groups) out.push_back(std::move(g.second));
    return out;
}

std::uint64_t count_nonconforming(std::span<const std::string> values, const Pattern& combined, const Hierarchy& h) {
    std::uint64_t bad = 0;
    for (const auto& v : values) bad += !matches(combined, v, h);
    return bad;
}

Rational conforming_ratio(std::span<const std::string> values, const ValidationProgram& program, const Hierarchy& h) {
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "empty column");
    return Rational(count_nonconforming(values, program.combined(h), h), values.size());
}

namespace {

ValidationProgram base_program(Strategy strategy, std::span<const std::string> values, const CorpusIndex& index,
                               const Hierarchy& h, const SolverConfig& cfg, const ToleranceConfig& tol) {
    if (values.empty()) throw Error(ErrorCode::EmptyColumn, "empty training column");
    ValidationProgram p;
    p.strategy = strategy;
    p.train_size = values.size();
    p.cfg = cfg;
    p.tolerance = tol.theta;
    p.tau = index.config().budget.max_tokens;
    p.hierarchy_fingerprint = h.fingerprint();
    return p;
}

void finish_program(ValidationProgram& p, std::span<const std::string> values, const Hierarchy& h) {
    p.theta_train = Rational(count_nonconforming(values, p.combined(h), h), values.size());
}

}  // namespace

ValidationProgram make_program(Strategy strategy, const Hypothesis& hyp, std::span<const std::string> values,
                               const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg,
                               const ToleranceConfig& tol) {
    auto p = base_program(strategy, values, index, h, cfg, tol);
    p.patterns = {hyp.text};
    p.fpr = hyp.fpr_exact;
    finish_program(p, values, h);
    return p;
}

ValidationProgram make_program(Strategy strategy, const Segmentation& seg, std::span<const std::string> values,
                               const CorpusIndex& index, const Hierarchy& h, const SolverConfig& cfg,
                               const ToleranceConfig& tol) {
    auto p = base_program(strategy, values, index, h, cfg, tol);
    for (const auto& s : seg.segments) p.patterns.push_back(s.hypothesis.text);
    p.fpr = seg.total_fpr;
    finish_program(p, values, h);
    return p;
}

std::optional<ValidationProgram> solve_fmdv_h(std::span<const std::string> values, const CorpusIndex& index,
                                              const Hierarchy& h, const SolverConfig& cfg,
                                              const ToleranceConfig& tol, std::vector<std::size_t>* removed) {
    check_inputs(values, index, h, cfg, tol);
    const CandidatePool pool(index, h, cfg);
    RemovalSteps steps(values, tol);
    std::optional<Hypothesis> best;
    std::vector<std::size_t> best_removed;
    bool any_space = false;
    while (steps.advance()) {
        const auto rest = steps.remaining();
        if (!has_common_pattern(rest, index, h)) continue;
        any_space = true;
        auto hyp = fmdv_or_none(rest, pool, h);
        if (!hyp || !satisfies_tolerance(hyp->pattern, values, h, tol)) continue;
        if (!best || better(*hyp, *best, Mode::Validate)) {
            best = std::move(hyp);
            best_removed = steps.removed();
        }
    }
    if (!any_space)
        throw Error(ErrorCode::ToleranceExceeded, "no cut within the tolerance leaves a common pattern");
    if (!best) return std::nullopt;
    if (removed) *removed = best_removed;
    return make_program(Strategy::Horizontal, *best, values, index, h, cfg, tol);
}

std::optional<ValidationProgram> solve_auto(std::span<const std::string> values, const CorpusIndex& index,
                                            const Hierarchy& h, const SolverConfig& cfg, const ToleranceConfig& tol,
                                            std::vector<std::size_t>* removed) {
    check_inputs(values, index, h, cfg, tol);
    if (has_common_pattern(values, index, h)) {
        if (removed) removed->clear();
        auto hyp = solve_fmdv(values, index, h, cfg);
        if (!hyp) return std::nullopt;
        return make_program(Strategy::Basic, *hyp, values, index, h, cfg, tol);
    }
    const CandidatePool pool(index, h, cfg);
    RemovalSteps steps(values, tol);
    std::optional<ValidationProgram> best;
    std::vector<std::size_t> best_removed;
    while (steps.advance()) {
        const auto rest = steps.remaining();
        std::optional<ValidationProgram> cand;
        if (has_common_pattern(rest, index, h)) {
            auto hyp = fmdv_or_none(rest, pool, h);
            if (hyp && satisfies_tolerance(hyp->pattern, values, h, tol))
                cand = make_program(Strategy::Horizontal, *hyp, values, index, h, cfg, tol);
        } else if (auto seg = solve_fmdv_v(align(rest), pool, h)) {
            cand = make_program(steps.step() == 0 ? Strategy::Vertical : Strategy::HorizontalVertical, *seg, values,
                                index, h, cfg, tol);
        }
        if (cand && (!best || cand->fpr < best->fpr)) {
            best = std::move(cand);
            best_removed = steps.removed();
        }
    }
    if (best && removed) *removed = best_removed;
    return best;
}

std::string serialize_program(const ValidationProgram& p) {
    std::ostringstream out;
    out << kProgramHeader << '\n'
        << "strategy\t" << to_string(p.strategy) << '\n'
        << "fingerprint\t" << detail::hex64(p.hierarchy_fingerprint) << '\n'
        << "tau\t" << p.tau << '\n'
        << "mode\t" << (p.cfg.mode == Mode::Validate ? "validate" : "tag") << '\n'
        << "fpr_max\t" << to_string(p.cfg.r) << '\n'
        << "min_cov\t" << p.cfg.m << '\n'
        << "tolerance\t" << to_string(p.tolerance) << '\n'
        << "train_size\t" << p.train_size << '\n'
        << "theta_train\t" << to_string(p.theta_train) << '\n'
        << "fpr\t" << to_string(p.fpr) << '\n'
        << "segments\t" << p.patterns.size() << '\n';
    for (const auto& pat : p.patterns) out << "pattern\t" << pat << '\n';
    return out.str();
}

ValidationProgram parse_program(std::string_view text) {
    detail::LineReader reader(text);
    std::string_view line;
    if (!reader.next(line)) throw Error(ErrorCode::Format, "program: empty file");
    if (line != kProgramHeader) {
        if (line.substr(0, 16) == "PATLAKE-PROGRAM ")
            throw Error(ErrorCode::VersionMismatch, "program: unsupported version '" + std::string(line) + "'");
        throw Error(ErrorCode::Format, "program: missing PATLAKE-PROGRAM header");
    }
    auto field = [&](std::string_view key) {
        std::string_view l;
        if (!reader.next(l)) throw Error(ErrorCode::Format, "program: truncated");
        auto tab = l.find('\t');
        if (tab == std::string_view::npos || l.substr(0, tab) != key)
            throw Error(ErrorCode::Format, "program: expected '" + std::string(key) + "' on line " +
                                               std::to_string(reader.line_number()));
        return l.substr(tab + 1);
    };
    ValidationProgram p;
    try {
        p.strategy = parse_strategy(field("strategy"));
    } catch (const Error& e) {
        throw Error(ErrorCode::Format, std::string("program: ") + e.what());
    }
    p.hierarchy_fingerprint = detail::parse_hex64(field("fingerprint"), "program");
    p.tau = detail::parse_u64(field("tau"), "program: tau");
    const auto mode = field("mode");
    if (mode == "validate") p.cfg.mode = Mode::Validate;
    else if (mode == "tag") p.cfg.mode = Mode::Tag;
    else throw Error(ErrorCode::Format, "program: bad mode '" + std::string(mode) + "'");
    p.cfg.r = parse_rational(field("fpr_max"));
    p.cfg.m = detail::parse_u64(field("min_cov"), "program: min_cov");
    p.tolerance = parse_rational(field("tolerance"));
    p.train_size = detail::parse_u64(field("train_size"), "program: train_size");
    p.theta_train = parse_rational(field("theta_train"));
    p.fpr = parse_rational(field("fpr"));
    const auto segments = detail::parse_u64(field("segments"), "program: segments");
    for (std::uint64_t i = 0; i < segments; ++i) p.patterns.emplace_back(field("pattern"));
    while (reader.next(line))
        if (!line.empty()) throw Error(ErrorCode::Format, "program: trailing content");
    const bool single = p.strategy == Strategy::Basic || p.strategy == Strategy::Horizontal;
    if (p.train_size == 0 || p.patterns.empty() || (single && p.patterns.size() != 1) || p.theta_train < 0 ||
        p.theta_train > p.tolerance || p.tolerance < 0 || p.tolerance >= 1 || p.cfg.r < 0 || p.cfg.r > 1 ||
        p.fpr < 0)
        throw Error(ErrorCode::Format, "program: inconsistent fields");
    return p;
}

void save_program(const ValidationProgram& program, const std::filesystem::path& path) {
    detail::write_text_file(path, serialize_program(program));
}

ValidationProgram load_program(const std::filesystem::path& path) {
    return parse_program(detail::read_text_file(path));
}

}  // namespace patlake
