#include "patlake/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "patlake/corpus_index.hpp"
#include "patlake/drift_stats.hpp"
#include "patlake/error.hpp"
#include "patlake/horizontal_cuts.hpp"
#include "patlake/ingest.hpp"
#include "patlake/optimizer.hpp"
#include "patlake/pattern.hpp"
#include "patlake/vertical_cuts.hpp"

namespace patlake {
namespace {

namespace fs = std::filesystem;

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

int exit_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument:
        case ErrorCode::InvalidPattern:
            return kExitUsage;
        case ErrorCode::TokenBudgetExceeded:
        case ErrorCode::ToleranceExceeded:
        case ErrorCode::EmptyColumn:
            return kExitNoResult;
        default:
            return kExitIo;
    }
}

/// Flags that parse into exact rationals.
Rational parse_flag(const std::string& flag, const std::string& text) {
    try {
        return parse_decimal(text);
    } catch (const Error&) {
        throw Error(ErrorCode::InvalidArgument, flag + ": expected a decimal or fraction, got '" + text + "'");
    }
}

void require_paths(const std::vector<std::string>& paths) {
    for (const auto& p : paths) {
        std::error_code ec;
        if (!fs::exists(p, ec)) throw Error(ErrorCode::Io, "no such file or directory: " + p);
    }
}

void flush_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << "warning: " << w << '\n';
}

struct ColumnFlags {
    std::string path;
    std::size_t ordinal = 0;
    std::size_t sample_rows = CorpusSpec{}.sample_rows;
    bool no_header = false;

    void attach(CLI::App& cmd) {
        cmd.add_option("--column", path, "Column file (.csv, .tsv, .jsonl)")->required();
        cmd.add_option("--ordinal", ordinal, "Zero-based column ordinal");
        cmd.add_option("--sample-rows", sample_rows, "Values kept per column")->check(CLI::PositiveNumber);
        cmd.add_flag("--no-header", no_header, "Treat the first CSV/TSV row as data");
    }

    Column load(std::ostream& err) const {
        require_paths({path});
        std::vector<std::string> warnings;
        Column c = load_query_column(path, ordinal, sample_rows, !no_header, &warnings);
        flush_warnings(warnings, err);
        if (c.empty()) throw Error(ErrorCode::EmptyColumn, "column has no values: " + path);
        return c;
    }
};

struct IndexFlags {
    std::vector<std::string> roots;
    std::string out_path;
    std::size_t sample_rows = CorpusSpec{}.sample_rows;
    std::size_t tau = PatternBudget{}.max_tokens;
    std::uint64_t max_patterns = PatternBudget{}.max_patterns;
    unsigned threads = 0;
    bool no_header = false;
};

int cmd_index(const IndexFlags& f, std::ostream& out, std::ostream& err) {
    require_paths(f.roots);
    const Hierarchy h = Hierarchy::from_environment();
    CorpusSpec spec;
    spec.roots.assign(f.roots.begin(), f.roots.end());
    spec.sample_rows = f.sample_rows;
    spec.csv_header = spec.tsv_header = !f.no_header;
    PatternBudget budget;
    budget.max_tokens = f.tau;
    budget.max_patterns = f.max_patterns;

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> warnings;
    CorpusIndex index = build_index(spec, h, budget, &warnings, f.threads);
    flush_warnings(warnings, err);
    save_index(index, f.out_path);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    out << "column_count\t" << index.column_count() << '\n' << "entries\t" << index.size() << '\n';
    err << "elapsed_ms\t" << fmt_double(ms) << '\n';
    return kExitOk;
}

struct SuggestFlags {
    std::string index_path;
    ColumnFlags column;
    std::string mode = "validate";
    std::optional<std::string> fpr_max;
    std::optional<std::uint64_t> min_cov;
    std::optional<std::string> tolerance;
    std::string strategy = "basic";
    std::size_t top_k = 10;
    std::string emit_program;
    bool emit_regex = false;
};

class SuggestPrinter {
public:
    SuggestPrinter(std::ostream& out, const Hierarchy& h, Mode mode, bool regex)
        : out_(out), h_(h), regex_(regex) {
        out_ << "rank\tsegment\tpattern\t" << (mode == Mode::Tag ? "fnr" : "fpr") << "\tcov";
        if (regex_) out_ << "\tregex";
        out_ << '\n';
    }

    void row(std::size_t rank, std::size_t seg, std::size_t nseg, const std::string& text, double fpr,
             std::uint64_t cov) {
        out_ << rank << '\t' << seg << '/' << nseg << '\t' << text << '\t' << fmt_double(fpr) << '\t' << cov;
        if (regex_) out_ << '\t' << pattern_to_regex(parse_pattern(text, h_), h_);
        out_ << '\n';
    }

    void hypothesis(std::size_t rank, const Hypothesis& hyp) { row(rank, 1, 1, hyp.text, hyp.fpr, hyp.cov); }

    void segments(const std::vector<std::string>& texts, const CorpusIndex& index) {
        for (std::size_t i = 0; i < texts.size(); ++i) {
            auto stats = index.lookup(texts[i]);
            row(1, i + 1, texts.size(), texts[i], stats ? stats->fpr : 0.0, stats ? stats->cov : 0);
        }
    }

private:
    std::ostream& out_;
    const Hierarchy& h_;
    bool regex_;
};

int cmd_suggest(const SuggestFlags& f, std::ostream& out, std::ostream& err) {
    SolverConfig cfg;
    cfg.mode = f.mode == "tag" ? Mode::Tag : Mode::Validate;
    if (f.fpr_max) cfg.r = parse_flag("--fpr-max", *f.fpr_max);
    if (f.min_cov) cfg.m = *f.min_cov;
    validate_config(cfg);
    ToleranceConfig tol;
    if (f.tolerance) tol.theta = parse_flag("--tolerance", *f.tolerance);
    validate_tolerance(tol);
    const Strategy strategy = f.strategy == "auto" ? Strategy::Basic : parse_strategy(f.strategy);
    if (cfg.mode == Mode::Tag && f.strategy != "basic")
        throw Error(ErrorCode::InvalidArgument, "--mode tag supports only --strategy basic");

    const Hierarchy h = Hierarchy::from_environment();
    require_paths({f.index_path});
    const CorpusIndex index = load_index(f.index_path);
    index.require_hierarchy(h);
    const Column column = f.column.load(err);
    const std::span<const std::string> values(column.values);

    SuggestPrinter print(out, h, cfg.mode, f.emit_regex);
    std::optional<ValidationProgram> program;
    std::vector<std::size_t> removed;

    auto rank_basic = [&] {
        auto ranked = rank_hypotheses(values, index, h, cfg, f.top_k);
        for (std::size_t i = 0; i < ranked.size(); ++i) print.hypothesis(i + 1, ranked[i]);
        if (!ranked.empty()) program = make_program(Strategy::Basic, ranked.front(), values, index, h, cfg, tol);
    };

    if (f.strategy == "basic") {
        rank_basic();
    } else if (strategy == Strategy::Vertical) {
        auto seg = solve_fmdv_v(values, index, h, cfg);
        if (seg) {
            program = make_program(Strategy::Vertical, *seg, values, index, h, cfg, tol);
            print.segments(program->patterns, index);
        }
    } else {
        program = f.strategy == "auto" ? solve_auto(values, index, h, cfg, tol, &removed)
                                       : solve_fmdv_h(values, index, h, cfg, tol, &removed);
        if (program && program->strategy == Strategy::Basic) {
            rank_basic();
        } else if (program) {
            print.segments(program->patterns, index);
        }
    }

    if (!program) {
        err << "infeasible: no hypothesis satisfies the constraints\n";
        return kExitNoResult;
    }
    err << "strategy\t" << to_string(program->strategy) << "\tfpr\t" << fmt_double(to_double(program->fpr))
        << "\ttheta_train\t" << to_string(program->theta_train) << "\tremoved\t" << removed.size() << '\n';
    if (!f.emit_program.empty()) save_program(*program, f.emit_program);
    return kExitOk;
}

struct ValidateFlags {
    std::string program_path;
    ColumnFlags column;
    double alpha = kDefaultAlpha;
    std::string test = "fisher";
};

int cmd_validate(const ValidateFlags& f, std::ostream& out, std::ostream& err) {
    const Hierarchy h = Hierarchy::from_environment();
    require_paths({f.program_path});
    const ValidationProgram program = load_program(f.program_path);
    const Column column = f.column.load(err);
    const DriftReport report = drift_check(program, column.values, h, f.alpha, parse_drift_test(f.test));
    out << format_report(report) << '\n';
    err << summarize_report(report) << '\n';
    return report.alarm ? kExitNoResult : kExitOk;
}

struct TagFlags {
    std::string pattern;
    std::string program_path;
    std::vector<std::string> roots;
    std::optional<std::string> tolerance;
    std::size_t sample_rows = CorpusSpec{}.sample_rows;
    bool no_header = false;
};

int cmd_tag(const TagFlags& f, std::ostream& out, std::ostream& err) {
    ToleranceConfig tol;
    if (f.tolerance) tol.theta = parse_flag("--tolerance", *f.tolerance);
    validate_tolerance(tol);
    const Hierarchy h = Hierarchy::from_environment();
    Pattern pattern;
    if (!f.program_path.empty()) {
        require_paths({f.program_path});
        pattern = load_program(f.program_path).combined(h);
    } else {
        pattern = parse_pattern(f.pattern, h);
    }
    require_paths(f.roots);

    CorpusSpec spec;
    spec.roots.assign(f.roots.begin(), f.roots.end());
    spec.sample_rows = f.sample_rows;
    spec.csv_header = spec.tsv_header = !f.no_header;

    const auto num = boost::multiprecision::numerator(tol.theta);
    const auto den = boost::multiprecision::denominator(tol.theta);
    out << "file\tordinal\tmatch_fraction\n";
    std::vector<std::string> warnings;
    for_each_column(spec, [&](Column&& c) {
        if (c.empty()) return;
        const std::uint64_t total = c.size();
        const std::uint64_t hits = static_cast<std::uint64_t>(
            std::count_if(c.values.begin(), c.values.end(), [&](const std::string& v) { return matches(pattern, v, h); }));
        // hits / total >= 1 - num / den
        if (boost::multiprecision::cpp_int(hits) * den < (den - num) * total) return;
        out << c.source.string() << '\t' << c.index << '\t'
            << fmt_double(static_cast<double>(hits) / static_cast<double>(total)) << '\n';
    }, &warnings);
    flush_warnings(warnings, err);
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Pattern-based data validation and tagging over a data-lake corpus index", "patlake"};
    app.require_subcommand(1);

    IndexFlags index_flags;
    auto* index_cmd = app.add_subcommand("index", "Scan a corpus and write its pattern index");
    index_cmd->add_option("paths", index_flags.roots, "Corpus files or directories")->required();
    index_cmd->add_option("--out,-o", index_flags.out_path, "Index file to write")->required();
    index_cmd->add_option("--sample-rows", index_flags.sample_rows, "Values kept per column")
        ->check(CLI::PositiveNumber);
    index_cmd->add_option("--tau", index_flags.tau, "Token limit for indexed values and vertical segments")
        ->check(CLI::PositiveNumber);
    index_cmd->add_option("--max-patterns", index_flags.max_patterns, "Pattern-space cap per value")
        ->check(CLI::PositiveNumber);
    index_cmd->add_option("--threads", index_flags.threads, "Worker threads (0 = all cores)");
    index_cmd->add_flag("--no-header", index_flags.no_header, "Treat the first CSV/TSV row as data");

    SuggestFlags suggest_flags;
    auto* suggest_cmd = app.add_subcommand("suggest", "Rank validation or tagging patterns for a query column");
    suggest_cmd->add_option("--index,-i", suggest_flags.index_path, "Index file")->required();
    suggest_flags.column.attach(*suggest_cmd);
    suggest_cmd->add_option("--mode", suggest_flags.mode, "validate or tag")
        ->check(CLI::IsMember({"validate", "tag"}));
    suggest_cmd->add_option("--fpr-max,-r", suggest_flags.fpr_max, "Max FPR (validate) or FNR (tag), default 0.001");
    suggest_cmd->add_option("--min-cov,-m", suggest_flags.min_cov, "Min coverage, default 100")
        ->check(CLI::PositiveNumber);
    suggest_cmd->add_option("--tolerance", suggest_flags.tolerance, "Max non-conforming fraction, default 0.05");
    suggest_cmd->add_option("--strategy", suggest_flags.strategy, "basic, vertical, horizontal or auto")
        ->check(CLI::IsMember({"basic", "vertical", "horizontal", "auto"}));
    suggest_cmd->add_option("--top-k", suggest_flags.top_k, "Ranked patterns to list")->check(CLI::PositiveNumber);
    suggest_cmd->add_option("--emit-program", suggest_flags.emit_program, "Write the chosen program to FILE");
    suggest_cmd->add_flag("--emit-regex", suggest_flags.emit_regex, "Add a regex column");

    ValidateFlags validate_flags;
    auto* validate_cmd = app.add_subcommand("validate", "Test a column against a program for drift");
    validate_cmd->add_option("--program,-p", validate_flags.program_path, "Program file")->required();
    validate_flags.column.attach(*validate_cmd);
    validate_cmd->add_option("--alpha", validate_flags.alpha, "Significance level");
    validate_cmd->add_option("--test", validate_flags.test, "fisher or chi2")
        ->check(CLI::IsMember({"fisher", "chi2"}));

    TagFlags tag_flags;
    auto* tag_cmd = app.add_subcommand("tag", "List corpus columns matching a pattern");
    auto* pattern_opt = tag_cmd->add_option("--pattern", tag_flags.pattern, "Pattern text");
    auto* program_opt = tag_cmd->add_option("--program,-p", tag_flags.program_path, "Program file");
    pattern_opt->excludes(program_opt);
    program_opt->excludes(pattern_opt);
    tag_cmd->add_option("paths", tag_flags.roots, "Corpus files or directories")->required();
    tag_cmd->add_option("--tolerance", tag_flags.tolerance, "Max non-matching fraction, default 0.05");
    tag_cmd->add_option("--sample-rows", tag_flags.sample_rows, "Values kept per column")->check(CLI::PositiveNumber);
    tag_cmd->add_flag("--no-header", tag_flags.no_header, "Treat the first CSV/TSV row as data");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (tag_cmd->parsed() && pattern_opt->count() == 0 && program_opt->count() == 0)
            throw CLI::RequiredError("tag requires --pattern or --program");
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (index_cmd->parsed()) return cmd_index(index_flags, out, err);
        if (suggest_cmd->parsed()) return cmd_suggest(suggest_flags, out, err);
        if (validate_cmd->parsed()) return cmd_validate(validate_flags, out, err);
        return cmd_tag(tag_flags, out, err);
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace patlake
