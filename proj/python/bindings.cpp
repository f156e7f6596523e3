#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "patlake/cli.hpp"
#include "patlake/corpus_index.hpp"
#include "patlake/drift_stats.hpp"
#include "patlake/error.hpp"
#include "patlake/horizontal_cuts.hpp"
#include "patlake/ingest.hpp"
#include "patlake/optimizer.hpp"
#include "patlake/pattern.hpp"
#include "patlake/vertical_cuts.hpp"

namespace py = pybind11;
using namespace patlake;

namespace {

const Hierarchy& hierarchy() {
    static const Hierarchy h = Hierarchy::from_environment();
    return h;
}

py::object to_fraction(const Rational& r) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    return fraction(py::int_(py::str(boost::multiprecision::numerator(r).str())),
                    py::int_(py::str(boost::multiprecision::denominator(r).str())));
}

// Accepts int, Fraction, float (by its decimal repr) or a "1/1000" / "0.001" string.
Rational to_rational(const py::object& x) {
    static py::object fraction = py::module_::import("fractions").attr("Fraction");
    py::object f = py::isinstance<py::float_>(x) ? fraction(py::repr(x)) : fraction(x);
    return Rational(boost::multiprecision::cpp_int(py::str(f.attr("numerator")).cast<std::string>()),
                    boost::multiprecision::cpp_int(py::str(f.attr("denominator")).cast<std::string>()));
}

SolverConfig make_config(const py::object& r, std::uint64_t m, const std::string& mode) {
    SolverConfig cfg;
    cfg.r = to_rational(r);
    cfg.m = m;
    if (mode == "validate") cfg.mode = Mode::Validate;
    else if (mode == "tag") cfg.mode = Mode::Tag;
    else throw Error(ErrorCode::InvalidArgument, "mode must be 'validate' or 'tag'");
    return cfg;
}

py::dict hypothesis_dict(const Hypothesis& h) {
    py::dict d;
    d["pattern"] = h.text;
    d["fpr"] = to_fraction(h.fpr_exact);
    d["cov"] = h.cov;
    return d;
}

std::vector<Column> to_columns(const std::vector<std::vector<std::string>>& cols) {
    std::vector<Column> out;
    out.reserve(cols.size());
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out.push_back(make_column(cols[i]));
        out.back().index = i;
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Pattern-based column validation and tagging over a corpus index";

    static py::exception<Error> error(m, "PatlakeError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def("generate_patterns", [](const std::string& value) {
        std::vector<std::string> out;
        for (const auto& p : generate_patterns(value, hierarchy())) out.push_back(to_text(p, hierarchy()));
        return out;
    }, py::arg("value"), "P(v): every pattern of one value, as text.");
    m.def("matches", [](const std::string& pattern, const std::string& value) {
        return matches(parse_pattern(pattern, hierarchy()), value, hierarchy());
    }, py::arg("pattern"), py::arg("value"));
    m.def("pattern_to_regex", [](const std::string& pattern) {
        return pattern_to_regex(parse_pattern(pattern, hierarchy()), hierarchy());
    }, py::arg("pattern"));

    py::class_<CorpusIndex>(m, "Index")
        .def_static("load", [](const std::filesystem::path& p) { return load_index(p); }, py::arg("path"))
        .def("save", [](const CorpusIndex& idx, const std::filesystem::path& p) { save_index(idx, p); },
             py::arg("path"))
        .def_property_readonly("column_count", &CorpusIndex::column_count)
        .def("__len__", &CorpusIndex::size)
        .def("lookup", [](const CorpusIndex& idx, const std::string& text) -> py::object {
            auto s = idx.lookup(text);
            if (!s) return py::none();
            return py::make_tuple(to_fraction(s->fpr_exact), s->cov);
        }, py::arg("pattern"), "(fpr, cov) of an indexed pattern, or None.")
        .def("merge", [](const CorpusIndex& a, const CorpusIndex& b) { return merge_indexes(a, b); })
        .def("__eq__", [](const CorpusIndex& a, const CorpusIndex& b) { return a == b; });

    m.def("build_index", [](const std::vector<std::vector<std::string>>& columns, std::size_t sample_rows,
                            std::size_t tau) {
        PatternBudget budget;
        budget.max_tokens = tau;
        auto cols = to_columns(columns);
        py::gil_scoped_release release;
        return build_index(cols, hierarchy(), budget, sample_rows);
    }, py::arg("columns"), py::arg("sample_rows") = CorpusSpec{}.sample_rows,
       py::arg("tau") = PatternBudget{}.max_tokens);
    m.def("index_corpus", [](const std::vector<std::filesystem::path>& roots, std::size_t sample_rows,
                             std::size_t tau) {
        CorpusSpec spec;
        spec.roots = roots;
        spec.sample_rows = sample_rows;
        PatternBudget budget;
        budget.max_tokens = tau;
        py::gil_scoped_release release;
        return build_index(spec, hierarchy(), budget);
    }, py::arg("roots"), py::arg("sample_rows") = CorpusSpec{}.sample_rows,
       py::arg("tau") = PatternBudget{}.max_tokens);

    m.def("suggest", [](const std::vector<std::string>& values, const CorpusIndex& index, const py::object& r,
                        std::uint64_t min_cov, const std::string& mode, std::size_t top_k) {
        const auto cfg = make_config(r, min_cov, mode);
        py::list out;
        for (const auto& h : rank_hypotheses(values, index, hierarchy(), cfg, top_k)) out.append(hypothesis_dict(h));
        return out;
    }, py::arg("values"), py::arg("index"), py::arg("r") = py::str("1/1000"), py::arg("min_cov") = 100,
       py::arg("mode") = "validate", py::arg("top_k") = 10,
       "Ranked feasible hypotheses (FMDV order for validate, CMDT order for tag).");

    m.def("segment", [](const std::vector<std::string>& values, const CorpusIndex& index, const py::object& r,
                        std::uint64_t min_cov) -> py::object {
        auto seg = solve_fmdv_v(values, index, hierarchy(), make_config(r, min_cov, "validate"));
        if (!seg) return py::none();
        py::list parts;
        for (const auto& s : seg->segments) {
            auto d = hypothesis_dict(s.hypothesis);
            d["begin"] = s.begin;
            d["end"] = s.end;
            parts.append(d);
        }
        return parts;
    }, py::arg("values"), py::arg("index"), py::arg("r") = py::str("1/1000"), py::arg("min_cov") = 100,
       "FMDV-V segmentation, or None when infeasible.");

    py::class_<ValidationProgram>(m, "Program")
        .def_property_readonly("strategy", [](const ValidationProgram& p) { return std::string(to_string(p.strategy)); })
        .def_readonly("patterns", &ValidationProgram::patterns)
        .def_property_readonly("fpr", [](const ValidationProgram& p) { return to_fraction(p.fpr); })
        .def_property_readonly("theta_train", [](const ValidationProgram& p) { return to_fraction(p.theta_train); })
        .def_readonly("train_size", &ValidationProgram::train_size)
        .def("serialize", &serialize_program)
        .def_static("parse", [](const std::string& text) { return parse_program(text); }, py::arg("text"))
        .def_static("load", [](const std::filesystem::path& p) { return load_program(p); }, py::arg("path"))
        .def("save", [](const ValidationProgram& p, const std::filesystem::path& path) { save_program(p, path); },
             py::arg("path"))
        .def("__eq__", [](const ValidationProgram& a, const ValidationProgram& b) { return a == b; });

    m.def("learn", [](const std::vector<std::string>& values, const CorpusIndex& index, const std::string& strategy,
                      const py::object& r, std::uint64_t min_cov, const py::object& tolerance) -> py::object {
        const auto cfg = make_config(r, min_cov, "validate");
        ToleranceConfig tol;
        tol.theta = to_rational(tolerance);
        std::optional<ValidationProgram> p;
        if (strategy == "auto") {
            p = solve_auto(values, index, hierarchy(), cfg, tol);
        } else if (strategy == "horizontal") {
            p = solve_fmdv_h(values, index, hierarchy(), cfg, tol);
        } else if (strategy == "vertical") {
            if (auto seg = solve_fmdv_v(values, index, hierarchy(), cfg))
                p = make_program(Strategy::Vertical, *seg, values, index, hierarchy(), cfg, tol);
        } else if (strategy == "basic") {
            if (auto h = solve_fmdv(values, index, hierarchy(), cfg))
                p = make_program(Strategy::Basic, *h, values, index, hierarchy(), cfg, tol);
        } else {
            throw Error(ErrorCode::InvalidArgument, "strategy must be basic, vertical, horizontal or auto");
        }
        if (!p) return py::none();
        return py::cast(*p);
    }, py::arg("values"), py::arg("index"), py::arg("strategy") = "auto", py::arg("r") = py::str("1/1000"),
       py::arg("min_cov") = 100, py::arg("tolerance") = py::str("1/20"),
       "Learn a validation program from a query column, or None when infeasible.");

    m.def("drift_check", [](const ValidationProgram& p, const std::vector<std::string>& values, double alpha,
                            const std::string& test) {
        const auto r = drift_check(p, values, hierarchy(), alpha, parse_drift_test(test));
        py::dict d;
        d["theta_train"] = to_fraction(r.theta_train);
        d["theta_test"] = to_fraction(r.theta_test);
        d["table"] = py::make_tuple(r.table.a, r.table.b, r.table.c, r.table.d);
        d["test"] = std::string(to_string(r.test));
        d["p_value"] = r.p_value;
        d["alpha"] = r.alpha;
        d["alarm"] = r.alarm;
        d["line"] = format_report(r);
        return d;
    }, py::arg("program"), py::arg("values"), py::arg("alpha") = kDefaultAlpha, py::arg("test") = "fisher");

    m.def("fisher_exact", [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        return fisher_exact({a, b, c, d});
    });
    m.def("chi_squared_yates", [](std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
        return chi_squared_yates({a, b, c, d});
    });

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command-line tool in-process; returns (exit_code, stdout, stderr).");
}
