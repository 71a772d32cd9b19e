#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "horo/cli.hpp"
#include "horo/congruence.hpp"
#include "horo/errors.hpp"
#include "horo/hecke.hpp"
#include "horo/hyperbolic.hpp"
#include "horo/io.hpp"
#include "horo/measures.hpp"
#include "horo/parallel.hpp"
#include "horo/sampling.hpp"

namespace py = pybind11;
using namespace horo;

namespace {

// Rationals cross the boundary as fractions.Fraction; anything whose str()
// parses ("3/7", 5, Fraction, "0.25") is accepted on the way in.
Rational to_rational(const py::handle& o) { return parse_rational(py::str(o).cast<std::string>()); }

py::object to_fraction(const Rational& r) {
    py::object Fraction = py::module_::import("fractions").attr("Fraction");
    return Fraction(to_string(r));
}

ExactPoint to_point(const py::handle& o) {
    if (py::isinstance<py::str>(o)) return parse_point(o.cast<std::string>());
    auto t = o.cast<py::sequence>();
    if (t.size() != 2) throw py::value_error("a point is a string like '1/3+1/100i' or a pair (re, im)");
    return ExactPoint(to_rational(t[0]), to_rational(t[1]));
}

py::tuple from_point(const ExactPoint& z) { return py::make_tuple(to_fraction(z.re), to_fraction(z.im)); }

py::tuple from_matrix(const IntMatrix2& g) {
    auto I = [](const Integer& v) { return py::int_(py::str(v.get_str())); };
    return py::make_tuple(py::make_tuple(I(g.a), I(g.b)), py::make_tuple(I(g.c), I(g.d)));
}

Translate to_translate(const py::handle& o, const Rational& y) {
    if (py::isinstance<py::str>(o)) return parse_translate(o.cast<std::string>(), y / 1000);
    return Translate::rational(to_rational(o));
}

json to_cpp_json(const py::handle& o) {
    py::object dumps = py::module_::import("json").attr("dumps");
    return json::parse(dumps(o).cast<std::string>());
}

py::object to_py_json(const json& j) {
    py::object loads = py::module_::import("json").attr("loads");
    return loads(j.dump());
}

}  // namespace

PYBIND11_MODULE(_horo, m) {
    m.doc() = "Exact horocycle sampling on the modular surface";

    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);

    m.def("set_threads", [](unsigned t) { set_default_threads(t); }, py::arg("threads"));

    m.def(
        "reduce",
        [](const py::object& z) {
            ReducedPoint r = reduce(to_point(z));
            py::dict d;
            d["point"] = from_point(r.point);
            d["word"] = r.word_string();
            d["matrix"] = from_matrix(r.matrix);
            return d;
        },
        py::arg("z"), "Reduce a point into the standard fundamental domain.");
    m.def("orbit_height", [](const py::object& z) { return to_fraction(orbit_height(to_point(z))); }, py::arg("z"));
    m.def("in_fundamental_domain", [](const py::object& z) { return in_fundamental_domain(to_point(z)); }, py::arg("z"));
    m.def("mobius", [](const std::array<std::array<long, 2>, 2>& g, const py::object& z) {
        return from_point(mobius(IntMatrix2{g[0][0], g[0][1], g[1][0], g[1][1]}, to_point(z)));
    });

    m.def(
        "sample",
        [](std::uint64_t n, const py::object& x, const py::object& y, bool primitive) {
            Rational yy = to_rational(y);
            SampleSet s = sample(n, to_translate(x, yy), yy, primitive);
            py::list out;
            for (const auto& p : s.points) out.append(from_point(p));
            return out;
        },
        py::arg("n"), py::arg("x"), py::arg("y"), py::arg("primitive") = false);
    m.def(
        "min_orbit_height",
        [](std::uint64_t n, const py::object& x, const py::object& y, bool primitive) {
            Rational yy = to_rational(y);
            HeightBound h = min_orbit_height(n, to_translate(x, yy), yy, primitive);
            return py::make_tuple(to_fraction(h.lo), to_fraction(h.hi), h.argmin);
        },
        py::arg("n"), py::arg("x"), py::arg("y"), py::arg("primitive") = false);

    m.def("evaluate", [](const std::string& f, const py::object& z) { return evaluate(TestFunction::parse(f), to_point(z)); },
          py::arg("f"), py::arg("z"));
    m.def("area_mean", [](const std::string& f) { return area_mean(TestFunction::parse(f)).value; }, py::arg("f"));
    m.def(
        "empirical_mean",
        [](const std::string& f, std::uint64_t n, const py::object& x, const py::object& y, bool primitive) {
            Rational yy = to_rational(y);
            return empirical_mean(sample(n, to_translate(x, yy), yy, primitive), TestFunction::parse(f)).value;
        },
        py::arg("f"), py::arg("n"), py::arg("x"), py::arg("y"), py::arg("primitive") = false);

    m.def("index", &index_formula, py::arg("n"));
    m.def("cusp_count", &cusp_count_formula, py::arg("n"));
    m.def(
        "cusps",
        [](std::uint64_t n) {
            py::list out;
            for (const Cusp& c : enumerate_cusps(n)) {
                py::dict d;
                d["cusp"] = c.rep();
                d["width"] = py::int_(py::str(c.width.get_str()));
                d["simple_type"] = c.simple_type;
                d["tau"] = from_matrix(c.tau);
                out.append(d);
            }
            return out;
        },
        py::arg("n"));
    m.def("gamma_n_contains", [](std::uint64_t n, const std::array<std::array<long, 2>, 2>& g) {
        return gamma_n_contains(n, IntMatrix2{g[0][0], g[0][1], g[1][0], g[1][1]});
    });

    m.def(
        "hecke",
        [](std::uint64_t n, const std::string& f, const py::object& z, const std::string& kind) {
            TestFunction tf = TestFunction::parse(f);
            if (kind == "classical") return classical_hecke_apply(n, tf, to_point(z));
            if (kind == "double") return double_coset_apply(n, tf, to_point(z));
            throw py::value_error("kind must be 'classical' or 'double'");
        },
        py::arg("n"), py::arg("f"), py::arg("z"), py::arg("kind") = "classical");
    m.def("nu", &nu, py::arg("n"));

    m.def("experiment_types", &experiment_types);
    m.def(
        "run_experiment",
        [](const std::string& type, const py::object& params, std::uint64_t seed, const std::string& id) {
            return to_py_json(to_json(run_experiment(id.empty() ? type : id, type, to_cpp_json(params), seed)));
        },
        py::arg("type"), py::arg("params") = py::dict(), py::arg("seed") = 0, py::arg("id") = "");
    m.def(
        "run",
        [](const py::object& config, const std::string& out_dir) {
            RunResult r = run(to_cpp_json(config), out_dir);
            py::dict d;
            d["status"] = r.status;
            d["config_errors"] = r.config_errors;
            py::list recs;
            for (const auto& rec : r.records) recs.append(to_py_json(to_json(rec)));
            d["records"] = recs;
            d["manifest"] = to_py_json(r.manifest);
            return d;
        },
        py::arg("config"), py::arg("out_dir") = "");
    m.def("verify_certificate", [](const py::object& cert) { return to_py_json(to_json(verify_certificate(to_cpp_json(cert)))); },
          py::arg("certificate"));
    m.def("content_hash", [](const py::bytes& b) { return content_hash(std::string(b)); }, py::arg("data"));
}
