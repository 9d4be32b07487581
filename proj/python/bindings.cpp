#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cubic/enumerate.hpp"
#include "cubic/lseries.hpp"
#include "cubic/reduction.hpp"
#include "cubic/spectral.hpp"
#include "cubic/verify.hpp"

namespace py = pybind11;
using namespace cubic;

namespace {

using Quad = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;
using Mat = std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>;

IntegralCubicForm form(const Quad& q) { return {std::get<0>(q), std::get<1>(q), std::get<2>(q), std::get<3>(q)}; }
Quad quad(const IntegralCubicForm& f) { return {f.a, f.b, f.c, f.d}; }
UnimodularMatrix mat(const Mat& m) { return {std::get<0>(m), std::get<1>(m), std::get<2>(m), std::get<3>(m)}; }
Mat tup(const UnimodularMatrix& g) { return {g.a11(), g.a12(), g.a21(), g.a22()}; }

py::int_ to_py(i128 v) { return py::int_(py::str(to_string(v))); }

AveragingMode parse_mode(const std::string& m) {
    if (m == "raw") return AveragingMode::Raw;
    if (m == "averaged") return AveragingMode::Averaged;
    throw py::value_error("mode must be 'raw' or 'averaged'");
}

py::dict record_dict(const ClassRecord& r) {
    py::dict d;
    d["disc"] = r.disc;
    d["rep"] = quad(r.rep);
    d["stabilizer_order"] = r.stabilizer_order;
    d["in_dual"] = r.in_dual;
    d["irreducible"] = r.irreducible;
    return d;
}

std::vector<ClassRecord> records_from(const std::vector<Quad>& reps) {
    std::vector<ClassRecord> out;
    for (const auto& q : reps) out.push_back(make_record(reduce(form(q)).canonical));
    std::sort(out.begin(), out.end(), record_less);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Binary cubic forms: enumeration, shapes and twisted Weyl sums";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<OverflowError>(m, "OverflowError", PyExc_OverflowError);
    py::register_exception<ShortfallError>(m, "ShortfallError", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NetworkError>(m, "NetworkError", PyExc_ConnectionError);

    // forms
    m.def("disc", [](const Quad& f) { return to_py(disc(form(f))); }, py::arg("form"));
    m.def("act", [](const Mat& g, const Quad& f) { return quad(act(mat(g), form(f))); }, py::arg("gamma"),
          py::arg("form"), "(g.f)(x, y) = f(a11 x + a21 y, a12 x + a22 y); gamma = (a11, a12, a21, a22)");
    m.def("pairing",
          [](const Quad& x, const Quad& y) {
              const Rational r = pairing(form(x), form(y));
              return py::make_tuple(r.num, r.den);
          },
          py::arg("x"), py::arg("y"), "returns (numerator, denominator)");
    m.def("in_dual_lattice", [](const Quad& f) { return in_dual_lattice(form(f)); });
    m.def("is_irreducible", [](const Quad& f) { return is_irreducible(form(f)); });
    m.def("singular_classify", [](const Quad& f, bool dual) { return to_string(singular_classify(form(f), dual)); },
          py::arg("form"), py::arg("dual") = false);

    // reduction and enumeration
    m.def("reduce",
          [](const Quad& f) {
              const auto r = reduce(form(f));
              return py::make_tuple(quad(r.canonical), tup(r.gamma));
          },
          py::arg("form"), "(canonical, gamma) with act(gamma, form) == canonical");
    m.def("stabilizer_order", [](const Quad& f) { return stabilizer_order(form(f)); });
    m.def(
        "enumerate_classes",
        [](std::int64_t X, bool dual, int shards, int threads) {
            EnumerationOptions opt;
            opt.shards = shards;
            opt.threads = threads;
            std::vector<ClassRecord> recs;
            {
                py::gil_scoped_release release;
                recs = enumerate_classes(X, dual, opt);
            }
            py::list out;
            for (const auto& r : recs) out.append(record_dict(r));
            return out;
        },
        py::arg("max_disc"), py::arg("dual") = false, py::arg("shards") = 1, py::arg("threads") = 1);
    m.def("brute_force_classes", [](std::int64_t X, bool dual) {
        py::list out;
        for (const auto& r : brute_force_classes(X, dual)) out.append(record_dict(r));
        return out;
    });
    m.def("class_numbers", [](std::int64_t X, bool dual) {
        py::dict out;
        for (const auto& [d, c] : class_numbers(enumerate_classes(X, dual)))
            out[py::int_(d)] = py::make_tuple(c.h, c.weighted, c.h_irreducible);
        return out;
    }, py::arg("max_disc"), py::arg("dual") = false, "disc -> (h, weighted h, irreducible h)");

    // shapes
    m.def(
        "shape",
        [](const Quad& f, const std::string& mode) {
            const auto r = shape(form(f), parse_mode(mode));
            py::list orbit;
            for (const auto& p : r.orbit) orbit.append(py::make_tuple(p.x, p.y));
            return py::make_tuple(py::make_tuple(r.point.x, r.point.y), orbit);
        },
        py::arg("form"), py::arg("mode") = "raw", "((x, y), stabilizer orbit)");
    m.def("reduce_fundamental", [](double x, double y) {
        const auto r = reduce_fundamental({x, y});
        return py::make_tuple(py::make_tuple(r.point.x, r.point.y), tup(r.gamma));
    });

    // special functions and automorphic forms
    m.def("bessel_k_imag", [](double mu, double x) { return bessel_k_imag(mu, x).value; });
    m.def("xi", [](cplx z) { return xi(z); });
    m.def("eisenstein", [](cplx z, double x, double y, bool constant) { return eval_eisenstein(z, {x, y}, constant).value; },
          py::arg("z"), py::arg("x"), py::arg("y"), py::arg("include_constant") = true);

    py::class_<MaassFormData>(m, "MaassForm")
        .def_readonly("t_phi", &MaassFormData::t_phi)
        .def_property_readonly("parity", [](const MaassFormData& d) { return d.parity == Parity::Even ? "even" : "odd"; })
        .def_readonly("coefficients", &MaassFormData::coeffs)
        .def_readonly("precision", &MaassFormData::stated_precision)
        .def("__call__", [](const MaassFormData& d, double x, double y) { return eval_maass(d, {x, y}).value.real(); })
        .def("hecke_residual", &hecke_check)
        .def("serialize", &serialize);
    m.def("parse_coefficients", [](const std::string& text) { return parse_coefficient_file(text); });
    m.def("read_coefficients", &read_coefficient_file);
    m.def("synthetic_maass", [](std::size_t n, std::uint64_t seed, double t) { return synthetic_maass(n, seed, t); },
          py::arg("n"), py::arg("seed") = 1, py::arg("t_phi") = 9.5);

    // twisted sums over classes given as representatives
    m.def(
        "weyl_sum",
        [](const std::vector<Quad>& reps, std::int64_t max_disc, double X, int sign, std::optional<cplx> eisenstein_z,
           const std::string& mode) {
            const auto recs = records_from(reps);
            const TestFunction phi =
                eisenstein_z ? TestFunction::eisenstein(*eisenstein_z, false) : TestFunction::constant();
            const auto vals = phi_values(recs, phi);
            return weyl_sum(X, TwistedCoefficients(recs, vals.get(parse_mode(mode)), max_disc), {}, sign);
        },
        py::arg("reps"), py::arg("max_disc"), py::arg("X"), py::arg("sign") = 1, py::arg("eisenstein_z") = py::none(),
        py::arg("mode") = "averaged",
        "Smoothed sum over the classes of `reps`, which must cover 0 < |disc| <= max_disc.");
    m.def(
        "partial_L",
        [](cplx s, std::int64_t M, int sign, bool dual) {
            const auto recs = enumerate_classes(M, dual);
            const TwistedCoefficients a(recs, std::vector<cplx>(recs.size(), 1.0), M);
            return partial_L(s, M, a, sign).value;
        },
        py::arg("s"), py::arg("M"), py::arg("sign") = 1, py::arg("dual") = false, "constant test function");
    m.def(
        "g_phi",
        [](cplx x, const MaassFormData& d, std::int64_t T, const std::string& reading) {
            const DualReading r = reading == "A" ? DualReading::A : reading == "B" ? DualReading::B : DualReading::Plain;
            const auto g = g_phi(x, d, T, r);
            return py::make_tuple(g.value, g.tail_bound);
        },
        py::arg("x"), py::arg("data"), py::arg("T"), py::arg("reading") = "plain");

    m.def(
        "run_verify",
        [](bool quick) {
            VerifyOptions opt;
            opt.quick = quick;
            std::vector<SuiteResult> rs;
            {
                py::gil_scoped_release release;
                rs = run_verify(opt);
            }
            py::list out;
            for (const auto& r : rs) out.append(py::make_tuple(r.name, r.passed, r.detail));
            return out;
        },
        py::arg("quick") = true);
}
