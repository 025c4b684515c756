#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "molliclt/characters.hpp"
#include "molliclt/dirichlet_l.hpp"
#include "molliclt/hecke_rankin.hpp"
#include "molliclt/io.hpp"
#include "molliclt/mollifier.hpp"
#include "molliclt/random_model.hpp"
#include "molliclt/stats.hpp"

namespace py = pybind11;
using namespace molliclt;

namespace {

LMethod parse_method(const std::string& m) {
    if (m == "afe") return LMethod::afe;
    if (m == "oracle") return LMethod::oracle;
    throw py::value_error("method must be 'afe' or 'oracle'");
}

MVariant parse_variant(const std::string& v) {
    if (v == "direct") return MVariant::direct;
    if (v == "moebius") return MVariant::moebius;
    if (v == "euler") return MVariant::euler;
    throw py::value_error("variant must be 'direct', 'moebius' or 'euler'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Mollified central values of Dirichlet L-functions";

    py::class_<CharacterTable>(m, "CharacterTable")
        .def_readonly("q", &CharacterTable::q)
        .def_readonly("g", &CharacterTable::g)
        .def("order", &CharacterTable::order)
        .def("chi", [](const CharacterTable& t, u64 a, u64 n) { return chi(t, a, n); })
        .def("is_even", [](const CharacterTable& t, u64 a) { return parity(t, a) == Parity::even; });
    m.def("build_table", &build_table, py::arg("q"));
    m.def("gauss_sums", &gauss_sums_all, py::arg("table"));

    py::class_<CentralValueSet>(m, "CentralValueSet")
        .def_readonly("q", &CentralValueSet::q)
        .def_readonly("s", &CentralValueSet::s)
        .def_readonly("values", &CentralValueSet::values)
        .def_readonly("residual_max", &CentralValueSet::residual_max);
    m.def(
        "l_values",
        [](const CharacterTable& t, cplx s, const std::string& method) {
            return parse_method(method) == LMethod::afe ? l_values_afe(t, s) : l_values_oracle(t, s);
        },
        py::arg("table"), py::arg("s") = cplx(0.5), py::arg("method") = "afe");

    py::class_<MollifierParams>(m, "MollifierParams")
        .def_readonly("q", &MollifierParams::q)
        .def_readonly("c0", &MollifierParams::c0)
        .def_readonly("theta", &MollifierParams::theta)
        .def_readonly("ell", &MollifierParams::ell)
        .def_readonly("y", &MollifierParams::y)
        .def_readonly("x", &MollifierParams::x)
        .def_readonly("warnings", &MollifierParams::warnings);
    m.def("params_desk", &params_desk, py::arg("q"), py::arg("theta"), py::arg("c0") = 1.0,
          py::arg("theta_soft_cap") = 0.5);
    m.def("params_paper", &params_paper, py::arg("q"), py::arg("eta"), py::arg("c0"));
    m.def(
        "dirichlet_mollifier",
        [](const MollifierParams& p) {
            const auto poly = build_dirichlet_mollifier(p);
            return std::make_pair(poly.support, poly.coeff);
        },
        py::arg("params"), "(support, coefficients) of the mollifier");
    m.def(
        "m_alpha_beta",
        [](const MollifierParams& p, cplx a, cplx b, const std::string& v) {
            return m_alpha_beta(p, a, b, parse_variant(v));
        },
        py::arg("params"), py::arg("alpha"), py::arg("beta"), py::arg("variant") = "moebius");

    m.def("e_trunc", &e_trunc, py::arg("ell"), py::arg("t"));
    m.def("v_cutoff", &v_cutoff, py::arg("xi"), py::arg("kf") = 12, py::arg("kg") = 16, py::arg("contour") = 0.0);

    m.def(
        "clt_experiment",
        [](const CharacterTable& t, const CentralValueSet& L, const MollifierParams& p) {
            const auto r = clt_experiment(t, L, p, default_clt_options());
            py::dict d;
            d["q"] = r.q;
            d["sigma"] = r.sigma;
            d["delta"] = r.delta;
            d["n_characters"] = r.n_characters;
            d["n_excluded"] = r.n_excluded;
            d["mean_weight"] = r.mean_weight;
            d["ks"] = r.ks;
            d["ks_max_imag"] = r.ks_max_imag;
            d["intervals_csv"] = r.intervals_csv();
            d["phi_csv"] = r.charfn_csv(true);
            d["psi_csv"] = r.charfn_csv(false);
            return d;
        },
        py::arg("table"), py::arg("central_values"), py::arg("params"));

    m.def("fnv1a64", [](const std::string& s) { return hex64(fnv1a64(s)); });
}
