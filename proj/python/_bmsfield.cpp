#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bmsfield/bmsgroup.hpp"
#include "bmsfield/config.hpp"
#include "bmsfield/errors.hpp"
#include "bmsfield/induced.hpp"
#include "bmsfield/serialize.hpp"
#include "bmsfield/supermomenta.hpp"
#include "bmsfield/verify.hpp"
#include "bmsfield/whitenoise.hpp"

namespace py = pybind11;
using namespace bms;

namespace {

SphereFunction sphere_from(int lmax, const std::vector<double>& c) { return SphereFunction(lmax, c); }

std::vector<double> coeffs_of(const SphereFunction& f) { return {f.coeffs().begin(), f.coeffs().end()}; }

int lmax_for(std::size_t n) {
    int l = 0;
    while (static_cast<std::size_t>(harmonic_count(l)) < n) ++l;
    if (static_cast<std::size_t>(harmonic_count(l)) != n)
        throw InputShapeError("coefficient count " + std::to_string(n) + " is not (L+1)^2");
    return l;
}

} // namespace

PYBIND11_MODULE(_bmsfield, m) {
    m.doc() = "BMS group, supermomenta, white-noise operators and induced representations";

    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<InputShapeError>(m, "InputShapeError", PyExc_ValueError);
    py::register_exception<DegreeCapError>(m, "DegreeCapError", PyExc_OverflowError);
    py::register_exception<ConstraintError>(m, "ConstraintError", PyExc_RuntimeError);
    py::register_exception<CoverageError>(m, "CoverageError", PyExc_RuntimeError);
    py::register_exception<UnsupportedDirectionError>(m, "UnsupportedDirectionError", PyExc_ValueError);

    py::class_<SL2C>(m, "SL2C")
        .def(py::init<cplx, cplx, cplx, cplx>(), py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"))
        .def_static("identity", &SL2C::identity)
        .def_static("rotation", &SL2C::rotation, py::arg("axis"), py::arg("angle"))
        .def_static("boost", &SL2C::boost, py::arg("direction"), py::arg("rapidity"))
        .def_property_readonly("a", &SL2C::a)
        .def_property_readonly("b", &SL2C::b)
        .def_property_readonly("c", &SL2C::c)
        .def_property_readonly("d", &SL2C::d)
        .def("matrix", &SL2C::matrix)
        .def("inverse", &SL2C::inverse)
        .def("__neg__", [](const SL2C& s) { return -s; })
        .def("__mul__", [](const SL2C& x, const SL2C& y) { return x * y; });

    m.def("mobius", [](const SL2C& lam, cplx z) {
        const RiemannPoint w = mobius(lam, RiemannPoint::finite(z));
        return w.is_infinity() ? py::object(py::none()) : py::object(py::cast(w.value()));
    }, py::arg("lam"), py::arg("zeta"), "Image of a finite point; None for the point at infinity.");
    m.def("conformal_factor", [](const SL2C& lam, cplx z) { return conformal_factor(lam, RiemannPoint::finite(z)); },
          py::arg("lam"), py::arg("zeta"));
    m.def("covering_map", &covering_map, py::arg("lam"));
    m.def("lorentz_act_function", [](const SL2C& lam, const std::vector<double>& c) {
        return coeffs_of(lorentz_act_function(lam, sphere_from(lmax_for(c.size()), c)));
    }, py::arg("lam"), py::arg("coeffs"));
    m.def("evaluate", [](const std::vector<double>& c, double theta, double phi) {
        return evaluate(sphere_from(lmax_for(c.size()), c), {theta, phi});
    }, py::arg("coeffs"), py::arg("theta"), py::arg("phi"));

    m.def("project_T4", [](const std::vector<double>& beta) {
        const auto p = project_T4(Supermomentum(lmax_for(beta.size()), beta));
        return std::array<double, 4>{p[0], p[1], p[2], p[3]};
    }, py::arg("beta"));
    m.def("mass_squared", [](const std::vector<double>& beta) {
        return mass_squared(Supermomentum(lmax_for(beta.size()), beta));
    }, py::arg("beta"));
    m.def("orbit_fixed_point", [](const std::string& kind, double param, int lmax) {
        const OrbitKind k = kind == "massive" ? OrbitKind::massive
                          : kind == "massless" ? OrbitKind::massless
                                               : throw DomainError("kind must be massive or massless");
        const Supermomentum b = orbit_fixed_point(k, param, lmax);
        return std::vector<double>(b.coeffs().begin(), b.coeffs().end());
    }, py::arg("kind"), py::arg("param"), py::arg("lmax"));

    // Documents cross the boundary as JSON text; the Python wrapper converts to and from dicts.
    m.def("fourier_gauss_json", [](cplx a, cplx b, const std::string& psi) {
        return to_json(fourier_gauss(a, b, hermite_series_from_json(parse_document(psi)))).dump();
    }, py::arg("a"), py::arg("b"), py::arg("psi"));
    m.def("gaussian_norm_json", [](const std::string& psi) {
        return gaussian_norm(hermite_series_from_json(parse_document(psi)));
    }, py::arg("psi"));
    m.def("document_kind", [](const std::string& text) {
        switch (document_kind(parse_document(text))) {
        case DocumentKind::sphere_function: return "sphere_function";
        case DocumentKind::supermomentum: return "supermomentum";
        case DocumentKind::bms_element: return "bms_element";
        case DocumentKind::hermite_series: return "hermite_series";
        case DocumentKind::field_state: return "field_state";
        case DocumentKind::orbit: return "orbit";
        case DocumentKind::induced_field: return "induced_field";
        }
        return "unknown";
    }, py::arg("text"));
    m.def("roundtrip_text", &roundtrip_text, py::arg("text"));

    m.def("suite_names", &suite_names);
    m.def("run_suite_json", [](const std::string& name, const std::string& config) {
        const Config c = Config::from_json_text(config);
        py::gil_scoped_release release;
        return run_suite(name, c).to_json();
    }, py::arg("name"), py::arg("config") = "{}");

    m.def("unitarity_check", [](double rapidity, int n_chi, int n_sphere, int refine) {
        const UnitarityReport r = unitarity_check(rapidity, n_chi, n_sphere, refine);
        py::dict d;
        d["phase_drift"] = r.phase_drift;
        d["st_drift"] = r.st_drift;
        d["boost_drift"] = r.boost_drift;
        d["refined_drift"] = r.refined_drift;
        d["improvement"] = r.improvement;
        return d;
    }, py::arg("rapidity") = 0.2, py::arg("n_chi") = 60, py::arg("n_sphere") = 20, py::arg("refine") = 2);
}
