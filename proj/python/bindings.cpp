#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sympidx/gallery.hpp"
#include "sympidx/index.hpp"
#include "sympidx/path.hpp"
#include "sympidx/path_json.hpp"
#include "sympidx/recurrence.hpp"

namespace py = pybind11;
using namespace sympidx;

namespace {

IndexOptions index_options(double snap_tol, double proximity_tol, double integer_tol, double cluster_tol) {
    IndexOptions o;
    o.snap_tol = snap_tol;
    o.proximity_tol = proximity_tol;
    o.integer_tol = integer_tol;
    o.spectrum.cluster_tol = cluster_tol;
    return o;
}

#define SYMPIDX_TOL_ARGS                                                                    \
    py::arg("snap_tol") = 1e-7, py::arg("proximity_tol") = 1e-5, py::arg("integer_tol") = 1e-6, \
        py::arg("cluster_tol") = 1e-3

}  // namespace

PYBIND11_MODULE(_sympidx, m) {
    m.doc() = "Bott functions, Conley-Zehnder indices and index recurrence for symplectic paths";

    static py::handle error = py::exception<Error>(m, "Error", PyExc_ValueError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = error(e.what());
            inst.attr("kind") = error_kind_name(e.kind());
            PyErr_SetObject(error.ptr(), inst.ptr());
        }
    });

    py::class_<SymplecticPath>(m, "Path")
        .def_property_readonly("dim", &SymplecticPath::dim)
        .def_property_readonly("duration", &SymplecticPath::duration)
        .def_property_readonly("times", &SymplecticPath::times)
        .def("__len__", &SymplecticPath::size)
        .def("sample", [](const SymplecticPath& p, size_t i) -> Mat { return p.samples().at(i); })
        .def_property_readonly("endpoint", [](const SymplecticPath& p) -> Mat { return p.samples().back(); });

    m.def(
        "realize_json",
        [](const std::string& text, int resolution) {
            RealizeOptions ro;
            ro.resolution = resolution;
            return realize(parse_path_document(text), ro);
        },
        py::arg("document"), py::arg("resolution") = 2048);

    m.def("iterate", py::overload_cast<const SymplecticPath&, int>(&iterate), py::arg("path"), py::arg("k"));
    m.def("inverse", py::overload_cast<const SymplecticPath&>(&inverse));
    m.def("direct_sum", py::overload_cast<const std::vector<SymplecticPath>&>(&direct_sum));
    m.def("product", py::overload_cast<const std::vector<SymplecticPath>&>(&product));

    m.def(
        "cz_index",
        [](const SymplecticPath& p, double a, double b, double c, double d) { return cz_index(p, index_options(a, b, c, d)); },
        py::arg("path"), SYMPIDX_TOL_ARGS);
    m.def(
        "mu_rs", [](const SymplecticPath& p, double a, double b, double c, double d) { return mu_rs(p, index_options(a, b, c, d)); },
        py::arg("path"), SYMPIDX_TOL_ARGS);
    m.def(
        "bott",
        [](const SymplecticPath& p, double angle, double a, double b, double c, double d) {
            return bott(p, angle, index_options(a, b, c, d));
        },
        py::arg("path"), py::arg("angle"), SYMPIDX_TOL_ARGS);
    m.def(
        "bott_plus",
        [](const SymplecticPath& p, double angle, double a, double b, double c, double d) {
            return bott_plus(p, angle, index_options(a, b, c, d));
        },
        py::arg("path"), py::arg("angle"), SYMPIDX_TOL_ARGS);
    m.def(
        "splitting_numbers",
        [](const SymplecticPath& p, double angle, double a, double b, double c, double d) {
            return splitting_numbers(p, angle, index_options(a, b, c, d));
        },
        py::arg("path"), py::arg("angle"), SYMPIDX_TOL_ARGS);
    m.def(
        "nullity",
        [](const SymplecticPath& p, double angle, double a, double b, double c, double d) {
            return nullity_at(p, angle, index_options(a, b, c, d));
        },
        py::arg("path"), py::arg("angle") = 0.0, SYMPIDX_TOL_ARGS);
    m.def(
        "mean_index",
        [](const SymplecticPath& p, double a, double b, double c, double d) { return mean_index(p, index_options(a, b, c, d)); },
        py::arg("path"), SYMPIDX_TOL_ARGS);
    m.def(
        "defect", [](const SymplecticPath& p, double a, double b, double c, double d) { return defect(p, index_options(a, b, c, d)); },
        py::arg("path"), SYMPIDX_TOL_ARGS);
    m.def(
        "sdc", [](const SymplecticPath& p, double a, double b, double c, double d) { return sdc_value(p, index_options(a, b, c, d)); },
        py::arg("path"), SYMPIDX_TOL_ARGS);
    m.def(
        "index_report_json",
        [](const SymplecticPath& p, int grid) { return index_report_to_json(index_report(p, grid)).dump(); },
        py::arg("path"), py::arg("grid") = 64);

    m.def(
        "find_irt_json",
        [](const std::vector<SymplecticPath>& paths, double eta, int ell0, int N, long k_bound) -> py::object {
            auto c = find_irt(paths, eta, ell0, N, k_bound);
            if (!c) return py::none();
            return py::str(certificate_to_json(*c).dump());
        },
        py::arg("paths"), py::arg("eta") = 0.5, py::arg("ell0") = 1, py::arg("N") = 1, py::arg("k_bound") = 100000);
    m.def(
        "verify_irt_json",
        [](const std::vector<SymplecticPath>& paths, const std::string& cert) {
            return ledger_to_json(verify_irt(paths, certificate_from_json(nlohmann::json::parse(cert)))).dump();
        },
        py::arg("paths"), py::arg("certificate"));

    m.def(
        "perturbed_gamma0",
        [](int n, long eps_num, long eps_den, double r0, double C, double eps_prime) {
            ExampleParams p;
            p.n = n;
            p.eps_num = eps_num;
            p.eps_den = eps_den;
            p.r0 = r0;
            p.C = C;
            p.eps_prime = eps_prime;
            p.validate();
            Gamma0Report r = perturbed_gamma0(p);
            py::dict d;
            d["mu"] = r.mu;
            d["sdc"] = r.sdc;
            d["mu_unshifted"] = r.mu_unshifted;
            d["defect"] = r.defect;
            return d;
        },
        py::arg("n") = 2, py::arg("eps_num") = 1, py::arg("eps_den") = 10, py::arg("r0") = 0.05, py::arg("C") = 0.97,
        py::arg("eps_prime") = 1e-3);
}
