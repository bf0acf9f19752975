#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cimfrac/cim.hpp"
#include "cimfrac/contour.hpp"
#include "cimfrac/experiments.hpp"
#include "cimfrac/fem.hpp"
#include "cimfrac/symbol.hpp"

namespace py = pybind11;
using namespace cimfrac;

namespace {

RunOptions options_from_kwargs(int threads, int n_cheb,
                               const std::string& cache_dir, bool use_cache) {
    RunOptions o;
    o.threads = threads;
    o.n_cheb = n_cheb;
    o.cache_dir = cache_dir;
    o.use_cache = use_cache;
    return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "contour-integral solver for time-fractional "
              "integro-differential equations";

    py::class_<FractionalOrders>(m, "FractionalOrders")
        .def(py::init<double, double>(), py::arg("alpha"), py::arg("beta"))
        .def(py::init<double, double, double>(), py::arg("alpha"),
             py::arg("beta"), py::arg("epsilon"))
        .def_readonly("alpha", &FractionalOrders::alpha)
        .def_readonly("beta", &FractionalOrders::beta)
        .def_readonly("epsilon", &FractionalOrders::epsilon)
        .def_property_readonly("sector_angle", &FractionalOrders::sector_angle)
        .def("lemma_window_ok", &FractionalOrders::lemma_window_ok);

    py::class_<ContourPlan>(m, "ContourPlan")
        .def_readonly("theta", &ContourPlan::theta)
        .def_readonly("c_tilde", &ContourPlan::c_tilde)
        .def_readonly("c_work", &ContourPlan::c_work)
        .def_readonly("mu", &ContourPlan::mu)
        .def_readonly("tau", &ContourPlan::tau)
        .def_readonly("n_nodes", &ContourPlan::n_nodes)
        .def_readonly("eta_star", &ContourPlan::eta_star)
        .def_readonly("q_star", &ContourPlan::q_star)
        .def_readonly("t0", &ContourPlan::t0)
        .def_readonly("lambda_", &ContourPlan::lambda);

    py::class_<QuadratureNodes>(m, "QuadratureNodes")
        .def_readonly("phi", &QuadratureNodes::phi)
        .def_readonly("z", &QuadratureNodes::z)
        .def_readonly("dz", &QuadratureNodes::dz);

    m.def("default_epsilon", &default_epsilon, py::arg("alpha"),
          py::arg("beta"));
    m.def("strip_half_width", &strip_half_width, py::arg("orders"),
          py::arg("theta"));
    m.def("p_of_eta", &p_of_eta, py::arg("eta"), py::arg("lambda_"),
          py::arg("theta"), py::arg("c_work"));
    m.def(
        "optimize_eta",
        [](double lam, double theta, double cw) {
            EtaOptimum o = optimize_eta(lam, theta, cw);
            return py::make_tuple(o.eta_star, o.q_star);
        },
        py::arg("lambda_"), py::arg("theta"), py::arg("c_work"));
    m.def("make_plan", &make_plan, py::arg("orders"),
          py::arg("theta") = kDefaultTheta, py::arg("t0") = kDefaultT0,
          py::arg("lambda_") = kDefaultLambda, py::arg("n_nodes") = 60);
    m.def("nodes", &nodes, py::arg("plan"));

    m.def(
        "kernel",
        [](Complex z, const FractionalOrders& o) {
            KernelValue k = kernel(z, o);
            return py::make_tuple(k.m, k.shift);
        },
        py::arg("z"), py::arg("orders"), "returns (m(z), 1 + z^-alpha)");
    m.def("sector_check", &sector_check, py::arg("z"), py::arg("orders"));
    m.def("scalar_resolvent", &scalar_resolvent, py::arg("z"),
          py::arg("orders"), py::arg("u0"), py::arg("fhat"));

    py::class_<TimeSample>(m, "TimeSample")
        .def_readonly("t", &TimeSample::t)
        .def_readonly("u", &TimeSample::u);

    py::class_<ErrorRow>(m, "ErrorRow")
        .def_readonly("param", &ErrorRow::param)
        .def_readonly("error", &ErrorRow::error)
        .def_readonly("order", &ErrorRow::order)
        .def_readonly("error_at_table_t", &ErrorRow::error_at_table_t);

    py::class_<ErrorTable>(m, "ErrorTable")
        .def_readonly("case_id", &ErrorTable::case_id)
        .def_readonly("rows", &ErrorTable::rows)
        .def("to_csv", &table_to_csv);

    py::class_<ExperimentCase>(m, "ExperimentCase")
        .def_readonly("dimension", &ExperimentCase::dimension)
        .def_readonly("table_time", &ExperimentCase::table_time)
        .def_readwrite("theta", &ExperimentCase::theta)
        .def_readwrite("t0", &ExperimentCase::t0)
        .def_readwrite("lambda_", &ExperimentCase::lambda);

    m.def(
        "make_case",
        [](const std::string& id, double alpha, double beta,
           std::optional<double> epsilon) {
            return make_case(parse_case_id(id), alpha, beta, epsilon);
        },
        py::arg("case_id"), py::arg("alpha"), py::arg("beta"),
        py::arg("epsilon") = std::nullopt);

    m.def(
        "run_case",
        [](const ExperimentCase& cs, int n_nodes, double h,
           const std::vector<double>& times, int threads, int n_cheb) {
            return run_case(cs, n_nodes, h, times,
                            options_from_kwargs(threads, n_cheb, "", false));
        },
        py::arg("case_"), py::arg("n_nodes"), py::arg("h"), py::arg("times"),
        py::arg("threads") = 0, py::arg("n_cheb") = 0);

    m.def(
        "temporal_error_table",
        [](const ExperimentCase& cs, const std::vector<int>& n_values,
           double h, int threads, const std::string& cache_dir) {
            return temporal_error_table(
                cs, n_values, h,
                options_from_kwargs(threads, 0, cache_dir, !cache_dir.empty()));
        },
        py::arg("case_"), py::arg("n_values"), py::arg("h"),
        py::arg("threads") = 0, py::arg("cache_dir") = "");

    m.def(
        "spatial_error_table",
        [](const ExperimentCase& cs, const std::vector<double>& h_values,
           int n_nodes, double h_ref, int threads,
           const std::string& cache_dir, bool extrapolate) {
            RunOptions o = options_from_kwargs(threads, 0, cache_dir,
                                               !cache_dir.empty());
            o.extrapolate_reference = extrapolate;
            return spatial_error_table(cs, h_values, n_nodes, h_ref, o);
        },
        py::arg("case_"), py::arg("h_values"), py::arg("n_nodes"),
        py::arg("h_ref") = 0.0, py::arg("threads") = 0,
        py::arg("cache_dir") = "", py::arg("extrapolate") = false);

    m.def("property_checks", [] {
        py::list out;
        for (const auto& r : run_property_checks())
            out.append(py::make_tuple(r.name, r.passed, r.measured));
        return out;
    });
}
