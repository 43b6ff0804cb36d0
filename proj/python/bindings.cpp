#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "chainlab/adversarial.hpp"
#include "chainlab/bessel.hpp"
#include "chainlab/bounds.hpp"
#include "chainlab/errors.hpp"
#include "chainlab/finite_chain.hpp"
#include "chainlab/gaussian.hpp"
#include "chainlab/propagator.hpp"
#include "chainlab/stochastic.hpp"
#include "chainlab/suite.hpp"

namespace py = pybind11;
using namespace chainlab;

namespace {

py::object to_py(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

py::object report_dict(const ExperimentReport& r) { return to_py(r.to_json()); }

std::optional<IndexRange> out_range(const std::optional<std::pair<std::int64_t, std::int64_t>>& w) {
    if (!w) return std::nullopt;
    return IndexRange{w->first, w->second};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Infinite harmonic chain: Bessel kernels, propagation and Monte Carlo experiments";

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<ConstructionError>(m, "ConstructionError", PyExc_RuntimeError);
    py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

    m.attr("REPORT_VERSION") = kReportVersion;

    py::enum_<Fill>(m, "Fill").value("zero", Fill::zero).value("none", Fill::none);

    py::class_<LatticeWindow>(m, "LatticeWindow")
        .def(py::init<std::int64_t, std::vector<double>, Fill>(), py::arg("offset"), py::arg("values"),
             py::arg("fill") = Fill::zero)
        .def_static("delta", &LatticeWindow::delta, py::arg("site") = 0)
        .def_property_readonly("offset", &LatticeWindow::offset)
        .def_property_readonly("values", [](const LatticeWindow& w) { return w.values(); })
        .def_property_readonly("fill", &LatticeWindow::fill)
        .def("at", &LatticeWindow::at)
        .def("inf_norm", &LatticeWindow::inf_norm)
        .def("l2_norm", &LatticeWindow::l2_norm)
        .def("__len__", &LatticeWindow::size)
        .def("__repr__", [](const LatticeWindow& w) {
            return "LatticeWindow(offset=" + std::to_string(w.offset()) + ", size=" + std::to_string(w.size()) + ")";
        });

    m.def("bessel_j", &bessel::bessel_j, py::arg("n"), py::arg("t"));
    m.def("bessel_row", [](int order_max, double t) { return bessel::bessel_row(order_max, t).values; },
          py::arg("order_max"), py::arg("t"));
    m.def("bessel_j_oracle", py::overload_cast<int, double>(&bessel::bessel_j_oracle), py::arg("n"), py::arg("t"));

    m.def("light_cone_window", &propagator::light_cone_window, py::arg("omega1"), py::arg("t"),
          py::arg("eps") = propagator::kDefaultEps);
    m.def(
        "kernel_row",
        [](double omega1, double t, double eps) {
            const auto row = propagator::kernel_row(omega1, t, eps);
            return py::make_tuple(row.half_width, row.a, row.b);
        },
        py::arg("omega1"), py::arg("t"), py::arg("eps") = propagator::kDefaultEps);
    m.def(
        "evolve",
        [](const LatticeWindow& q0, std::optional<LatticeWindow> p0, double omega1, double t, double eps,
           std::optional<std::pair<std::int64_t, std::int64_t>> window) {
            if (p0) return propagator::evolve(q0, *p0, omega1, t, eps, out_range(window));
            return propagator::evolve(q0, omega1, t, eps, out_range(window));
        },
        py::arg("q0"), py::arg("p0") = py::none(), py::arg("omega1") = 1.0, py::arg("t") = 1.0,
        py::arg("eps") = propagator::kDefaultEps, py::arg("window") = py::none());
    m.def("cos_norm", &propagator::cos_norm, py::arg("omega1"), py::arg("t"),
          py::arg("eps") = propagator::kDefaultEps);

    m.def("gamma", [] { return bounds::solve_gamma().gamma; });
    m.def("upper_envelope", &bounds::upper_envelope, py::arg("omega1"), py::arg("t"), py::arg("q0_inf_norm"));
    m.def(
        "verify_upper_bound",
        [](int n_samples, double omega1, std::vector<double> t_grid, std::uint64_t seed) {
            return report_dict(bounds::verify_upper_bound(n_samples, omega1, t_grid, seed));
        },
        py::arg("n_samples"), py::arg("omega1"), py::arg("t_grid"), py::arg("seed") = 1);

    m.def(
        "adversarial_growth",
        [](double T, double omega1, int sign) {
            adversarial::PlanOptions po;
            po.sign = sign;
            const auto plan = adversarial::build_support_set(T, omega1, po);
            auto out = report_dict(adversarial::measure_growth(plan));
            out["support"] = plan.support;
            return out;
        },
        py::arg("T"), py::arg("omega1") = 0.5, py::arg("sign") = 1);

    m.def(
        "verlet",
        [](const LatticeWindow& q0, double omega1, double t_end, double dt, std::size_t size,
           std::pair<std::int64_t, std::int64_t> window) {
            const auto chain = finite::embed(q0, LatticeWindow::zeros(q0.range()), size, omega1,
                                             finite::Boundary::fixed_zero);
            const auto res = finite::integrate(chain, dt, t_end);
            return finite::extract(res.chain, IndexRange{window.first, window.second});
        },
        py::arg("q0"), py::arg("omega1"), py::arg("t_end"), py::arg("dt"), py::arg("size"), py::arg("window"));

    m.def(
        "exact_covariance", &stochastic::exact_covariance, py::arg("t"), py::arg("s"), py::arg("sigma2") = 1.0);
    m.def(
        "empirical_covariance",
        [](std::string distribution, std::int64_t n_samples, std::uint64_t seed, double omega1, double t,
           std::vector<double> s_grid) {
            stochastic::EnsembleSpec spec;
            spec.distribution = stochastic::parse_distribution(distribution);
            spec.n_samples = n_samples;
            spec.seed = seed;
            return report_dict(stochastic::empirical_covariance(spec, omega1, t, s_grid).report);
        },
        py::arg("distribution") = "rademacher", py::arg("n_samples") = 10000, py::arg("seed") = 1,
        py::arg("omega1") = 0.5, py::arg("t") = 10.0, py::arg("s_grid") = std::vector<double>{0.0, 1.0});

    m.def("sup_bound", &gaussian::sup_bound, py::arg("delta"), py::arg("a"), py::arg("n"));
    m.def(
        "gaussian_sup",
        [](double a, double delta, int n, std::int64_t n_samples, std::uint64_t seed) {
            return report_dict(gaussian::sup_probability_mc(gaussian::make_grid_spec(a, delta, n), n_samples, seed));
        },
        py::arg("a") = 1.0, py::arg("delta") = 0.1, py::arg("n") = 20, py::arg("n_samples") = 5000,
        py::arg("seed") = 1);

    m.def(
        "run_suite",
        [](std::uint64_t seed, std::vector<std::string> only) {
            suite::SuiteConfig sc;
            sc.seed = seed;
            sc.only = std::move(only);
            return report_dict(suite::run_suite(sc).report);
        },
        py::arg("seed") = suite::SuiteConfig{}.seed, py::arg("only") = std::vector<std::string>{});
}
