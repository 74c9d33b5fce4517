#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "esf/analysis.hpp"
#include "esf/mountain_pass.hpp"

namespace py = pybind11;

namespace {

struct PySolution {
    std::shared_ptr<esf::Discretization> disc;
    esf::SolveReport report;
};

PySolution py_solve(const std::string& domain, double p, double width, double height,
                    int dim, int resolution, double descent_tol, double solver_tol,
                    int max_iters, int max_halvings, std::uint64_t seed,
                    int n_test_functions) {
    esf::ProblemSpec spec;
    if (domain == "rect")
        spec.domain = esf::RectangleDomain{width, height};
    else if (domain == "ball")
        spec.domain = esf::BallDomain{dim};
    else
        throw std::invalid_argument("domain must be 'rect' or 'ball'");
    spec.p = p;
    spec.resolution = resolution;
    spec.descent_tol = descent_tol;
    spec.solver_tol = solver_tol;
    spec.max_iters = max_iters;
    spec.max_halvings = max_halvings;
    spec.seed = seed;
    spec.n_test_functions = n_test_functions;
    spec.validate();

    auto disc = std::make_shared<esf::Discretization>(esf::Discretization::make(spec));
    esf::SolveReport report = esf::solve(spec, *disc);
    return PySolution{std::move(disc), std::move(report)};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Extremal Sobolev functions on rectangles and balls";

    py::class_<PySolution>(m, "Solution")
        .def_property_readonly("domain",
                               [](const PySolution& s) {
                                   return esf::domain_label(s.report.spec.domain);
                               })
        .def_property_readonly("p",
                               [](const PySolution& s) { return s.report.spec.p; })
        .def_property_readonly("resolution",
                               [](const PySolution& s) { return s.report.spec.resolution; })
        .def_property_readonly("cp", [](const PySolution& s) { return s.report.cp; })
        .def_property_readonly("lam", [](const PySolution& s) { return s.report.lambda; })
        .def_property_readonly("sup_factor",
                               [](const PySolution& s) { return s.report.sup_factor; })
        .def_property_readonly("converged",
                               [](const PySolution& s) { return s.report.converged; })
        .def_property_readonly("iterations",
                               [](const PySolution& s) { return s.report.iterations; })
        .def_property_readonly("stop_reason",
                               [](const PySolution& s) { return s.report.stop_reason; })
        .def_property_readonly("energy_history",
                               [](const PySolution& s) { return s.report.energy_history; })
        .def_property_readonly("residual_mean",
                               [](const PySolution& s) { return s.report.residuals.mean_abs; })
        .def_property_readonly("residual_max",
                               [](const PySolution& s) { return s.report.residuals.max_abs; })
        .def_property_readonly(
            "values", [](const PySolution& s) -> Eigen::VectorXd { return s.report.u; })
        .def_property_readonly(
            "coords",
            [](const PySolution& s) -> py::object {
                if (!s.disc->radial()) {
                    const esf::QuadMesh& mesh = s.disc->quad_mesh();
                    Eigen::MatrixXd coords(mesh.n_nodes(), 2);
                    for (int i = 0; i < mesh.n_nodes(); ++i) {
                        coords(i, 0) = mesh.node_coords[i].x();
                        coords(i, 1) = mesh.node_coords[i].y();
                    }
                    return py::cast(coords);
                }
                const esf::RadialMesh& mesh = s.disc->radial_mesh();
                Eigen::VectorXd radii(mesh.n_nodes());
                for (int i = 0; i < mesh.n_nodes(); ++i) radii[i] = mesh.node_coords[i];
                return py::cast(radii);
            })
        .def(
            "distribution",
            [](const PySolution& s, std::optional<std::vector<double>> t_grid) {
                const std::vector<double> grid =
                    t_grid ? std::move(*t_grid) : esf::default_t_grid();
                esf::DistributionCurve curve =
                    esf::distribution(*s.disc, s.report.u, s.report.spec.p, grid);
                Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(
                    curve.t_grid.data(), static_cast<Eigen::Index>(curve.t_grid.size()));
                Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(
                    curve.mu.data(), static_cast<Eigen::Index>(curve.mu.size()));
                return py::make_tuple(t, mu);
            },
            py::arg("t_grid") = py::none())
        .def(
            "residuals",
            [](const PySolution& s, int count, std::uint64_t seed) {
                esf::ResidualReport rep = esf::residual_report(
                    *s.disc, s.report.u, s.report.lambda, s.report.spec.p, count, seed);
                py::dict out;
                out["values"] = rep.values;
                out["normalized"] = rep.normalized;
                out["mean_abs"] = rep.mean_abs;
                out["max_abs"] = rep.max_abs;
                out["count"] = rep.count;
                out["seed"] = rep.seed;
                return out;
            },
            py::arg("count") = 20, py::arg("seed") = 1);

    m.def("solve", &py_solve, py::arg("domain") = "rect", py::arg("p") = 4.0,
          py::arg("width") = 1.0, py::arg("height") = 1.0, py::arg("dim") = 2,
          py::arg("resolution") = 32, py::arg("descent_tol") = 1e-6,
          py::arg("solver_tol") = 1e-10, py::arg("max_iters") = 500,
          py::arg("max_halvings") = 30, py::arg("seed") = 1,
          py::arg("n_test_functions") = 20,
          "Compute the extremal for one exponent and return a Solution");
    m.def("bessel_j", &esf::bessel_j, py::arg("order"), py::arg("x"));
    m.def("bessel_j_first_zero", &esf::bessel_j_first_zero, py::arg("order"));
    m.def("unit_ball_volume", &esf::unit_ball_volume, py::arg("dim"));
    m.def("rescale_lambda", &esf::rescale_lambda, py::arg("a"), py::arg("p"));
}
