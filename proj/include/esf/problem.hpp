#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "esf/assembly.hpp"
#include "esf/radial.hpp"

namespace esf {

struct RectangleDomain {
    double width = 1.0;
    double height = 1.0;
};

struct BallDomain {
    int dim = 2;
};

using Domain = std::variant<RectangleDomain, BallDomain>;

double domain_measure(const Domain& domain);
std::string domain_label(const Domain& domain);

struct ProblemSpec {
    Domain domain = RectangleDomain{};
    double p = 4.0;
    // Rectangles: nx = resolution, ny = round(resolution * height / width),
    // which keeps elements square. Balls: nr = resolution.
    int resolution = 32;
    double descent_tol = 1e-6;
    double solver_tol = 1e-10;
    int max_iters = 500;
    int max_halvings = 30;
    int n_test_functions = 20;
    std::uint64_t seed = 1;

    bool radial() const { return std::holds_alternative<BallDomain>(domain); }

    // Throws std::invalid_argument: bad sizes or tolerances, p < 1, the
    // sublinear range 1 < p < 2, p in (2, 2+1e-6] (projection exponent
    // blows up), or p >= 2n/(n-2) for balls with n >= 3.
    void validate() const;
};

// Mesh plus assembled operators for one problem, planar or radial.
// Quadratic forms and integrals accumulate in long double with a fixed
// element order so reruns are bit-identical.
class Discretization {
public:
    explicit Discretization(QuadMesh mesh);
    explicit Discretization(RadialMesh mesh);
    static Discretization make(const ProblemSpec& spec);

    bool radial() const { return radial_.has_value(); }
    const QuadMesh& quad_mesh() const;
    const RadialMesh& radial_mesh() const;
    int n_nodes() const;
    const SparseSymMatrix& stiffness() const { return K_; }
    const SparseSymMatrix& mass() const { return M_; }
    const std::vector<int>& boundary() const;
    const DirichletSystem& reduced() const { return sys_; }

    // Raw quadrature integrals (radial ones omit the sphere factor).
    double dirichlet_energy(const NodalField& u) const;
    double pnorm_power(const NodalField& u, double p) const;
    NodalField power_load(const NodalField& u, double q) const;

    // Bilinear forms u^T K v and u^T M v, element-accumulated.
    double k_form(const NodalField& a, const NodalField& b) const;
    double m_form(const NodalField& a, const NodalField& b) const;

    // Zero-boundary solve of K x = load via CG on the reduced system.
    NodalField poisson_solve(const NodalField& load, double tol) const;

    double measure_factor() const;  // 1 planar, n*omega_n radial
    double measure() const;         // |Omega|
    // Max over nodes and a 5x5 sample grid per element (5 points radial).
    double sup_norm(const NodalField& u) const;
    NodalField initial_guess() const;

private:
    std::optional<QuadMesh> quad_;
    std::optional<RadialMesh> radial_;
    Eigen::Matrix<double, 9, 9> ke_, me_;      // planar, shared by all elements
    std::vector<Eigen::Matrix3d> kel_, mel_;   // radial, per element
    std::vector<int> radial_boundary_;
    SparseSymMatrix K_, M_;
    DirichletSystem sys_;
};

}  // namespace esf
