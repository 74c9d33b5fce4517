#pragma once

#include <array>
#include <vector>

#include "esf/assembly.hpp"

namespace esf {

// 1D quadratic-element mesh on [0,1] for radial profiles in dim dimensions.
// Integrals carry the weight r^(dim-1). Only the r=1 node is constrained;
// the vanishing weight makes the natural condition at r=0 correct.
struct RadialMesh {
    int dim = 0;
    int nr = 0;
    std::vector<double> node_coords;
    std::vector<std::array<int, 3>> elements;

    int n_nodes() const { return static_cast<int>(node_coords.size()); }
    int n_elements() const { return nr; }
    double h() const { return 1.0 / nr; }
    int boundary_node() const { return 2 * nr; }
};

RadialMesh build_radial_mesh(int dim, int nr);

// Weighted forms. The constant sphere factor dim*omega_dim is omitted here
// and applied consistently wherever C_p, Lambda or mu are reported.
std::vector<Eigen::Matrix3d> radial_element_stiffness(const RadialMesh& mesh);
std::vector<Eigen::Matrix3d> radial_element_mass(const RadialMesh& mesh);
SparseSymMatrix assemble_radial_stiffness(const RadialMesh& mesh);
SparseSymMatrix assemble_radial_mass(const RadialMesh& mesh);
NodalField assemble_radial_power_load(const RadialMesh& mesh, const NodalField& u, double q);
double integrate_radial(const RadialMesh& mesh, const NodalField& u, IntegralKind kind,
                        double p = 2.0);

DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const RadialMesh& mesh);

// Volume of the unit ball in R^n (half-integer Gamma recursion, exact).
double unit_ball_volume(int n);

// Quadratic interpolant value at radius r in [0,1].
double radial_eval(const RadialMesh& mesh, const NodalField& u, double r);

struct SuperlevelResult {
    double r_star;  // largest r with u(r) > t
    double mu;      // omega_n * r_star^n
};

// Superlevel data for a sup-normalized radial profile, t in (0,1). Outside-in
// element scan, then bisection inside the bracketing element.
SuperlevelResult radial_value_and_measure(const RadialMesh& mesh, const NodalField& u,
                                          double t);

}  // namespace esf
