#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "esf/mesh.hpp"

namespace esf {

using SparseSymMatrix = Eigen::SparseMatrix<double>;

struct NoConvergenceError : std::runtime_error {
    double residual;
    int iterations;
    NoConvergenceError(const std::string& what, double residual_, int iterations_)
        : std::runtime_error(what), residual(residual_), iterations(iterations_) {}
};

// Single element matrices; the mesh is affine and uniform so one copy serves
// every element.
Eigen::Matrix<double, 9, 9> element_stiffness(const QuadMesh& mesh);
Eigen::Matrix<double, 9, 9> element_mass(const QuadMesh& mesh);

SparseSymMatrix assemble_stiffness(const QuadMesh& mesh);
SparseSymMatrix assemble_mass(const QuadMesh& mesh);

// f_i = int N_i * (N d)^q with negative point values clamped to 0 before
// exponentiation. q = 0 gives the constant-1 load.
NodalField assemble_power_load(const QuadMesh& mesh, const NodalField& u, double q);

// Row/column elimination onto free (interior) nodes. Keeps K SPD for CG.
struct DirichletSystem {
    SparseSymMatrix K;            // restricted to free nodes
    Eigen::VectorXd f;            // restricted load
    std::vector<int> free_nodes;  // reduced index -> full node id
    std::vector<int> reduced_of;  // full node id -> reduced index or -1
    int full_size = 0;

    Eigen::VectorXd restrict_field(const NodalField& full) const;
    NodalField extend(const Eigen::VectorXd& reduced) const;  // zeros on boundary
};

DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const std::vector<int>& boundary, int n_nodes);
DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const QuadMesh& mesh);

// Diagonally preconditioned conjugate gradients. Relative residual
// ||Ax-b||/||b|| <= tol on return; iteration cap 10*n unless given.
Eigen::VectorXd solve_spd(const SparseSymMatrix& A, const Eigen::VectorXd& b,
                          double tol = 1e-10, int max_iters = 0);

enum class IntegralKind { dirichlet_energy, pnorm_power };

// Quadrature of int |grad u|^2 or int |u|^p over the mesh.
double integrate_field(const QuadMesh& mesh, const NodalField& u, IntegralKind kind,
                       double p = 2.0);

}  // namespace esf
