#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "esf/problem.hpp"
#include "esf/verify.hpp"

namespace esf {

// Scale u onto the Nehari manifold:
// u -> (int |grad u|^2 / int |u|^p)^(1/(p-2)) * u.
NodalField nehari_project(const Discretization& disc, const NodalField& u, double p);

// I(u) = 1/2 int |grad u|^2 - 1/p int |u|^p.
double energy(const Discretization& disc, const NodalField& u, double p);

struct DescentDirection {
    NodalField v;       // unit Dirichlet energy
    double two_lambda;  // I'(u)(v) = -two_lambda
};

// Solve K vbar = f_{p-1}(u) with zero boundary values, set g = vbar - u,
// 2*lambda = sqrt(g^T K g), v = g / (2*lambda). lambda = 0 with zero
// direction signals an exact discrete solution.
DescentDirection descent_direction(const Discretization& disc, const NodalField& u,
                                   double p, double solver_tol);

struct IterationState {
    NodalField u;
    double energy = 0.0;
    NodalField v;
    double two_lambda = 0.0;
    int iteration = 0;
    int halvings = 0;
};

struct SolveReport {
    ProblemSpec spec;
    NodalField u;             // sup-normalized extremal
    double sup_factor = 0.0;  // sup of the raw solver output
    double lambda = 0.0;      // multiplier for the normalized field
    double cp = 0.0;
    std::vector<double> energy_history;
    double final_descent_norm = 0.0;
    int iterations = 0;
    int halvings_total = 0;
    bool converged = false;
    // descent-tol | descent-tol-relative | max-iters | stalled | direct | eigen
    std::string stop_reason;
    ResidualReport residuals;
};

using IterationObserver = std::function<void(const IterationState&)>;

// The minimax loop: project the guess onto the Nehari manifold, walk the
// steepest-descent direction with step halving, stop once 2*lambda falls
// under descent_tol. When the line search exhausts max_halvings the stop
// test is retried against descent_tol * sqrt(dirichlet energy), since with
// Lambda fixed at 1 the iterate amplitude (and with it the resolvable
// energy decrement) grows without bound as p approaches 2.
SolveReport mountain_pass_solve(const ProblemSpec& spec, const Discretization& disc,
                                std::optional<NodalField> guess = {},
                                const IterationObserver& observer = nullptr);

// p=1: one linear solve K d = load(q=0). Reports C_1 and P = 1/C_1 via cp.
SolveReport solve_torsion_p1(const ProblemSpec& spec, const Discretization& disc);

// p=2: inverse power iteration on K d = lambda M d from a positive start.
SolveReport solve_eigen_p2(const ProblemSpec& spec, const Discretization& disc);

// Dispatch on p (1 -> torsion, 2 -> eigen, > 2 -> mountain pass).
SolveReport solve(const ProblemSpec& spec, const Discretization& disc);
SolveReport solve(const ProblemSpec& spec);

}  // namespace esf
