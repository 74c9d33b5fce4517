#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "esf/problem.hpp"

namespace esf {

struct ResidualReport {
    std::vector<double> values;      // raw WT per test function
    std::vector<double> normalized;  // |WT| / ||w||_{W^{1,2}}
    double mean_abs = 0.0;           // of the normalized values
    double max_abs = 0.0;
    int count = 0;
    std::uint64_t seed = 0;
};

// WT_w(u) = -w^T K u + Lambda * w^T f_{p-1}(u), the weak pairing of
// Delta u + Lambda u^(p-1) with the test field w.
double weak_residual_planar(const Discretization& disc, const NodalField& u,
                            double lambda, double p, const NodalField& w);
double weak_residual_radial(const Discretization& disc, const NodalField& u,
                            double lambda, double p, const NodalField& w);
double weak_residual(const Discretization& disc, const NodalField& u, double lambda,
                     double p, const NodalField& w);

// sqrt(w^T K w + w^T M w), the discrete W^{1,2} norm used to normalize WT.
double test_function_norm(const Discretization& disc, const NodalField& w);

// Interior nodal values i.i.d. uniform on [-1,1] from a seeded generator,
// boundary values 0. Same seed, same field.
NodalField random_test_function(const Discretization& disc, std::uint64_t seed);

// count test functions with seeds seed, seed+1, ...
ResidualReport residual_report(const Discretization& disc, const NodalField& u,
                               double lambda, double p, int count, std::uint64_t seed);

// If u solves Delta u + Lambda u^(p-1) = 0, then a*u solves the same with
// Lambda * a^(2-p).
double rescale_lambda(double a, double p);

// Bessel J_nu for nu in {0, 1/2, 1, 3/2}, x in [0,20], abs error <= 1e-12.
double bessel_j(double order, double x);
double bessel_j_first_zero(double order);

// Sup-normalized reference extremals for the linear cases.
// Balls: p=1 gives 1-r^2, p=2 the Bessel profile, dim in {2,3,4}.
std::function<double(double)> analytic_extremal_ball(int dim, int p);
// Rectangles: p=2 the sine product, p=1 the truncated torsion double series.
std::function<double(double, double)> analytic_extremal_rect(double width, double height,
                                                             int p);

}  // namespace esf
