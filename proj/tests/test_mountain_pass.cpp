#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "esf/analysis.hpp"
#include "esf/mountain_pass.hpp"

using namespace esf;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProblemSpec square_spec(double p, int res) {
    ProblemSpec spec;
    spec.domain = RectangleDomain{1.0, 1.0};
    spec.p = p;
    spec.resolution = res;
    return spec;
}

ProblemSpec ball_spec(int dim, double p, int res) {
    ProblemSpec spec;
    spec.domain = BallDomain{dim};
    spec.p = p;
    spec.resolution = res;
    return spec;
}

bool message_contains(const std::invalid_argument& e, const char* needle) {
    return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("problem validation accepts the supported range and rejects the rest") {
    CHECK_NOTHROW(square_spec(1.0, 8).validate());
    CHECK_NOTHROW(square_spec(2.0, 8).validate());
    CHECK_NOTHROW(square_spec(8.0, 8).validate());
    CHECK_NOTHROW(ball_spec(3, 5.999, 8).validate());

    CHECK_THROWS_AS(square_spec(0.5, 8).validate(), std::invalid_argument);
    try {
        square_spec(1.5, 8).validate();
        FAIL("p = 1.5 must be rejected");
    } catch (const std::invalid_argument& e) {
        CHECK(message_contains(e, "sublinear"));
    }
    CHECK_THROWS_AS(square_spec(2.0000005, 8).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ball_spec(3, 6.0, 8).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ball_spec(4, 4.0, 8).validate(), std::invalid_argument);
    CHECK_THROWS_AS(ball_spec(1, 2.0, 8).validate(), std::invalid_argument);

    ProblemSpec bad = square_spec(4.0, 0);
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = square_spec(4.0, 8);
    bad.descent_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = square_spec(4.0, 8);
    bad.domain = RectangleDomain{-1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("discretization resolution semantics and measures") {
    Discretization sq = Discretization::make(square_spec(4.0, 8));
    CHECK_FALSE(sq.radial());
    CHECK(sq.quad_mesh().nx == 8);
    CHECK(sq.quad_mesh().ny == 8);
    CHECK(sq.measure() == doctest::Approx(1.0));
    CHECK(sq.measure_factor() == 1.0);

    ProblemSpec tall = square_spec(4.0, 16);
    tall.domain = RectangleDomain{1.0, 4.0};
    Discretization rect = Discretization::make(tall);
    CHECK(rect.quad_mesh().nx == 16);
    CHECK(rect.quad_mesh().ny == 64);
    CHECK(rect.measure() == doctest::Approx(4.0));

    ProblemSpec wide = square_spec(4.0, 16);
    wide.domain = RectangleDomain{4.0, 1.0};
    CHECK(Discretization::make(wide).quad_mesh().ny == 4);

    Discretization ball = Discretization::make(ball_spec(3, 2.0, 12));
    CHECK(ball.radial());
    CHECK(ball.radial_mesh().nr == 12);
    CHECK(ball.measure() == doctest::Approx(4.0 * kPi / 3.0).epsilon(1e-14));
    CHECK(ball.measure_factor() == doctest::Approx(4.0 * kPi).epsilon(1e-14));
}

TEST_CASE("poisson_solve agrees with a dense factorization") {
    Discretization disc = Discretization::make(square_spec(4.0, 6));
    NodalField load = disc.power_load(NodalField::Zero(disc.n_nodes()), 0.0);
    NodalField u = disc.poisson_solve(load, 1e-12);

    const DirichletSystem& sys = disc.reduced();
    Eigen::MatrixXd dense(sys.K);
    Eigen::VectorXd x = dense.ldlt().solve(sys.restrict_field(load));
    NodalField ref = sys.extend(x);
    CHECK((u - ref).lpNorm<Eigen::Infinity>() <= 1e-9);
    for (int b : disc.boundary()) CHECK(u[b] == 0.0);
}

TEST_CASE("initial guesses are admissible") {
    Discretization sq = Discretization::make(square_spec(4.0, 8));
    NodalField g = sq.initial_guess();
    for (int b : sq.boundary()) CHECK(g[b] == 0.0);
    CHECK(g.maxCoeff() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.minCoeff() >= 0.0);

    Discretization ball = Discretization::make(ball_spec(4, 3.0, 16));
    NodalField gb = ball.initial_guess();
    CHECK(gb[0] == doctest::Approx(1.0));
    CHECK(gb[ball.radial_mesh().boundary_node()] == 0.0);
}

TEST_CASE("nehari projection: defining identity, scale invariance, errors") {
    Discretization disc = Discretization::make(square_spec(4.0, 8));
    NodalField u0 = disc.initial_guess();

    NodalField proj = nehari_project(disc, u0, 4.0);
    const double e = disc.dirichlet_energy(proj);
    const double pn = disc.pnorm_power(proj, 4.0);
    CHECK(std::abs(e - pn) <= 1e-10 * e);

    for (double c : {0.1, 3.0, 10.0}) {
        NodalField scaled = nehari_project(disc, NodalField(c * u0), 4.0);
        CHECK((scaled - proj).lpNorm<Eigen::Infinity>() <=
              1e-12 * proj.lpNorm<Eigen::Infinity>());
    }

    CHECK_THROWS_AS(nehari_project(disc, u0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(nehari_project(disc, NodalField(NodalField::Zero(disc.n_nodes())), 4.0),
                    std::invalid_argument);
}

TEST_CASE("energy splits into its two integrals and is (1/2 - 1/p) E on the manifold") {
    Discretization disc = Discretization::make(square_spec(4.0, 8));
    NodalField u = nehari_project(disc, disc.initial_guess(), 4.0);
    const double e = disc.dirichlet_energy(u);
    const double pn = disc.pnorm_power(u, 4.0);
    CHECK(energy(disc, u, 4.0) == doctest::Approx(0.5 * e - 0.25 * pn).epsilon(1e-14));
    CHECK(energy(disc, u, 4.0) == doctest::Approx(0.25 * e).epsilon(1e-10));
    CHECK_THROWS_AS(energy(disc, u, 0.5), std::invalid_argument);
}

TEST_CASE("descent direction: unit energy, exact pairing, finite-difference slope") {
    Discretization disc = Discretization::make(square_spec(4.0, 8));
    const double p = 4.0;
    NodalField u = nehari_project(disc, disc.initial_guess(), p);
    DescentDirection dir = descent_direction(disc, u, p, 1e-12);
    REQUIRE(dir.two_lambda > 0.0);

    CHECK(std::abs(disc.k_form(dir.v, dir.v) - 1.0) <= 1e-10);

    // I'(u)(v) = u^T K v - f_{p-1}(u)^T v = -2 lambda by construction
    const double pairing = disc.k_form(u, dir.v) - dir.v.dot(disc.power_load(u, p - 1.0));
    CHECK(std::abs(pairing + dir.two_lambda) <= 1e-8 * std::max(1.0, dir.two_lambda));

    // forward differences of I along v converge at first order
    const double i0 = energy(disc, u, p);
    auto fd_err = [&](double h) {
        const double diff = (energy(disc, NodalField(u + h * dir.v), p) - i0) / h;
        return std::abs(diff + dir.two_lambda);
    };
    const double e1 = fd_err(1e-3);
    const double e2 = fd_err(5e-4);
    REQUIRE(e2 > 0.0);
    const double slope = std::log2(e1 / e2);
    CHECK(slope >= 0.6);
    CHECK(slope <= 1.4);
}

TEST_CASE("mountain pass on the square at p = 4") {
    ProblemSpec spec = square_spec(4.0, 8);
    Discretization disc = Discretization::make(spec);

    int observed = 0;
    SolveReport rep = mountain_pass_solve(spec, disc, {}, [&](const IterationState& state) {
        ++observed;
        CHECK(state.energy == doctest::Approx(energy(disc, state.u, 4.0)));
    });

    CHECK(rep.converged);
    CHECK(rep.stop_reason == "descent-tol");
    CHECK(rep.final_descent_norm <= spec.descent_tol);
    CHECK(rep.iterations <= spec.max_iters);
    CHECK(observed == static_cast<int>(rep.energy_history.size()));
    for (size_t i = 1; i < rep.energy_history.size(); ++i)
        CHECK(rep.energy_history[i] < rep.energy_history[i - 1]);

    CHECK(rep.sup_factor > 1.0);
    CHECK(std::abs(disc.sup_norm(rep.u) - 1.0) <= 1e-12);
    CHECK(rep.u.minCoeff() >= -1e-8);
    const int center = 8 * 17 + 8;
    CHECK(rep.u[center] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.cp > 0.0);
    CHECK(rep.lambda > 0.0);
    CHECK(rep.residuals.count == spec.n_test_functions);
    CHECK(rep.residuals.mean_abs <= 1e-6);

    // multiplier consistency between the rescaling route and the quotient route
    CHECK(std::abs(compute_lambda(disc, rep.u, 4.0) - rep.lambda) <= 1e-6 * rep.lambda);

    CHECK_THROWS_AS(mountain_pass_solve(square_spec(2.0, 8), disc), std::invalid_argument);
}

TEST_CASE("mountain pass honors the iteration cap") {
    ProblemSpec spec = square_spec(4.0, 8);
    spec.max_iters = 1;
    Discretization disc = Discretization::make(spec);
    SolveReport rep = mountain_pass_solve(spec, disc);
    CHECK(rep.iterations == 1);
    CHECK(rep.stop_reason == "max-iters");
    CHECK_FALSE(rep.converged);
}

TEST_CASE("reruns are bitwise identical") {
    ProblemSpec spec = square_spec(4.0, 16);
    Discretization disc = Discretization::make(spec);
    SolveReport a = mountain_pass_solve(spec, disc);
    SolveReport b = mountain_pass_solve(spec, disc);
    CHECK(a.iterations == b.iterations);
    CHECK((a.u - b.u).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(a.lambda == b.lambda);
    CHECK(a.cp == b.cp);

    Discretization disc2 = Discretization::make(spec);
    SolveReport c = mountain_pass_solve(spec, disc2);
    CHECK((a.u - c.u).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("torsion on the unit square against the series value") {
    ProblemSpec spec = square_spec(1.0, 32);
    Discretization disc = Discretization::make(spec);
    SolveReport rep = solve(spec, disc);

    CHECK(rep.converged);
    CHECK(rep.stop_reason == "direct");
    CHECK(rep.iterations == 1);
    // Fourier double series truncated far beyond the mesh accuracy; the
    // grid gaps at this resolution are 5.8e-9 (sup) and 1.1e-5 (constant).
    CHECK(std::abs(rep.sup_factor - 0.07367135328154677) <= 5e-8);
    const int center = 32 * 65 + 32;
    CHECK(rep.u[center] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.lambda * rep.sup_factor == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(rep.cp - 28.45415376985699) <= 5e-5);
    CHECK(rep.residuals.mean_abs <= 1e-8);
}

TEST_CASE("torsion on the disk is exact for the quadratic profile") {
    ProblemSpec spec = ball_spec(2, 1.0, 32);
    Discretization disc = Discretization::make(spec);
    SolveReport rep = solve(spec, disc);

    CHECK(rep.converged);
    CHECK(rep.sup_factor == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(rep.lambda == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(rep.cp == doctest::Approx(8.0 / kPi).epsilon(1e-10));
    const RadialMesh& mesh = disc.radial_mesh();
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const double r = mesh.node_coords[i];
        CHECK(std::abs(rep.u[i] - (1.0 - r * r)) <= 1e-8);
    }
}

TEST_CASE("principal frequencies: square, disk, 3-ball") {
    ProblemSpec sq = square_spec(2.0, 16);
    Discretization disc = Discretization::make(sq);
    SolveReport rep = solve(sq, disc);
    CHECK(rep.converged);
    CHECK(rep.stop_reason == "eigen");
    CHECK(rep.final_descent_norm <= 1e-8);
    CHECK(std::abs(rep.cp - 2.0 * kPi * kPi) <= 1e-4 * 2.0 * kPi * kPi);
    CHECK(std::abs(rep.lambda - rep.cp) <= 1e-12 * rep.cp);

    ProblemSpec disk = ball_spec(2, 2.0, 32);
    Discretization ddisc = Discretization::make(disk);
    SolveReport drep = solve(disk, ddisc);
    CHECK(drep.converged);
    CHECK(std::abs(drep.cp - 5.783185962946783) <= 1e-4 * 5.783185962946783);

    ProblemSpec b3 = ball_spec(3, 2.0, 32);
    Discretization b3disc = Discretization::make(b3);
    SolveReport b3rep = solve(b3, b3disc);
    CHECK(b3rep.converged);
    CHECK(std::abs(b3rep.cp - kPi * kPi) <= 1e-4 * kPi * kPi);
}

TEST_CASE("solve dispatches on the exponent") {
    ProblemSpec spec = square_spec(3.0, 8);
    SolveReport rep = solve(spec);
    CHECK(rep.converged);
    CHECK((rep.stop_reason == "descent-tol" || rep.stop_reason == "descent-tol-relative"));
    CHECK(rep.cp > 0.0);
}
