#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "esf/analysis.hpp"
#include "esf/mountain_pass.hpp"

using namespace esf;

namespace {

constexpr double kPi = 3.14159265358979323846;

Discretization make_square(int res) {
    ProblemSpec spec;
    spec.domain = RectangleDomain{1.0, 1.0};
    spec.resolution = res;
    return Discretization::make(spec);
}

DistributionCurve synthetic_curve(double p, std::vector<double> mu) {
    DistributionCurve c;
    c.p = p;
    c.domain = "square";
    c.domain_measure = 1.0;
    c.t_grid = {0.2, 0.5, 0.8};
    c.mu = std::move(mu);
    return c;
}

}  // namespace

TEST_CASE("default t grid") {
    std::vector<double> grid = default_t_grid();
    REQUIRE(grid.size() == 99);
    CHECK(grid.front() == doctest::Approx(0.01));
    CHECK(grid.back() == doctest::Approx(0.99));
    for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("normalize_sup uses the interpolant's peak, not the nodal peak") {
    ProblemSpec spec;
    spec.domain = RectangleDomain{1.0, 1.0};
    spec.resolution = 1;
    Discretization disc = Discretization::make(spec);
    REQUIRE(disc.n_nodes() == 9);

    // separable values b(x) b(y) with b = (0, 1, 0.9): the quadratic pokes
    // above the largest nodal value between the last two nodes
    const double b[3] = {0.0, 1.0, 0.9};
    NodalField u(9);
    for (int ix = 0; ix < 3; ++ix)
        for (int iy = 0; iy < 3; ++iy) u[ix * 3 + iy] = b[ix] * b[iy];

    auto [unit, factor] = normalize_sup(disc, u);
    CHECK(factor == doctest::Approx(1.18265625).epsilon(1e-12));
    CHECK(disc.sup_norm(unit) == doctest::Approx(1.0).epsilon(1e-12));

    NodalField constant = NodalField::Constant(9, 2.0);
    auto [cu, cf] = normalize_sup(disc, constant);
    CHECK(cf == 2.0);
    CHECK(cu.maxCoeff() == doctest::Approx(1.0));

    CHECK_THROWS_AS(normalize_sup(disc, NodalField(NodalField::Zero(9))),
                    std::invalid_argument);
}

TEST_CASE("planar distribution reproduces the linear profile law") {
    Discretization disc = make_square(32);
    const QuadMesh& mesh = disc.quad_mesh();
    NodalField u(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) u[i] = mesh.node_coords[i].x();

    DistributionCurve curve = distribution(disc, u, 3.0, default_t_grid());
    CHECK(curve.p == 3.0);
    CHECK(curve.domain == "square");
    CHECK(curve.domain_measure == doctest::Approx(1.0));
    REQUIRE(curve.mu.size() == curve.t_grid.size());
    for (size_t k = 0; k < curve.t_grid.size(); ++k) {
        const double t = curve.t_grid[k];
        CHECK(std::abs(curve.mu[k] - (1.0 - t)) <= 1.0 / 256.0 + 1e-12);
        if (k > 0) CHECK(curve.mu[k] <= curve.mu[k - 1]);
        CHECK(curve.mu[k] >= 0.0);
        CHECK(curve.mu[k] <= 1.0);
    }
}

TEST_CASE("radial distribution is exact for the quadratic profile") {
    ProblemSpec spec;
    spec.domain = BallDomain{2};
    spec.resolution = 32;
    Discretization disc = Discretization::make(spec);
    const RadialMesh& mesh = disc.radial_mesh();
    NodalField u(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        const double r = mesh.node_coords[i];
        u[i] = 1.0 - r * r;
    }
    DistributionCurve curve = distribution(disc, u, 2.5, default_t_grid());
    CHECK(curve.domain == "ball2");
    CHECK(curve.domain_measure == doctest::Approx(kPi));
    for (size_t k = 0; k < curve.t_grid.size(); ++k)
        CHECK(curve.mu[k] ==
              doctest::Approx(kPi * (1.0 - curve.t_grid[k])).epsilon(1e-9));
}

TEST_CASE("distribution rejects bad grids") {
    Discretization disc = make_square(4);
    NodalField u = disc.initial_guess();
    CHECK_THROWS_AS(distribution(disc, u, 3.0, {}), std::invalid_argument);
    CHECK_THROWS_AS(distribution(disc, u, 3.0, {0.5, 0.4}), std::invalid_argument);
    CHECK_THROWS_AS(distribution(disc, u, 3.0, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(distribution(disc, u, 3.0, {0.5, 1.0}), std::invalid_argument);
}

TEST_CASE("quotient: homogeneity and the eigen benchmark") {
    Discretization disc = make_square(16);
    const QuadMesh& mesh = disc.quad_mesh();
    NodalField u(mesh.n_nodes());
    for (int i = 0; i < mesh.n_nodes(); ++i)
        u[i] = std::sin(kPi * mesh.node_coords[i].x()) *
               std::sin(kPi * mesh.node_coords[i].y());

    const double c2 = compute_cp(disc, u, 2.0);
    CHECK(std::abs(c2 - 2.0 * kPi * kPi) <= 1e-3 * 2.0 * kPi * kPi);

    for (double p : {2.0, 3.0, 4.0})
        for (double scale : {0.2, 5.0}) {
            const double base = compute_cp(disc, u, p);
            const double scaled = compute_cp(disc, NodalField(scale * u), p);
            CHECK(std::abs(scaled - base) <= 1e-10 * base);
        }

    CHECK_THROWS_AS(compute_cp(disc, NodalField(NodalField::Zero(disc.n_nodes())), 2.0),
                    std::invalid_argument);
}

TEST_CASE("multiplier formula ties the quotient to the p-integral") {
    Discretization disc = make_square(8);
    NodalField u = nehari_project(disc, disc.initial_guess(), 4.0);
    auto [unit, factor] = normalize_sup(disc, u);
    const double p = 4.0;
    const double lambda = compute_lambda(disc, unit, p);
    const double cp = compute_cp(disc, unit, p);
    const double pn = disc.measure_factor() * disc.pnorm_power(unit, p);
    CHECK(lambda == doctest::Approx(cp * std::pow(pn, (2.0 - p) / p)).epsilon(1e-13));
}

TEST_CASE("constants report carries the named specializations") {
    ProblemSpec spec;
    spec.domain = BallDomain{2};
    spec.p = 1.0;
    spec.resolution = 16;
    Discretization disc = Discretization::make(spec);
    SolveReport rep = solve(spec, disc);

    ConstantsReport torsion = constants_report(disc, rep.u, 1.0);
    REQUIRE(torsion.torsional_rigidity.has_value());
    CHECK_FALSE(torsion.principal_frequency.has_value());
    CHECK(*torsion.torsional_rigidity == doctest::Approx(1.0 / torsion.cp).epsilon(1e-14));
    CHECK(torsion.cp == doctest::Approx(8.0 / kPi).epsilon(1e-9));

    spec.p = 2.0;
    SolveReport eigen = solve(spec, disc);
    ConstantsReport freq = constants_report(disc, eigen.u, 2.0);
    REQUIRE(freq.principal_frequency.has_value());
    CHECK_FALSE(freq.torsional_rigidity.has_value());
    CHECK(*freq.principal_frequency == doctest::Approx(freq.cp));

    ConstantsReport plain = constants_report(disc, eigen.u, 3.0);
    CHECK_FALSE(plain.torsional_rigidity.has_value());
    CHECK_FALSE(plain.principal_frequency.has_value());
}

TEST_CASE("monotonicity report: consistent, violated, floored, degenerate") {
    DistributionCurve a = synthetic_curve(2.5, {0.9, 0.5, 0.2});
    DistributionCurve b = synthetic_curve(3.0, {0.8, 0.4, 0.1});
    DistributionCurve c = synthetic_curve(4.0, {0.7, 0.3, 0.05});

    MonotonicityReport good = monotonicity_report({a, b, c});
    CHECK(good.consistent);
    CHECK(good.verdict() == "CONSISTENT");
    CHECK(good.violations == 0);
    CHECK(good.tested == 9);
    CHECK(good.rows.size() == 9);
    CHECK(good.floor == doctest::Approx(1e-4));
    for (const auto& row : good.rows) {
        CHECK(row.p_low < row.p_high);
        CHECK(row.ok);
    }

    // order of the inputs must not matter
    MonotonicityReport reordered = monotonicity_report({c, a, b});
    CHECK(reordered.consistent);
    CHECK(reordered.tested == 9);

    DistributionCurve inverted = synthetic_curve(3.0, {0.95, 0.6, 0.3});
    MonotonicityReport bad = monotonicity_report({a, inverted});
    CHECK_FALSE(bad.consistent);
    CHECK(bad.verdict() == "NOT-CONSISTENT");
    CHECK(bad.violations == 3);

    // ties are violations: strictly decreasing is required
    MonotonicityReport tied = monotonicity_report({a, synthetic_curve(3.0, a.mu)});
    CHECK_FALSE(tied.consistent);
    CHECK(tied.violations == 3);

    // values under the floor are recorded but not tested
    DistributionCurve floored = synthetic_curve(3.0, {0.8, 0.4, 5e-5});
    MonotonicityReport part = monotonicity_report({a, floored});
    CHECK(part.consistent);
    CHECK(part.tested == 2);
    CHECK(part.rows.size() == 3);
    CHECK_FALSE(part.rows[2].tested);
    CHECK(part.rows[2].ok);

    // nothing tested at all cannot be called consistent
    DistributionCurve tiny_a = synthetic_curve(2.5, {5e-5, 4e-5, 3e-5});
    DistributionCurve tiny_b = synthetic_curve(3.0, {4e-5, 3e-5, 2e-5});
    MonotonicityReport none = monotonicity_report({tiny_a, tiny_b});
    CHECK_FALSE(none.consistent);
    CHECK(none.tested == 0);
    CHECK(none.violations == 0);
}

TEST_CASE("monotonicity report rejects malformed input") {
    DistributionCurve a = synthetic_curve(2.5, {0.9, 0.5, 0.2});
    DistributionCurve b = synthetic_curve(3.0, {0.8, 0.4, 0.1});

    CHECK_THROWS_AS(monotonicity_report({a}), std::invalid_argument);

    DistributionCurve other_grid = b;
    other_grid.t_grid = {0.2, 0.5, 0.9};
    CHECK_THROWS_AS(monotonicity_report({a, other_grid}), std::invalid_argument);

    DistributionCurve other_domain = b;
    other_domain.domain = "ball2";
    CHECK_THROWS_AS(monotonicity_report({a, other_domain}), std::invalid_argument);

    DistributionCurve same_p = b;
    same_p.p = 2.5;
    CHECK_THROWS_AS(monotonicity_report({a, same_p}), std::invalid_argument);
}
