#include "esf/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace esf {

std::vector<double> default_t_grid() {
    std::vector<double> grid;
    grid.reserve(99);
    for (int i = 1; i <= 99; ++i) grid.push_back(i / 100.0);
    return grid;
}

std::pair<NodalField, double> normalize_sup(const Discretization& disc, const NodalField& u) {
    const double a = disc.sup_norm(u);
    if (!(a > 0.0))
        throw std::invalid_argument("normalize_sup: degenerate input, sup(u) is not positive");
    return {u / a, a};
}

namespace {

void check_t_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw std::invalid_argument("t_grid must be nonempty");
    double prev = 0.0;
    for (double t : t_grid) {
        if (!(t > 0.0 && t < 1.0))
            throw std::invalid_argument("t_grid values must lie in (0,1)");
        if (!(t > prev)) throw std::invalid_argument("t_grid must be strictly increasing");
        prev = t;
    }
}

}  // namespace

DistributionCurve distribution(const Discretization& disc, const NodalField& u, double p,
                               const std::vector<double>& t_grid) {
    check_t_grid(t_grid);
    if (u.size() != disc.n_nodes())
        throw std::invalid_argument("distribution: field size mismatch");

    DistributionCurve curve;
    curve.p = p;
    curve.t_grid = t_grid;
    curve.domain_measure = disc.measure();
    curve.mu.assign(t_grid.size(), 0.0);

    if (!disc.radial()) {
        const QuadMesh& mesh = disc.quad_mesh();
        curve.domain = (mesh.width == mesh.height) ? "square" : "rectangle";
        // 8x8 sample cells per element, counted at their centers.
        const double cell = mesh.hx() * mesh.hy() / 64.0;
        constexpr int s = 8;
        std::array<std::array<double, 9>, s * s> shapes{};
        for (int j = 0; j < s; ++j)
            for (int i = 0; i < s; ++i) {
                const double xi = -1.0 + (2.0 * i + 1.0) / s;
                const double eta = -1.0 + (2.0 * j + 1.0) / s;
                shapes[j * s + i] = ReferenceElement::shape_at(xi, eta);
            }
        for (const auto& conn : mesh.elements) {
            for (const auto& n : shapes) {
                double val = 0.0;
                for (int a = 0; a < 9; ++a) val += n[a] * u[conn[a]];
                for (size_t k = 0; k < t_grid.size(); ++k) {
                    if (val > t_grid[k])
                        curve.mu[k] += cell;
                    else
                        break;  // grid is increasing
                }
            }
        }
    } else {
        const RadialMesh& mesh = disc.radial_mesh();
        curve.domain = "ball" + std::to_string(mesh.dim);
        for (size_t k = 0; k < t_grid.size(); ++k)
            curve.mu[k] = radial_value_and_measure(mesh, u, t_grid[k]).mu;
    }
    return curve;
}

double compute_cp(const Discretization& disc, const NodalField& u, double p) {
    if (p < 1.0) throw std::invalid_argument("compute_cp: p must be >= 1");
    const double factor = disc.measure_factor();
    const double e = factor * disc.dirichlet_energy(u);
    const double pn = factor * disc.pnorm_power(u, p);
    if (!(pn > 0.0)) throw std::invalid_argument("compute_cp: degenerate input, u vanishes");
    return e / std::pow(pn, 2.0 / p);
}

double compute_lambda(const Discretization& disc, const NodalField& u, double p) {
    const double factor = disc.measure_factor();
    const double pn = factor * disc.pnorm_power(u, p);
    if (!(pn > 0.0))
        throw std::invalid_argument("compute_lambda: degenerate input, u vanishes");
    return compute_cp(disc, u, p) * std::pow(pn, (2.0 - p) / p);
}

ConstantsReport constants_report(const Discretization& disc, const NodalField& u, double p) {
    ConstantsReport report;
    report.p = p;
    report.cp = compute_cp(disc, u, p);
    report.lambda = compute_lambda(disc, u, p);
    if (p == 1.0) report.torsional_rigidity = 1.0 / report.cp;
    if (p == 2.0) report.principal_frequency = report.cp;
    return report;
}

MonotonicityReport monotonicity_report(const std::vector<DistributionCurve>& curves) {
    if (curves.size() < 2)
        throw std::invalid_argument("monotonicity_report: needs at least two curves");
    const auto& grid = curves.front().t_grid;
    for (const auto& c : curves) {
        if (c.t_grid != grid)
            throw std::invalid_argument("monotonicity_report: curves have mismatched grids");
        if (c.domain != curves.front().domain ||
            c.domain_measure != curves.front().domain_measure)
            throw std::invalid_argument("monotonicity_report: curves have mismatched domains");
    }
    std::vector<size_t> order(curves.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return curves[a].p < curves[b].p; });
    for (size_t i = 0; i + 1 < order.size(); ++i)
        if (curves[order[i]].p == curves[order[i + 1]].p)
            throw std::invalid_argument("monotonicity_report: p values must be distinct");

    MonotonicityReport report;
    report.floor = 1e-4 * curves.front().domain_measure;
    for (size_t a = 0; a < order.size(); ++a) {
        for (size_t b = a + 1; b < order.size(); ++b) {
            const auto& low = curves[order[a]];
            const auto& high = curves[order[b]];
            for (size_t k = 0; k < grid.size(); ++k) {
                MonotonicityRow row;
                row.p_low = low.p;
                row.p_high = high.p;
                row.t = grid[k];
                row.diff = low.mu[k] - high.mu[k];
                row.tested = low.mu[k] > report.floor && high.mu[k] > report.floor;
                row.ok = !row.tested || row.diff > 0.0;
                if (row.tested) ++report.tested;
                if (!row.ok) ++report.violations;
                report.rows.push_back(row);
            }
        }
    }
    report.consistent = report.violations == 0 && report.tested > 0;
    return report;
}

}  // namespace esf
