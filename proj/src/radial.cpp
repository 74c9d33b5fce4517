#include "esf/radial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace esf {

namespace {

inline std::array<double, 3> lagrange3(double x) {
    return {0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)};
}

inline std::array<double, 3> lagrange3_d(double x) {
    return {x - 0.5, -2.0 * x, x + 0.5};
}

inline double pow_clamped(double v, double q) {
    if (q == 0.0) return 1.0;
    if (v <= 0.0) return 0.0;
    return std::pow(v, q);
}

// The mass integrand N_i N_j r^(n-1) has degree up to 4 + (n-1); five points
// integrate degree 9 exactly, enough through n = 6.
constexpr int kRadialQuadOrder = 5;

}  // namespace

RadialMesh build_radial_mesh(int dim, int nr) {
    if (dim < 2) throw std::invalid_argument("build_radial_mesh: dim must be >= 2");
    if (nr < 1) throw std::invalid_argument("build_radial_mesh: nr must be >= 1");
    RadialMesh mesh;
    mesh.dim = dim;
    mesh.nr = nr;
    const int n_nodes = 2 * nr + 1;
    mesh.node_coords.resize(n_nodes);
    for (int i = 0; i < n_nodes; ++i) mesh.node_coords[i] = static_cast<double>(i) / (n_nodes - 1);
    mesh.node_coords.back() = 1.0;
    mesh.elements.reserve(nr);
    for (int e = 0; e < nr; ++e) mesh.elements.push_back({2 * e, 2 * e + 1, 2 * e + 2});
    return mesh;
}

std::vector<Eigen::Matrix3d> radial_element_stiffness(const RadialMesh& mesh) {
    const GaussRule rule = gauss_rule(kRadialQuadOrder);
    const double jac = mesh.h() / 2.0;
    std::vector<Eigen::Matrix3d> out;
    out.reserve(mesh.n_elements());
    for (const auto& conn : mesh.elements) {
        const double r0 = mesh.node_coords[conn[0]];
        const double r2 = mesh.node_coords[conn[2]];
        Eigen::Matrix3d ke = Eigen::Matrix3d::Zero();
        for (int q = 0; q < kRadialQuadOrder; ++q) {
            const double x = rule.points[q];
            const double r = 0.5 * (r0 + r2) + jac * x;
            const double w =
                rule.weights[q] * jac * std::pow(r, static_cast<double>(mesh.dim - 1));
            const auto d = lagrange3_d(x);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const double prod = (d[a] / jac) * (d[b] / jac);
                    ke(a, b) += w * prod;
                }
        }
        out.push_back(ke);
    }
    return out;
}

std::vector<Eigen::Matrix3d> radial_element_mass(const RadialMesh& mesh) {
    const GaussRule rule = gauss_rule(kRadialQuadOrder);
    const double jac = mesh.h() / 2.0;
    std::vector<Eigen::Matrix3d> out;
    out.reserve(mesh.n_elements());
    for (const auto& conn : mesh.elements) {
        const double r0 = mesh.node_coords[conn[0]];
        const double r2 = mesh.node_coords[conn[2]];
        Eigen::Matrix3d me = Eigen::Matrix3d::Zero();
        for (int q = 0; q < kRadialQuadOrder; ++q) {
            const double x = rule.points[q];
            const double r = 0.5 * (r0 + r2) + jac * x;
            const double w =
                rule.weights[q] * jac * std::pow(r, static_cast<double>(mesh.dim - 1));
            const auto n = lagrange3(x);
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const double prod = n[a] * n[b];
                    me(a, b) += w * prod;
                }
        }
        out.push_back(me);
    }
    return out;
}

namespace {

SparseSymMatrix scatter_radial(const RadialMesh& mesh,
                               const std::vector<Eigen::Matrix3d>& els) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(mesh.n_elements()) * 9);
    for (int e = 0; e < mesh.n_elements(); ++e) {
        const auto& conn = mesh.elements[e];
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) trips.emplace_back(conn[a], conn[b], els[e](a, b));
    }
    SparseSymMatrix m(mesh.n_nodes(), mesh.n_nodes());
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

SparseSymMatrix assemble_radial_stiffness(const RadialMesh& mesh) {
    return scatter_radial(mesh, radial_element_stiffness(mesh));
}

SparseSymMatrix assemble_radial_mass(const RadialMesh& mesh) {
    return scatter_radial(mesh, radial_element_mass(mesh));
}

NodalField assemble_radial_power_load(const RadialMesh& mesh, const NodalField& u,
                                      double q) {
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("assemble_radial_power_load: field size mismatch");
    const GaussRule rule = gauss_rule(kRadialQuadOrder);
    const double jac = mesh.h() / 2.0;
    NodalField f = NodalField::Zero(mesh.n_nodes());
    for (const auto& conn : mesh.elements) {
        const double r0 = mesh.node_coords[conn[0]];
        const double r2 = mesh.node_coords[conn[2]];
        for (int qi = 0; qi < kRadialQuadOrder; ++qi) {
            const double x = rule.points[qi];
            const double r = 0.5 * (r0 + r2) + jac * x;
            const auto n = lagrange3(x);
            double val = 0.0;
            for (int a = 0; a < 3; ++a) val += n[a] * u[conn[a]];
            const double w = rule.weights[qi] * jac *
                             std::pow(r, static_cast<double>(mesh.dim - 1)) *
                             pow_clamped(val, q);
            for (int a = 0; a < 3; ++a) f[conn[a]] += w * n[a];
        }
    }
    return f;
}

double integrate_radial(const RadialMesh& mesh, const NodalField& u, IntegralKind kind,
                        double p) {
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("integrate_radial: field size mismatch");
    if (kind == IntegralKind::pnorm_power && p < 1.0)
        throw std::invalid_argument("integrate_radial: p must be >= 1");
    const GaussRule rule = gauss_rule(kRadialQuadOrder);
    const double jac = mesh.h() / 2.0;
    long double acc = 0.0L;
    for (const auto& conn : mesh.elements) {
        const double r0 = mesh.node_coords[conn[0]];
        const double r2 = mesh.node_coords[conn[2]];
        for (int q = 0; q < kRadialQuadOrder; ++q) {
            const double x = rule.points[q];
            const double r = 0.5 * (r0 + r2) + jac * x;
            const double w =
                rule.weights[q] * jac * std::pow(r, static_cast<double>(mesh.dim - 1));
            if (kind == IntegralKind::dirichlet_energy) {
                const auto d = lagrange3_d(x);
                double g = 0.0;
                for (int a = 0; a < 3; ++a) g += d[a] / jac * u[conn[a]];
                acc += static_cast<long double>(w) * g * g;
            } else {
                const auto n = lagrange3(x);
                double val = 0.0;
                for (int a = 0; a < 3; ++a) val += n[a] * u[conn[a]];
                acc += static_cast<long double>(w) * std::pow(std::abs(val), p);
            }
        }
    }
    return static_cast<double>(acc);
}

DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const RadialMesh& mesh) {
    return apply_dirichlet(K, f, {mesh.boundary_node()}, mesh.n_nodes());
}

double unit_ball_volume(int n) {
    if (n < 1) throw std::invalid_argument("unit_ball_volume: n must be >= 1");
    // omega_n = pi^(n/2) / Gamma(n/2 + 1) via the recursion
    // omega_n = omega_{n-2} * 2*pi/n, omega_1 = 2, omega_2 = pi.
    double v = (n % 2 == 0) ? std::numbers::pi : 2.0;
    for (int k = (n % 2 == 0) ? 4 : 3; k <= n; k += 2) v *= 2.0 * std::numbers::pi / k;
    if (n == 1) return 2.0;
    return v;
}

double radial_eval(const RadialMesh& mesh, const NodalField& u, double r) {
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("radial_eval: field size mismatch");
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("radial_eval: r outside [0,1]");
    int e = std::min(static_cast<int>(r * mesh.nr), mesh.nr - 1);
    const auto& conn = mesh.elements[e];
    const double r0 = mesh.node_coords[conn[0]];
    const double r2 = mesh.node_coords[conn[2]];
    const double x = (2.0 * r - (r0 + r2)) / (r2 - r0);
    const auto n = lagrange3(x);
    return n[0] * u[conn[0]] + n[1] * u[conn[1]] + n[2] * u[conn[2]];
}

SuperlevelResult radial_value_and_measure(const RadialMesh& mesh, const NodalField& u,
                                          double t) {
    if (!(t > 0.0 && t < 1.0))
        throw std::invalid_argument("radial_value_and_measure: t must be in (0,1)");
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("radial_value_and_measure: field size mismatch");

    const double omega = unit_ball_volume(mesh.dim);
    // Scan outside in for the first element whose interpolant reaches above t.
    for (int e = mesh.nr - 1; e >= 0; --e) {
        const auto& conn = mesh.elements[e];
        const double lo = mesh.node_coords[conn[0]];
        const double hi = mesh.node_coords[conn[2]];
        bool above = false;
        for (int s = 0; s <= 8; ++s) {
            double r = lo + (hi - lo) * s / 8.0;
            if (radial_eval(mesh, u, r) > t) {
                above = true;
                break;
            }
        }
        if (!above) continue;

        // Largest sampled point above t, then bisect toward the outer edge.
        // For s = 8 the bracket degenerates to {hi} and bisection is a no-op.
        double a = lo;
        double b = hi;
        for (int s = 8; s >= 0; --s) {
            double r = lo + (hi - lo) * s / 8.0;
            if (radial_eval(mesh, u, r) > t) {
                a = r;
                b = (s == 8) ? r : lo + (hi - lo) * (s + 1) / 8.0;
                break;
            }
        }
        for (int it = 0; it < 80 && b > a; ++it) {
            double mid = 0.5 * (a + b);
            if (radial_eval(mesh, u, mid) > t)
                a = mid;
            else
                b = mid;
        }
        double r_star = 0.5 * (a + b);
        return {r_star, omega * std::pow(r_star, mesh.dim)};
    }
    return {0.0, 0.0};
}

}  // namespace esf
