#include "esf/assembly.hpp"

#include <cmath>

namespace esf {

namespace {

inline double pow_clamped(double v, double q) {
    if (q == 0.0) return 1.0;
    if (v <= 0.0) return 0.0;
    return std::pow(v, q);
}

SparseSymMatrix scatter_element(const QuadMesh& mesh, const Eigen::Matrix<double, 9, 9>& el) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<size_t>(mesh.n_elements()) * 81);
    for (const auto& conn : mesh.elements)
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) trips.emplace_back(conn[a], conn[b], el(a, b));
    SparseSymMatrix m(mesh.n_nodes(), mesh.n_nodes());
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

Eigen::Matrix<double, 9, 9> element_stiffness(const QuadMesh& mesh) {
    const ReferenceElement ref = reference_q9();
    const double jx = mesh.hx() / 2.0;
    const double jy = mesh.hy() / 2.0;
    const double det = jx * jy;
    Eigen::Matrix<double, 9, 9> ke = Eigen::Matrix<double, 9, 9>::Zero();
    for (size_t q = 0; q < ref.quad_points.size(); ++q) {
        const double w = ref.quad_weights[q] * det;
        for (int a = 0; a < 9; ++a) {
            const Eigen::Vector2d ga(ref.shape_grads[q][a](0) / jx,
                                     ref.shape_grads[q][a](1) / jy);
            for (int b = 0; b < 9; ++b) {
                const Eigen::Vector2d gb(ref.shape_grads[q][b](0) / jx,
                                         ref.shape_grads[q][b](1) / jy);
                ke(a, b) += w * ga.dot(gb);
            }
        }
    }
    return ke;
}

Eigen::Matrix<double, 9, 9> element_mass(const QuadMesh& mesh) {
    const ReferenceElement ref = reference_q9();
    const double det = mesh.hx() * mesh.hy() / 4.0;
    Eigen::Matrix<double, 9, 9> me = Eigen::Matrix<double, 9, 9>::Zero();
    for (size_t q = 0; q < ref.quad_points.size(); ++q) {
        const double w = ref.quad_weights[q] * det;
        for (int a = 0; a < 9; ++a)
            for (int b = 0; b < 9; ++b) {
                // product first so (a,b) and (b,a) round identically
                const double prod = ref.shape_values[q][a] * ref.shape_values[q][b];
                me(a, b) += w * prod;
            }
    }
    return me;
}

SparseSymMatrix assemble_stiffness(const QuadMesh& mesh) {
    return scatter_element(mesh, element_stiffness(mesh));
}

SparseSymMatrix assemble_mass(const QuadMesh& mesh) {
    return scatter_element(mesh, element_mass(mesh));
}

NodalField assemble_power_load(const QuadMesh& mesh, const NodalField& u, double q) {
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("assemble_power_load: field size mismatch");
    const ReferenceElement ref = reference_q9();
    const double det = mesh.hx() * mesh.hy() / 4.0;
    NodalField f = NodalField::Zero(mesh.n_nodes());
    for (const auto& conn : mesh.elements) {
        for (size_t qi = 0; qi < ref.quad_points.size(); ++qi) {
            double val = 0.0;
            for (int a = 0; a < 9; ++a) val += ref.shape_values[qi][a] * u[conn[a]];
            const double w = ref.quad_weights[qi] * det * pow_clamped(val, q);
            for (int a = 0; a < 9; ++a) f[conn[a]] += w * ref.shape_values[qi][a];
        }
    }
    return f;
}

Eigen::VectorXd DirichletSystem::restrict_field(const NodalField& full) const {
    Eigen::VectorXd out(free_nodes.size());
    for (size_t i = 0; i < free_nodes.size(); ++i) out[i] = full[free_nodes[i]];
    return out;
}

NodalField DirichletSystem::extend(const Eigen::VectorXd& reduced) const {
    NodalField out = NodalField::Zero(full_size);
    for (size_t i = 0; i < free_nodes.size(); ++i) out[free_nodes[i]] = reduced[i];
    return out;
}

DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const std::vector<int>& boundary, int n_nodes) {
    if (K.rows() != n_nodes || K.cols() != n_nodes)
        throw std::invalid_argument("apply_dirichlet: matrix size mismatch");
    DirichletSystem sys;
    sys.full_size = n_nodes;
    sys.reduced_of.assign(n_nodes, -1);
    std::vector<char> fixed(n_nodes, 0);
    for (int b : boundary) fixed[b] = 1;
    for (int i = 0; i < n_nodes; ++i) {
        if (!fixed[i]) {
            sys.reduced_of[i] = static_cast<int>(sys.free_nodes.size());
            sys.free_nodes.push_back(i);
        }
    }

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(K.nonZeros());
    for (int col = 0; col < K.outerSize(); ++col) {
        int rc = sys.reduced_of[col];
        if (rc < 0) continue;
        for (SparseSymMatrix::InnerIterator it(K, col); it; ++it) {
            int rr = sys.reduced_of[it.row()];
            if (rr >= 0) trips.emplace_back(rr, rc, it.value());
        }
    }
    sys.K.resize(static_cast<int>(sys.free_nodes.size()),
                 static_cast<int>(sys.free_nodes.size()));
    sys.K.setFromTriplets(trips.begin(), trips.end());
    sys.K.makeCompressed();

    if (f.size() == n_nodes) sys.f = sys.restrict_field(f);
    return sys;
}

DirichletSystem apply_dirichlet(const SparseSymMatrix& K, const NodalField& f,
                                const QuadMesh& mesh) {
    return apply_dirichlet(K, f, mesh.boundary_nodes, mesh.n_nodes());
}

Eigen::VectorXd solve_spd(const SparseSymMatrix& A, const Eigen::VectorXd& b, double tol,
                          int max_iters) {
    if (A.rows() != b.size())
        throw std::invalid_argument("solve_spd: dimension mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("solve_spd: tol must be positive");
    if (b.size() == 0) return b;
    if (max_iters <= 0) max_iters = 10 * static_cast<int>(b.size());

    Eigen::ConjugateGradient<SparseSymMatrix, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setTolerance(tol);
    cg.setMaxIterations(max_iters);
    cg.compute(A);
    Eigen::VectorXd x = cg.solve(b);
    if (cg.info() != Eigen::Success)
        throw NoConvergenceError("solve_spd: CG exhausted its iteration cap", cg.error(),
                                 static_cast<int>(cg.iterations()));
    return x;
}

double integrate_field(const QuadMesh& mesh, const NodalField& u, IntegralKind kind,
                       double p) {
    if (u.size() != mesh.n_nodes())
        throw std::invalid_argument("integrate_field: field size mismatch");
    if (kind == IntegralKind::pnorm_power && p < 1.0)
        throw std::invalid_argument("integrate_field: p must be >= 1");
    const ReferenceElement ref = reference_q9();
    const double jx = mesh.hx() / 2.0;
    const double jy = mesh.hy() / 2.0;
    const double det = jx * jy;
    long double acc = 0.0L;
    for (const auto& conn : mesh.elements) {
        for (size_t q = 0; q < ref.quad_points.size(); ++q) {
            const double w = ref.quad_weights[q] * det;
            if (kind == IntegralKind::dirichlet_energy) {
                double gx = 0.0, gy = 0.0;
                for (int a = 0; a < 9; ++a) {
                    gx += ref.shape_grads[q][a](0) / jx * u[conn[a]];
                    gy += ref.shape_grads[q][a](1) / jy * u[conn[a]];
                }
                acc += static_cast<long double>(w) * (gx * gx + gy * gy);
            } else {
                double val = 0.0;
                for (int a = 0; a < 9; ++a) val += ref.shape_values[q][a] * u[conn[a]];
                acc += static_cast<long double>(w) * std::pow(std::abs(val), p);
            }
        }
    }
    return static_cast<double>(acc);
}

}  // namespace esf
