#include "esf/problem.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace esf {

double domain_measure(const Domain& domain) {
    if (const auto* rect = std::get_if<RectangleDomain>(&domain))
        return rect->width * rect->height;
    return unit_ball_volume(std::get<BallDomain>(domain).dim);
}

std::string domain_label(const Domain& domain) {
    if (const auto* rect = std::get_if<RectangleDomain>(&domain)) {
        if (rect->width == rect->height) return "square";
        return "rectangle";
    }
    return "ball" + std::to_string(std::get<BallDomain>(domain).dim);
}

void ProblemSpec::validate() const {
    if (const auto* rect = std::get_if<RectangleDomain>(&domain)) {
        if (!(rect->width > 0.0) || !(rect->height > 0.0))
            throw std::invalid_argument("rectangle sides must be positive");
    } else {
        int n = std::get<BallDomain>(domain).dim;
        if (n < 2) throw std::invalid_argument("ball dimension must be >= 2");
        if (n >= 3 && p >= 2.0 * n / (n - 2.0))
            throw std::invalid_argument(
                "p must stay below the critical exponent 2n/(n-2) for n >= 3");
    }
    if (!(p >= 1.0)) throw std::invalid_argument("p must be >= 1");
    if (p > 1.0 && p < 2.0)
        throw std::invalid_argument(
            "the sublinear range 1 < p < 2 is unsupported (the descent iteration fails "
            "there); use p = 1 or p >= 2");
    if (p > 2.0 && p <= 2.0 + 1e-6)
        throw std::invalid_argument(
            "p in (2, 2+1e-6] is ill-conditioned (projection exponent 1/(p-2) blows up)");
    if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
    if (!(descent_tol > 0.0) || !(solver_tol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
    if (max_iters < 1 || max_halvings < 1)
        throw std::invalid_argument("iteration limits must be >= 1");
    if (n_test_functions < 1)
        throw std::invalid_argument("test function count must be >= 1");
}

Discretization::Discretization(QuadMesh mesh) : quad_(std::move(mesh)) {
    ke_ = element_stiffness(*quad_);
    me_ = element_mass(*quad_);
    K_ = assemble_stiffness(*quad_);
    M_ = assemble_mass(*quad_);
    sys_ = apply_dirichlet(K_, NodalField(), quad_->boundary_nodes, quad_->n_nodes());
}

Discretization::Discretization(RadialMesh mesh) : radial_(std::move(mesh)) {
    kel_ = radial_element_stiffness(*radial_);
    mel_ = radial_element_mass(*radial_);
    K_ = assemble_radial_stiffness(*radial_);
    M_ = assemble_radial_mass(*radial_);
    radial_boundary_ = {radial_->boundary_node()};
    sys_ = apply_dirichlet(K_, NodalField(), radial_boundary_, radial_->n_nodes());
}

Discretization Discretization::make(const ProblemSpec& spec) {
    spec.validate();
    if (const auto* rect = std::get_if<RectangleDomain>(&spec.domain)) {
        int nx = spec.resolution;
        int ny = std::max(1, static_cast<int>(std::lround(
                                 spec.resolution * rect->height / rect->width)));
        return Discretization(build_rect_mesh(rect->width, rect->height, nx, ny));
    }
    return Discretization(
        build_radial_mesh(std::get<BallDomain>(spec.domain).dim, spec.resolution));
}

const QuadMesh& Discretization::quad_mesh() const {
    if (!quad_) throw std::logic_error("not a planar discretization");
    return *quad_;
}

const RadialMesh& Discretization::radial_mesh() const {
    if (!radial_) throw std::logic_error("not a radial discretization");
    return *radial_;
}

int Discretization::n_nodes() const {
    return quad_ ? quad_->n_nodes() : radial_->n_nodes();
}

const std::vector<int>& Discretization::boundary() const {
    return quad_ ? quad_->boundary_nodes : radial_boundary_;
}

double Discretization::dirichlet_energy(const NodalField& u) const {
    return k_form(u, u);
}

double Discretization::pnorm_power(const NodalField& u, double p) const {
    return quad_ ? integrate_field(*quad_, u, IntegralKind::pnorm_power, p)
                 : integrate_radial(*radial_, u, IntegralKind::pnorm_power, p);
}

NodalField Discretization::power_load(const NodalField& u, double q) const {
    return quad_ ? assemble_power_load(*quad_, u, q)
                 : assemble_radial_power_load(*radial_, u, q);
}

namespace {

// Element-accumulated bilinear form in long double, fixed traversal order.
template <typename Conn, typename El>
long double accumulate_form(const std::vector<Conn>& elements,
                            const El& element_matrix_of, int nloc, const NodalField& a,
                            const NodalField& b) {
    long double acc = 0.0L;
    for (size_t e = 0; e < elements.size(); ++e) {
        const auto& conn = elements[e];
        const auto& el = element_matrix_of(e);
        for (int i = 0; i < nloc; ++i) {
            long double row = 0.0L;
            for (int j = 0; j < nloc; ++j)
                row += static_cast<long double>(el(i, j)) * b[conn[j]];
            acc += static_cast<long double>(a[conn[i]]) * row;
        }
    }
    return acc;
}

}  // namespace

double Discretization::k_form(const NodalField& a, const NodalField& b) const {
    if (a.size() != n_nodes() || b.size() != n_nodes())
        throw std::invalid_argument("k_form: field size mismatch");
    if (quad_)
        return static_cast<double>(accumulate_form(
            quad_->elements, [this](size_t) -> const auto& { return ke_; }, 9, a, b));
    return static_cast<double>(accumulate_form(
        radial_->elements, [this](size_t e) -> const auto& { return kel_[e]; }, 3, a, b));
}

double Discretization::m_form(const NodalField& a, const NodalField& b) const {
    if (a.size() != n_nodes() || b.size() != n_nodes())
        throw std::invalid_argument("m_form: field size mismatch");
    if (quad_)
        return static_cast<double>(accumulate_form(
            quad_->elements, [this](size_t) -> const auto& { return me_; }, 9, a, b));
    return static_cast<double>(accumulate_form(
        radial_->elements, [this](size_t e) -> const auto& { return mel_[e]; }, 3, a, b));
}

NodalField Discretization::poisson_solve(const NodalField& load, double tol) const {
    Eigen::VectorXd reduced = sys_.restrict_field(load);
    return sys_.extend(solve_spd(sys_.K, reduced, tol));
}

double Discretization::measure_factor() const {
    if (!radial_) return 1.0;
    return radial_->dim * unit_ball_volume(radial_->dim);
}

double Discretization::measure() const {
    return quad_ ? quad_->area() : unit_ball_volume(radial_->dim);
}

double Discretization::sup_norm(const NodalField& u) const {
    if (u.size() != n_nodes()) throw std::invalid_argument("sup_norm: field size mismatch");
    double best = -std::numeric_limits<double>::infinity();
    if (quad_) {
        // 5x5 sample grid per element covers the nodes at its corners,
        // edge midpoints and center.
        static const double pts[5] = {-1.0, -0.5, 0.0, 0.5, 1.0};
        for (const auto& conn : quad_->elements) {
            for (double eta : pts) {
                for (double xi : pts) {
                    auto n = ReferenceElement::shape_at(xi, eta);
                    double val = 0.0;
                    for (int a = 0; a < 9; ++a) val += n[a] * u[conn[a]];
                    best = std::max(best, val);
                }
            }
        }
    } else {
        for (int e = 0; e < radial_->n_elements(); ++e) {
            const auto& conn = radial_->elements[e];
            const double lo = radial_->node_coords[conn[0]];
            const double hi = radial_->node_coords[conn[2]];
            for (int s = 0; s <= 4; ++s)
                best = std::max(best, radial_eval(*radial_, u, lo + (hi - lo) * s / 4.0));
        }
    }
    return best;
}

NodalField Discretization::initial_guess() const {
    NodalField u(n_nodes());
    if (quad_) {
        constexpr double pi = 3.14159265358979323846;
        for (int i = 0; i < quad_->n_nodes(); ++i) {
            const auto& c = quad_->node_coords[i];
            u[i] = std::sin(pi * c.x() / quad_->width) * std::sin(pi * c.y() / quad_->height);
        }
        for (int b : quad_->boundary_nodes) u[b] = 0.0;
    } else {
        for (int i = 0; i < radial_->n_nodes(); ++i) {
            double r = radial_->node_coords[i];
            u[i] = 1.0 - r * r;
        }
        u[radial_->boundary_node()] = 0.0;
    }
    return u;
}

}  // namespace esf
