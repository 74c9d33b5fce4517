#include "esf/mesh.hpp"

#include <algorithm>
#include <stdexcept>

namespace esf {

GaussRule gauss_rule(int order) {
    switch (order) {
        case 1:
            return {{0.0}, {2.0}};
        case 2:
            return {{-0.5773502691896257, 0.5773502691896257}, {1.0, 1.0}};
        case 3:
            return {{-0.7745966692414834, 0.0, 0.7745966692414834},
                    {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0}};
        case 4:
            return {{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                     0.8611363115940526},
                    {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                     0.3478548451374538}};
        case 5:
            return {{-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                     0.9061798459386640},
                    {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                     0.4786286704993665, 0.2369268850561891}};
        default:
            throw std::invalid_argument("gauss_rule: order must be in 1..5");
    }
}

namespace {

// 1D quadratic Lagrange basis on {-1, 0, 1} and its derivative.
inline std::array<double, 3> lagrange3(double x) {
    return {0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)};
}

inline std::array<double, 3> lagrange3_d(double x) {
    return {x - 0.5, -2.0 * x, x + 0.5};
}

}  // namespace

std::array<double, 9> ReferenceElement::shape_at(double xi, double eta) {
    auto lx = lagrange3(xi);
    auto ly = lagrange3(eta);
    std::array<double, 9> n{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) n[j * 3 + i] = lx[i] * ly[j];
    return n;
}

std::array<Eigen::Vector2d, 9> ReferenceElement::grad_at(double xi, double eta) {
    auto lx = lagrange3(xi);
    auto ly = lagrange3(eta);
    auto dx = lagrange3_d(xi);
    auto dy = lagrange3_d(eta);
    std::array<Eigen::Vector2d, 9> g{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) g[j * 3 + i] = {dx[i] * ly[j], lx[i] * dy[j]};
    return g;
}

const std::array<Eigen::Vector2d, 9>& ReferenceElement::node_coords() {
    static const std::array<Eigen::Vector2d, 9> coords = [] {
        std::array<Eigen::Vector2d, 9> c{};
        const double pts[3] = {-1.0, 0.0, 1.0};
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) c[j * 3 + i] = {pts[i], pts[j]};
        return c;
    }();
    return coords;
}

ReferenceElement reference_q9(int order) {
    if (order < 1) throw std::invalid_argument("reference_q9: order must be >= 1");
    GaussRule rule = gauss_rule(order);
    ReferenceElement ref;
    ref.order = order;
    for (int qj = 0; qj < order; ++qj) {
        for (int qi = 0; qi < order; ++qi) {
            double xi = rule.points[qi];
            double eta = rule.points[qj];
            ref.quad_points.emplace_back(xi, eta);
            ref.quad_weights.push_back(rule.weights[qi] * rule.weights[qj]);
            ref.shape_values.push_back(ReferenceElement::shape_at(xi, eta));
            ref.shape_grads.push_back(ReferenceElement::grad_at(xi, eta));
        }
    }
    return ref;
}

QuadMesh build_rect_mesh(double width, double height, int nx, int ny) {
    if (!(width > 0.0) || !(height > 0.0))
        throw std::invalid_argument("build_rect_mesh: sizes must be positive");
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rect_mesh: element counts must be >= 1");

    QuadMesh mesh;
    mesh.width = width;
    mesh.height = height;
    mesh.nx = nx;
    mesh.ny = ny;

    const int mx = 2 * nx + 1;
    const int my = 2 * ny + 1;
    mesh.node_coords.reserve(static_cast<size_t>(mx) * my);
    mesh.on_boundary.assign(static_cast<size_t>(mx) * my, 0);

    // Node id = ix * my + iy, columns of constant x.
    for (int ix = 0; ix < mx; ++ix) {
        double x = width * ix / (mx - 1);
        for (int iy = 0; iy < my; ++iy) {
            double y = height * iy / (my - 1);
            mesh.node_coords.emplace_back(x, y);
            if (ix == 0 || ix == mx - 1 || iy == 0 || iy == my - 1) {
                int id = ix * my + iy;
                mesh.on_boundary[id] = 1;
                mesh.boundary_nodes.push_back(id);
            }
        }
    }
    std::sort(mesh.boundary_nodes.begin(), mesh.boundary_nodes.end());

    mesh.elements.reserve(static_cast<size_t>(nx) * ny);
    for (int ex = 0; ex < nx; ++ex) {
        for (int ey = 0; ey < ny; ++ey) {
            std::array<int, 9> conn{};
            for (int j = 0; j < 3; ++j)
                for (int i = 0; i < 3; ++i)
                    conn[j * 3 + i] = (2 * ex + i) * my + (2 * ey + j);
            mesh.elements.push_back(conn);
        }
    }
    return mesh;
}

}  // namespace esf
