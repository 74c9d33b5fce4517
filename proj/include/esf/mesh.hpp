#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

namespace esf {

// Nodal coefficient vector d representing u^h = N * d on a mesh.
using NodalField = Eigen::VectorXd;

struct GaussRule {
    std::vector<double> points;
    std::vector<double> weights;
};

// 1D Gauss-Legendre rule on [-1,1], exact for degree 2*order-1. Orders 1..5.
GaussRule gauss_rule(int order);

// Nine-node biquadratic element on [-1,1]^2. Local node k = j*3 + i puts
// node i along xi and node j along eta, 1D coordinates {-1, 0, 1}.
struct ReferenceElement {
    int order = 3;
    std::vector<Eigen::Vector2d> quad_points;
    std::vector<double> quad_weights;                      // sum to 4
    std::vector<std::array<double, 9>> shape_values;       // [q][local]
    std::vector<std::array<Eigen::Vector2d, 9>> shape_grads;

    static std::array<double, 9> shape_at(double xi, double eta);
    static std::array<Eigen::Vector2d, 9> grad_at(double xi, double eta);
    static const std::array<Eigen::Vector2d, 9>& node_coords();
};

// Tabulate shapes and gradients at an order x order tensor Gauss rule.
ReferenceElement reference_q9(int order = 3);

struct QuadMesh {
    double width = 0.0;
    double height = 0.0;
    int nx = 0;
    int ny = 0;
    std::vector<Eigen::Vector2d> node_coords;
    std::vector<std::array<int, 9>> elements;  // gather maps L^e
    std::vector<int> boundary_nodes;           // sorted
    std::vector<char> on_boundary;             // per node

    int n_nodes() const { return static_cast<int>(node_coords.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }
    double hx() const { return width / nx; }
    double hy() const { return height / ny; }
    double area() const { return width * height; }
};

// Uniform nx x ny grid of Q9 elements on [0,width] x [0,height].
QuadMesh build_rect_mesh(double width, double height, int nx, int ny);

}  // namespace esf
