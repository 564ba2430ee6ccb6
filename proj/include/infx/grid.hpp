#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

#include "infx/expr.hpp"

namespace infx {

/// Node-indexed scalar values, row-major: index = j * nx + i.
using ScalarField = Eigen::VectorXd;
/// One 2-vector per node (columns: first and second frame component).
using VectorField = Eigen::Matrix<double, Eigen::Dynamic, 2>;
/// One symmetric 2x2 matrix per node, stored as (m11, m12, m22).
using MatrixField = Eigen::Matrix<double, Eigen::Dynamic, 3>;

struct NodeIndex {
    int i{0};
    int j{0};
    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

struct GridSpec {
    double xmin{0.0}, xmax{1.0}, ymin{0.0}, ymax{1.0};
    int nx{65}, ny{65};
};

/// Rectangular node lattice. Boundary nodes are the ones on the rectangle edge.
class Grid2D {
public:
    Grid2D() = default;
    explicit Grid2D(const GridSpec& spec);

    double xmin() const { return xmin_; }
    double xmax() const { return xmax_; }
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double hx() const { return hx_; }
    double hy() const { return hy_; }

    Eigen::Index size() const { return Eigen::Index(nx_) * ny_; }
    Eigen::Index interior_count() const { return Eigen::Index(nx_ - 2) * (ny_ - 2); }

    Eigen::Index index(int i, int j) const { return Eigen::Index(j) * nx_ + i; }
    Eigen::Index index(NodeIndex n) const { return index(n.i, n.j); }
    NodeIndex node(Eigen::Index k) const { return {int(k % nx_), int(k / nx_)}; }

    double x(int i) const { return xmin_ + i * hx_; }
    double y(int j) const { return ymin_ + j * hy_; }
    Eigen::Vector2d point(int i, int j) const { return {x(i), y(j)}; }
    Eigen::Vector2d point(Eigen::Index k) const {
        const auto n = node(k);
        return point(n.i, n.j);
    }

    bool is_boundary(int i, int j) const { return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1; }
    bool is_boundary(Eigen::Index k) const {
        const auto n = node(k);
        return is_boundary(n.i, n.j);
    }

    /// Evaluate an expression at every node.
    ScalarField sample(const Expr& e) const;

    GridSpec spec() const { return {xmin_, xmax_, ymin_, ymax_, nx_, ny_}; }

private:
    double xmin_{0.0}, xmax_{1.0}, ymin_{0.0}, ymax_{1.0};
    int nx_{3}, ny_{3};
    double hx_{0.5}, hy_{0.5};
};

Grid2D build_grid(const GridSpec& spec);

class FrameSingular : public std::runtime_error {
public:
    FrameSingular(const std::string& what, NodeIndex node) : std::runtime_error(what), node_(node) {}
    NodeIndex node() const { return node_; }

private:
    NodeIndex node_;
};

/// Coefficient matrix A(x) of the frame X_i = sum_j a_ij d/dx_j at every node.
struct FrameField {
    Grid2D grid;
    std::vector<Eigen::Matrix2d> a;
    std::vector<Eigen::Matrix2d> inv_t;  // (A^T)^{-1}

    const Eigen::Matrix2d& operator[](Eigen::Index k) const { return a[std::size_t(k)]; }
};

struct FrameExprs {
    Expr a11, a12, a21, a22;
    static FrameExprs identity();
};

FrameField sample_frame(const FrameExprs& entries, const Grid2D& grid, double det_floor = 1e-10);
/// Frame from explicit per-node matrices; same determinant check as sample_frame.
FrameField make_frame(const Grid2D& grid, std::vector<Eigen::Matrix2d> a, double det_floor = 1e-10);
FrameField constant_frame(const Grid2D& grid, const Eigen::Matrix2d& a);

}  // namespace infx
