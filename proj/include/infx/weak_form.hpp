#pragma once

#include <Eigen/SparseCore>

#include <array>
#include <vector>

#include "infx/grid.hpp"

namespace infx {

/// Piecewise-linear weak form on the lattice.
///
/// Every cell is cut along both diagonals, giving four right triangles that
/// each carry a quarter of the cell area. On a triangle the frame gradient
/// A_c grad(u) is constant, with A_c and p_c the averages over the cell's
/// corners. The divergence is the negative adjoint of this gradient, so every
/// weighted operator assembled here is symmetric, and positive definite on the
/// interior unknowns whenever the weights are positive.
class WeakForm {
public:
    struct Triangle {
        std::array<Eigen::Index, 3> nodes;
        std::array<Eigen::Vector2d, 3> d;  ///< frame gradient = sum_v d[v] * u[nodes[v]]
        double area;
        double p;
    };

    WeakForm(const FrameField& frame, const ScalarField& p);

    const Grid2D& grid() const { return grid_; }
    const std::vector<Triangle>& triangles() const { return tris_; }

    /// Interior unknown ordering.
    Eigen::Index unknowns() const { return Eigen::Index(interior_.size()); }
    const std::vector<Eigen::Index>& interior_nodes() const { return interior_; }
    Eigen::Index unknown_of(Eigen::Index node) const { return slot_[std::size_t(node)]; }

    /// Lumped mass of a node.
    double mass(Eigen::Index node) const;

    /// Frame gradient on triangle t.
    Eigen::Vector2d gradient(const ScalarField& u, std::size_t t) const {
        const Triangle& tr = tris_[t];
        return tr.d[0] * u[tr.nodes[0]] + tr.d[1] * u[tr.nodes[1]] + tr.d[2] * u[tr.nodes[2]];
    }

    /// Interior-interior block of sum_t area_t * D^T K_t D for per-triangle
    /// symmetric tensors K_t.
    Eigen::SparseMatrix<double, Eigen::RowMajor> assemble(const std::vector<Eigen::Matrix2d>& tensors) const;
    /// Same with scalar weights K_t = w_t I.
    Eigen::SparseMatrix<double, Eigen::RowMajor> assemble(const Eigen::VectorXd& weights) const;

    /// Full weighted operator sum_t area_t w_t (D u)_t . (D v)_t as an
    /// N x N matrix over all nodes (used for coupling to boundary values).
    Eigen::SparseMatrix<double, Eigen::RowMajor> assemble_full(const Eigen::VectorXd& weights) const;

    Eigen::VectorXd restrict(const ScalarField& u) const;
    /// Writes interior values into a full field whose boundary entries are kept.
    void prolong(const Eigen::VectorXd& interior, ScalarField& u) const;

private:
    Grid2D grid_;
    std::vector<Triangle> tris_;
    std::vector<Eigen::Index> interior_;
    std::vector<Eigen::Index> slot_;
};

}  // namespace infx
