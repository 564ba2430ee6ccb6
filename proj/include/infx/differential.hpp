#pragma once

#include <Eigen/SparseCore>

#include <array>

#include "infx/grid.hpp"

namespace infx {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Second-order Euclidean first-derivative stencils on every node: central
/// differences inside, three-point one-sided differences on the edges.
struct EuclideanStencils {
    SparseMatrix dx;
    SparseMatrix dy;
};

EuclideanStencils euclidean_stencils(const Grid2D& grid);

/// Frame derivatives X_1, X_2 as sparse node operators: G_i = a_i1 Dx + a_i2 Dy.
///
/// The second derivative X_i(X_j u) is the composition G_i G_j, which keeps the
/// ordering of the non-commuting fields visible; `hessian` returns its
/// symmetric part.
class FrameDifferences {
public:
    explicit FrameDifferences(const FrameField& frame);

    const Grid2D& grid() const { return grid_; }
    const SparseMatrix& operator[](int i) const { return g_[std::size_t(i)]; }

    VectorField gradient(const ScalarField& u) const;
    /// Symmetrized second derivative (D^2_X u)* at every node. Rows belonging to
    /// boundary nodes use one-sided data throughout and are not meaningful.
    MatrixField hessian(const ScalarField& u) const;
    /// The unsymmetrized X_i(X_j u) entries, columns (11, 12, 21, 22).
    Eigen::Matrix<double, Eigen::Dynamic, 4> raw_hessian(const ScalarField& u) const;

private:
    Grid2D grid_;
    std::array<SparseMatrix, 2> g_;
};

VectorField riemannian_gradient(const ScalarField& u, const FrameField& frame);
MatrixField symmetrized_hessian(const ScalarField& u, const FrameField& frame);

/// D_X ln p. Throws std::domain_error if p <= 1 at any node.
VectorField grad_ln_p(const ScalarField& p, const FrameField& frame);

}  // namespace infx
