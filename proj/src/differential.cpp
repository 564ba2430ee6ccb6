#include "infx/differential.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace infx {

namespace {

using Triplet = Eigen::Triplet<double>;

// Appends the 1-D first-derivative stencil at position `pos` of a line of `n`
// nodes; `at(m)` maps a line position to a global node index. Interior rows are
// central differences, whose leading error is (h^2/6) u'''. On lines of four or
// more nodes the end rows are the four-point formula with that same leading
// error, so a central difference of the derivative taken next to an end is
// still second order.
template <class At>
void line_stencil(std::vector<Triplet>& out, Eigen::Index row, int pos, int n, double h, At at) {
    const double s = 1.0 / (2.0 * h);
    if (n >= 4 && pos == 0) {
        out.emplace_back(row, at(0), -4.0 * s);
        out.emplace_back(row, at(1), 7.0 * s);
        out.emplace_back(row, at(2), -4.0 * s);
        out.emplace_back(row, at(3), 1.0 * s);
    } else if (n >= 4 && pos == n - 1) {
        out.emplace_back(row, at(n - 1), 4.0 * s);
        out.emplace_back(row, at(n - 2), -7.0 * s);
        out.emplace_back(row, at(n - 3), 4.0 * s);
        out.emplace_back(row, at(n - 4), -1.0 * s);
    } else if (pos == 0) {
        out.emplace_back(row, at(0), -3.0 * s);
        out.emplace_back(row, at(1), 4.0 * s);
        out.emplace_back(row, at(2), -1.0 * s);
    } else if (pos == n - 1) {
        out.emplace_back(row, at(n - 1), 3.0 * s);
        out.emplace_back(row, at(n - 2), -4.0 * s);
        out.emplace_back(row, at(n - 3), 1.0 * s);
    } else {
        out.emplace_back(row, at(pos + 1), s);
        out.emplace_back(row, at(pos - 1), -s);
    }
}

Eigen::VectorXd apply_difference(const SparseMatrix& d, const Eigen::VectorXd& u) {
    Eigen::VectorXd out(d.rows());
    for (Eigen::Index k = 0; k < d.outerSize(); ++k) {
        double acc = 0.0;
        for (SparseMatrix::InnerIterator it(d, k); it; ++it) acc += it.value() * (u[it.col()] - u[k]);
        out[k] = acc;
    }
    return out;
}

}  // namespace

EuclideanStencils euclidean_stencils(const Grid2D& grid) {
    const Eigen::Index n = grid.size();
    std::vector<Triplet> tx, ty;
    tx.reserve(std::size_t(4 * n));
    ty.reserve(std::size_t(4 * n));
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const Eigen::Index row = grid.index(i, j);
            line_stencil(tx, row, i, grid.nx(), grid.hx(), [&](int m) { return grid.index(m, j); });
            line_stencil(ty, row, j, grid.ny(), grid.hy(), [&](int m) { return grid.index(i, m); });
        }
    }
    EuclideanStencils s{SparseMatrix(n, n), SparseMatrix(n, n)};
    s.dx.setFromTriplets(tx.begin(), tx.end());
    s.dy.setFromTriplets(ty.begin(), ty.end());
    return s;
}

FrameDifferences::FrameDifferences(const FrameField& frame) : grid_(frame.grid) {
    const auto st = euclidean_stencils(grid_);
    const Eigen::Index n = grid_.size();
    for (int r = 0; r < 2; ++r) {
        Eigen::VectorXd c0(n), c1(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            c0[k] = frame[k](r, 0);
            c1[k] = frame[k](r, 1);
        }
        g_[std::size_t(r)] = c0.asDiagonal() * st.dx + c1.asDiagonal() * st.dy;
        g_[std::size_t(r)].prune(0.0);
    }
}

VectorField FrameDifferences::gradient(const ScalarField& u) const {
    VectorField out(u.size(), 2);
    out.col(0) = apply_difference(g_[0], u);
    out.col(1) = apply_difference(g_[1], u);
    return out;
}

Eigen::Matrix<double, Eigen::Dynamic, 4> FrameDifferences::raw_hessian(const ScalarField& u) const {
    const Eigen::VectorXd v0 = apply_difference(g_[0], u);
    const Eigen::VectorXd v1 = apply_difference(g_[1], u);
    Eigen::Matrix<double, Eigen::Dynamic, 4> m(u.size(), 4);
    m.col(0) = apply_difference(g_[0], v0);  // X_1 X_1 u
    m.col(1) = apply_difference(g_[0], v1);  // X_1 X_2 u
    m.col(2) = apply_difference(g_[1], v0);  // X_2 X_1 u
    m.col(3) = apply_difference(g_[1], v1);  // X_2 X_2 u
    return m;
}

MatrixField FrameDifferences::hessian(const ScalarField& u) const {
    const auto raw = raw_hessian(u);
    MatrixField out(u.size(), 3);
    out.col(0) = raw.col(0);
    out.col(1) = 0.5 * (raw.col(1) + raw.col(2));
    out.col(2) = raw.col(3);
    return out;
}

VectorField riemannian_gradient(const ScalarField& u, const FrameField& frame) {
    return FrameDifferences(frame).gradient(u);
}

MatrixField symmetrized_hessian(const ScalarField& u, const FrameField& frame) {
    return FrameDifferences(frame).hessian(u);
}

VectorField grad_ln_p(const ScalarField& p, const FrameField& frame) {
    for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (!(p[k] > 1.0)) {
            const auto n = frame.grid.node(k);
            std::ostringstream os;
            os << "exponent p = " << p[k] << " <= 1 at node (" << n.i << "," << n.j << ")";
            throw std::domain_error(os.str());
        }
    }
    return riemannian_gradient(p.array().log().matrix(), frame);
}

}  // namespace infx
