#pragma once

#include <Eigen/SparseCore>

namespace infx {

struct CgResult {
    int iterations{0};
    double relative_residual{0.0};
    bool converged{false};
};

/// Jacobi-preconditioned conjugate gradients for a symmetric positive definite
/// matrix. Convergence is measured on the diagonally scaled residual
/// |D^{-1/2} r| / |D^{-1/2} b|, which keeps rows with tiny coefficients from
/// being ignored when the weights span many orders of magnitude.
/// `x` holds the initial guess on entry.
CgResult conjugate_gradient(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, const Eigen::VectorXd& b,
                            Eigen::VectorXd& x, double tol, int max_iter);

}  // namespace infx
