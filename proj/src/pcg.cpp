#include "infx/pcg.hpp"

#include <cmath>
#include <stdexcept>

namespace infx {

CgResult conjugate_gradient(const Eigen::SparseMatrix<double, Eigen::RowMajor>& a, const Eigen::VectorXd& b,
                            Eigen::VectorXd& x, double tol, int max_iter) {
    const Eigen::Index n = b.size();
    if (x.size() != n) x = Eigen::VectorXd::Zero(n);

    Eigen::VectorXd inv_diag(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double d = a.coeff(i, i);
        if (!(d > 0.0)) throw std::invalid_argument("conjugate_gradient: nonpositive diagonal entry");
        inv_diag[i] = 1.0 / d;
    }

    CgResult res;
    const double b_norm = std::sqrt(b.dot(inv_diag.asDiagonal() * b));
    if (b_norm == 0.0) {
        x.setZero();
        res.converged = true;
        return res;
    }

    Eigen::VectorXd r = b - a * x;
    Eigen::VectorXd z = inv_diag.asDiagonal() * r;
    Eigen::VectorXd dir = z;
    double rz = r.dot(z);
    Eigen::VectorXd q(n);
    for (int it = 0; it < max_iter; ++it) {
        res.relative_residual = std::sqrt(std::max(rz, 0.0)) / b_norm;
        if (res.relative_residual <= tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        q.noalias() = a * dir;
        const double curv = dir.dot(q);
        if (!(curv > 0.0)) break;
        const double alpha = rz / curv;
        x.noalias() += alpha * dir;
        r.noalias() -= alpha * q;
        z = inv_diag.asDiagonal() * r;
        const double rz_next = r.dot(z);
        dir = z + (rz_next / rz) * dir;
        rz = rz_next;
        res.iterations = it + 1;
    }
    res.relative_residual = std::sqrt(std::max(rz, 0.0)) / b_norm;
    res.converged = res.relative_residual <= tol;
    return res;
}

}  // namespace infx
