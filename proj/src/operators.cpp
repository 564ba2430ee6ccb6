#include "infx/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "infx/differential.hpp"

namespace infx {

namespace {

double log_term(const Eigen::Vector2d& eta, const Eigen::Vector2d& gl, double log_floor) {
    const double n = eta.norm();
    return eta.squaredNorm() * eta.dot(gl) * std::log(std::max(n, log_floor));
}

ScalarField residual_from(const FrameDifferences& ops, const ScalarField& u, const VectorField& gl,
                          double log_floor) {
    const Grid2D& g = ops.grid();
    const VectorField eta = ops.gradient(u);
    const MatrixField h = ops.hessian(u);
    ScalarField r = ScalarField::Zero(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        if (g.is_boundary(k)) continue;
        const Eigen::Vector2d e = eta.row(k).transpose();
        const double quad = h(k, 0) * e[0] * e[0] + 2.0 * h(k, 1) * e[0] * e[1] + h(k, 2) * e[1] * e[1];
        r[k] = -(quad + log_term(e, gl.row(k).transpose(), log_floor));
    }
    return r;
}

}  // namespace

double trapezoid_weight(const Grid2D& grid, Eigen::Index k) {
    const auto n = grid.node(k);
    double w = grid.hx() * grid.hy();
    if (n.i == 0 || n.i == grid.nx() - 1) w *= 0.5;
    if (n.j == 0 || n.j == grid.ny() - 1) w *= 0.5;
    return w;
}

double interior_sup(const Grid2D& grid, const ScalarField& field) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < field.size(); ++k)
        if (!grid.is_boundary(k)) m = std::max(m, std::abs(field[k]));
    return m;
}

ScalarField infinity_x_residual_field(const ScalarField& u, const FrameField& frame, const ScalarField& p,
                                      double log_floor) {
    const FrameDifferences ops(frame);
    return residual_from(ops, u, grad_ln_p(p, frame), log_floor);
}

double energy_functional(const ScalarField& u, const FrameField& frame, const ScalarField& p, double k) {
    if (!(k >= 1.0)) throw std::invalid_argument("energy_functional needs k >= 1");
    const Grid2D& g = frame.grid;
    const VectorField eta = riemannian_gradient(u, frame);

    // log of each weighted integrand; -inf marks a vanishing gradient
    Eigen::VectorXd logs(u.size());
    double top = -std::numeric_limits<double>::infinity();
    double top_power = -std::numeric_limits<double>::infinity();
    for (Eigen::Index n = 0; n < u.size(); ++n) {
        const double q = k * p[n];
        const double s = eta.row(n).norm();
        if (s == 0.0) {
            logs[n] = -std::numeric_limits<double>::infinity();
            continue;
        }
        top_power = std::max(top_power, q * std::log(s));
        logs[n] = std::log(trapezoid_weight(g, n)) + q * std::log(s) - std::log(q);
        top = std::max(top, logs[n]);
    }
    if (top == -std::numeric_limits<double>::infinity()) return 0.0;

    if (top_power <= 600.0) {
        double sum = 0.0;
        for (Eigen::Index n = 0; n < u.size(); ++n) {
            const double q = k * p[n];
            const double s = eta.row(n).norm();
            if (s > 0.0) sum += trapezoid_weight(g, n) * std::pow(s, q) / q;
        }
        return std::pow(sum, 1.0 / k);
    }
    double scaled = 0.0;
    for (Eigen::Index n = 0; n < u.size(); ++n)
        if (std::isfinite(logs[n])) scaled += std::exp(logs[n] - top);
    return std::exp((top + std::log(scaled)) / k);
}

double sup_extremal(const ScalarField& u, const FrameField& frame, const ScalarField& p) {
    const Grid2D& g = frame.grid;
    const VectorField eta = riemannian_gradient(u, frame);
    double m = 0.0;
    for (Eigen::Index n = 0; n < u.size(); ++n)
        if (!g.is_boundary(n)) m = std::max(m, std::pow(eta.row(n).norm(), p[n]));
    return m;
}

ScalarField min_form_residual(const ScalarField& u, const FrameField& frame, const ScalarField& p, double eps,
                              double log_floor) {
    const FrameDifferences ops(frame);
    const VectorField eta = ops.gradient(u);
    ScalarField r = residual_from(ops, u, grad_ln_p(p, frame), log_floor);
    for (Eigen::Index k = 0; k < u.size(); ++k)
        r[k] = frame.grid.is_boundary(k) ? 0.0 : std::min(eta.row(k).squaredNorm() - eps, r[k]);
    return r;
}

ScalarField max_form_residual(const ScalarField& u, const FrameField& frame, const ScalarField& p, double eps,
                              double log_floor) {
    const FrameDifferences ops(frame);
    const VectorField eta = ops.gradient(u);
    ScalarField r = residual_from(ops, u, grad_ln_p(p, frame), log_floor);
    for (Eigen::Index k = 0; k < u.size(); ++k)
        r[k] = frame.grid.is_boundary(k) ? 0.0 : std::max(eps - eta.row(k).squaredNorm(), r[k]);
    return r;
}

}  // namespace infx
