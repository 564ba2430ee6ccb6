#pragma once

#include <Eigen/Dense>

#include <cmath>

#include "infx/grid.hpp"

namespace infx {

/// Evaluated jet pair: first-order element `eta` and symmetric second-order element `h`.
template <class Scalar>
struct PointJet {
    Eigen::Matrix<Scalar, 2, 1> eta = Eigen::Matrix<Scalar, 2, 1>::Zero();
    Eigen::Matrix<Scalar, 2, 2> h = Eigen::Matrix<Scalar, 2, 2>::Zero();
};

/// Exponent data at a point: p(x), the continuation factor k, D_X(kp) and D_X ln p.
template <class Scalar>
struct ExponentData {
    Scalar p{2};
    Scalar k{1};
    Eigen::Matrix<Scalar, 2, 1> grad_kp = Eigen::Matrix<Scalar, 2, 1>::Zero();
    Eigen::Matrix<Scalar, 2, 1> grad_ln_p = Eigen::Matrix<Scalar, 2, 1>::Zero();
};

using Jet = PointJet<double>;
using Exponent = ExponentData<double>;

/// <H eta, eta>.
template <class Scalar>
Scalar infinity_residual_at(const PointJet<Scalar>& j) {
    return j.eta.dot(j.h * j.eta);
}

/// -(<H eta, eta> + |eta|^2 <eta, D_X ln p> ln|eta|); the logarithmic term is
/// taken as its limit 0 at eta = 0.
template <class Scalar>
Scalar infinity_x_residual_at(const PointJet<Scalar>& j, const ExponentData<Scalar>& e) {
    using std::log;
    const Scalar n2 = j.eta.squaredNorm();
    Scalar log_term(0);
    if (n2 > Scalar(0)) log_term = n2 * j.eta.dot(e.grad_ln_p) * (log(n2) / Scalar(2));
    return -(infinity_residual_at(j) + log_term);
}

/// Residual of the kp(x)-Laplacian in non-divergence form:
/// -(|eta|^{kp-2} tr H + (kp-2)|eta|^{kp-4} <H eta, eta> + |eta|^{kp-2} <eta, D_X kp> ln|eta|).
/// All three terms are defined as 0 at eta = 0, including the middle one when kp <= 4.
template <class Scalar>
Scalar pk_residual_at(const PointJet<Scalar>& j, const ExponentData<Scalar>& e) {
    using std::log;
    using std::pow;
    using std::sqrt;
    const Scalar n2 = j.eta.squaredNorm();
    if (n2 == Scalar(0)) return Scalar(0);
    const Scalar q = e.k * e.p;
    const Scalar n = sqrt(n2);
    const Scalar lead = pow(n, q - Scalar(2));
    const Scalar middle = (q - Scalar(2)) == Scalar(0) ? Scalar(0)
                                                       : (q - Scalar(2)) * pow(n, q - Scalar(4)) * infinity_residual_at(j);
    return -(lead * j.h.trace() + middle + lead * j.eta.dot(e.grad_kp) * log(n));
}

inline constexpr double default_log_floor = 1e-12;

/// Per-node -Delta_{X,inf(x)} u using the frame gradient and symmetrized
/// Hessian; ln|eta| is evaluated as ln(max(|eta|, log_floor)). Boundary nodes hold 0.
ScalarField infinity_x_residual_field(const ScalarField& u, const FrameField& frame, const ScalarField& p,
                                      double log_floor = default_log_floor);

/// (integral of |D_X u|^{kp} / (kp))^{1/k} with lattice trapezoid weights.
double energy_functional(const ScalarField& u, const FrameField& frame, const ScalarField& p, double k);

/// max over interior nodes of |D_X u|^{p(x)}.
double sup_extremal(const ScalarField& u, const FrameField& frame, const ScalarField& p);

/// min{|D_X u|^2 - eps, -Delta_{X,inf(x)} u} per interior node (0 on the boundary).
ScalarField min_form_residual(const ScalarField& u, const FrameField& frame, const ScalarField& p, double eps,
                              double log_floor = default_log_floor);
/// max{eps - |D_X u|^2, -Delta_{X,inf(x)} u} per interior node (0 on the boundary).
ScalarField max_form_residual(const ScalarField& u, const FrameField& frame, const ScalarField& p, double eps,
                              double log_floor = default_log_floor);

/// Trapezoid weight of node k (hx*hy inside, halved on edges, quartered at corners).
double trapezoid_weight(const Grid2D& grid, Eigen::Index k);

/// max |field| over interior nodes.
double interior_sup(const Grid2D& grid, const ScalarField& field);

}  // namespace infx
