#include "infx/solvers.hpp"

#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "infx/differential.hpp"
#include "infx/operators.hpp"
#include "infx/pcg.hpp"
#include "infx/weak_form.hpp"

namespace infx {

namespace {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Smallest normalized weight kept in assembled operators. It only touches the
// linearization, never the residual, so converged solutions are unaffected.
constexpr double weight_floor = 1e-280;

int cg_limit(const Grid2D& g, int configured) { return configured > 0 ? configured : 10 * g.nx() * g.ny(); }

double sup_diff(const ScalarField& a, const ScalarField& b) { return (a - b).cwiseAbs().maxCoeff(); }

void impose_boundary(const Grid2D& g, const ScalarField& f, ScalarField& u) {
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) u[k] = f[k];
}

/// Normalized discrete energy of the kp(x) problem,
///   sum_t area (d^2 + |v_t|^2)^{q_t/2} / q_t - sum_n mass_n b_n u_n,
/// with every term divided by exp(log_scale).
class PkEnergy {
public:
    PkEnergy(const WeakForm& wf, const Problem& pr, double k)
        : wf_(wf), delta2_(pr.solver.delta_reg * pr.solver.delta_reg), eps_(pr.epsilon) {
        const auto& tris = wf.triangles();
        q_.resize(Eigen::Index(tris.size()));
        for (std::size_t t = 0; t < tris.size(); ++t) q_[Eigen::Index(t)] = k * tris[t].p;
        const Eigen::Index ni = wf.unknowns();
        rhs_log_.setConstant(ni, -std::numeric_limits<double>::infinity());
        if (eps_ != 0.0) {
            for (Eigen::Index s = 0; s < ni; ++s) {
                const double qn = k * pr.p[wf.interior_nodes()[std::size_t(s)]];
                rhs_log_[s] = (qn - 1.0) * std::log(std::abs(eps_));
            }
        }
    }

    /// Picks the normalization for the current iterate: the largest of the
    /// weights (d^2+|v|^2)^{(q-2)/2} and the right-hand side magnitudes.
    void rescale(const ScalarField& u) {
        double top = rhs_log_.size() ? rhs_log_.maxCoeff() : -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < wf_.triangles().size(); ++t)
            top = std::max(top, log_weight(t, wf_.gradient(u, t)));
        log_scale_ = std::isfinite(top) ? top : 0.0;
    }

    double log_weight(std::size_t t, const Eigen::Vector2d& v) const {
        return 0.5 * (q_[Eigen::Index(t)] - 2.0) * std::log(delta2_ + v.squaredNorm());
    }

    double weight(std::size_t t, const Eigen::Vector2d& v) const {
        return std::exp(log_weight(t, v) - log_scale_);
    }

    double rhs(Eigen::Index s) const {
        if (eps_ == 0.0) return 0.0;
        return std::copysign(std::exp(rhs_log_[s] - log_scale_), eps_);
    }

    /// Gradient with respect to the interior unknowns.
    Eigen::VectorXd gradient(const ScalarField& u) const {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(wf_.unknowns());
        const auto& tris = wf_.triangles();
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const Eigen::Vector2d v = wf_.gradient(u, t);
            const double w = tris[t].area * weight(t, v);
            for (int a = 0; a < 3; ++a) {
                const Eigen::Index s = wf_.unknown_of(tris[t].nodes[std::size_t(a)]);
                if (s >= 0) g[s] += w * tris[t].d[std::size_t(a)].dot(v);
            }
        }
        for (Eigen::Index s = 0; s < g.size(); ++s) g[s] -= wf_.mass(wf_.interior_nodes()[std::size_t(s)]) * rhs(s);
        return g;
    }

    /// d/d(alpha) of the energy at u + alpha * dir.
    double slope(const ScalarField& u, const ScalarField& dir, double alpha) const {
        double acc = 0.0;
        const auto& tris = wf_.triangles();
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const Eigen::Vector2d dv = wf_.gradient(dir, t);
            const Eigen::Vector2d v = wf_.gradient(u, t) + alpha * dv;
            acc += tris[t].area * weight(t, v) * v.dot(dv);
        }
        for (Eigen::Index s = 0; s < wf_.unknowns(); ++s) {
            const Eigen::Index n = wf_.interior_nodes()[std::size_t(s)];
            acc -= wf_.mass(n) * rhs(s) * dir[n];
        }
        return acc;
    }

    RowSparse hessian(const ScalarField& u) const {
        const auto& tris = wf_.triangles();
        std::vector<Eigen::Matrix2d> tensors(tris.size());
        for (std::size_t t = 0; t < tris.size(); ++t) {
            const Eigen::Vector2d v = wf_.gradient(u, t);
            const double w = std::max(weight(t, v), weight_floor);
            tensors[t] = w * (Eigen::Matrix2d::Identity() +
                              (q_[Eigen::Index(t)] - 2.0) / (delta2_ + v.squaredNorm()) * v * v.transpose());
        }
        return wf_.assemble(tensors);
    }

    Eigen::VectorXd scalar_weights(const ScalarField& u) const {
        Eigen::VectorXd w(Eigen::Index(wf_.triangles().size()));
        for (std::size_t t = 0; t < wf_.triangles().size(); ++t)
            w[Eigen::Index(t)] = std::max(weight(t, wf_.gradient(u, t)), weight_floor);
        return w;
    }

private:
    const WeakForm& wf_;
    double delta2_;
    double eps_;
    Eigen::VectorXd q_;
    Eigen::VectorXd rhs_log_;
    double log_scale_{0.0};
};

double weak_residual(const WeakForm& wf, const Eigen::VectorXd& g) {
    double m = 0.0;
    for (Eigen::Index s = 0; s < g.size(); ++s)
        m = std::max(m, std::abs(g[s]) / wf.mass(wf.interior_nodes()[std::size_t(s)]));
    return m;
}

constexpr double gradient_drop = 1e-10;

// Step length along a descent direction of the convex energy: the full step
// when the slope there is still nonpositive, otherwise bisection on the slope.
double line_search(const PkEnergy& e, const ScalarField& u, const ScalarField& dir) {
    auto slope = [&](double a) {
        const double s = e.slope(u, dir, a);
        return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
    };
    if (slope(1.0) <= 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) <= 0.0) lo = mid;
        else hi = mid;
        if (hi - lo < 1e-6 * hi) break;
    }
    return lo > 0.0 ? lo : hi * 0.5;
}

PkResult solve_pk_newton(const Problem& pr, const WeakForm& wf, double k, ScalarField u) {
    PkEnergy energy(wf, pr, k);
    const SolverConfig& cfg = pr.solver;
    KStepReport step;
    step.k = k;
    const int cg_max = cg_limit(pr.grid, cfg.cg_max_iter);
    double forcing = 1e-2;
    double g_first = 0.0;
    for (int it = 0; it < cfg.picard_max_iter; ++it) {
        energy.rescale(u);
        const Eigen::VectorXd g = energy.gradient(u);
        const double g_max = g.cwiseAbs().maxCoeff();
        if (it == 0) g_first = g_max;
        step.iterations = it + 1;
        step.weak_residual = weak_residual(wf, g);
        if (g_max == 0.0) {
            step.update_norm = 0.0;
            return {u, step};
        }
        // gradient at round-off level: flat directions of the degenerate
        // Hessian can keep the update large without lowering the energy
        if (it > 0 && g_max <= gradient_drop * g_first) return {u, step};
        const RowSparse h = energy.hessian(u);
        Eigen::VectorXd delta = Eigen::VectorXd::Zero(g.size());
        const CgResult cg = conjugate_gradient(h, -g, delta, std::max(cfg.cg_tol, forcing), cg_max);
        step.cg_iterations += cg.iterations;
        if (!(g.dot(delta) < 0.0)) {
            // inexact solve lost descent; fall back to the scaled gradient
            delta = -g.cwiseQuotient(h.diagonal());
        }
        ScalarField dir = ScalarField::Zero(u.size());
        wf.prolong(delta, dir);
        const double alpha = line_search(energy, u, dir);
        u += alpha * dir;
        step.update_norm = alpha * delta.cwiseAbs().maxCoeff();
        if (step.update_norm < cfg.picard_tol) {
            energy.rescale(u);
            step.weak_residual = weak_residual(wf, energy.gradient(u));
            return {u, step};
        }
        forcing = std::min(1e-2, step.update_norm);

    }
    std::ostringstream os;
    os << "Newton iteration for k = " << k << " did not converge after " << cfg.picard_max_iter
       << " steps (last update " << step.update_norm << ")";
    SolveReport rep;
    rep.steps.push_back(step);
    throw SolverError(os.str(), rep);
}

PkResult solve_pk_picard(const Problem& pr, const WeakForm& wf, double k, ScalarField u) {
    PkEnergy energy(wf, pr, k);
    const SolverConfig& cfg = pr.solver;
    const int cg_max = cg_limit(pr.grid, cfg.cg_max_iter);
    ScalarField f_bnd = ScalarField::Zero(u.size());
    impose_boundary(pr.grid, pr.f, f_bnd);

    KStepReport step;
    step.k = k;
    for (int it = 0; it < cfg.picard_max_iter; ++it) {
        energy.rescale(u);
        const Eigen::VectorXd w = energy.scalar_weights(u);
        const RowSparse l = wf.assemble(w);
        const Eigen::VectorXd coupling = wf.restrict(wf.assemble_full(w) * f_bnd);
        Eigen::VectorXd b(wf.unknowns());
        for (Eigen::Index s = 0; s < b.size(); ++s)
            b[s] = wf.mass(wf.interior_nodes()[std::size_t(s)]) * energy.rhs(s) - coupling[s];
        Eigen::VectorXd next = wf.restrict(u);
        const CgResult cg = conjugate_gradient(l, b, next, cfg.cg_tol, cg_max);
        step.cg_iterations += cg.iterations;
        const Eigen::VectorXd cur = wf.restrict(u);
        const Eigen::VectorXd upd = cfg.damping * (next - cur);
        wf.prolong(cur + upd, u);
        step.iterations = it + 1;
        step.update_norm = upd.cwiseAbs().maxCoeff();
        if (step.update_norm < cfg.picard_tol) {
            energy.rescale(u);
            step.weak_residual = weak_residual(wf, energy.gradient(u));
            return {u, step};
        }
    }
    std::ostringstream os;
    os << "Picard iteration for k = " << k << " did not converge after " << cfg.picard_max_iter
       << " steps (last update " << step.update_norm << "); retry with smaller damping";
    SolveReport rep;
    rep.steps.push_back(step);
    throw SolverError(os.str(), rep);
}

}  // namespace

ScalarField solve_linear_weighted(const ScalarField& w, const ScalarField& rhs, const ScalarField& f_boundary,
                                  const FrameField& frame, double cg_tol, int cg_max_iter) {
    const Grid2D& g = frame.grid;
    if (w.size() != g.size() || rhs.size() != g.size() || f_boundary.size() != g.size())
        throw std::invalid_argument("solve_linear_weighted: field sizes do not match the grid");
    for (Eigen::Index k = 0; k < w.size(); ++k)
        if (!(w[k] > 0.0)) throw std::invalid_argument("solve_linear_weighted: nonpositive weight");

    const WeakForm wf(frame, ScalarField::Constant(g.size(), 2.0));
    Eigen::VectorXd tw(Eigen::Index(wf.triangles().size()));
    for (std::size_t t = 0; t < wf.triangles().size(); ++t) {
        const auto& n = wf.triangles()[t].nodes;
        tw[Eigen::Index(t)] = (w[n[0]] + w[n[1]] + w[n[2]]) / 3.0;
    }
    ScalarField u = f_boundary;
    ScalarField f_bnd = ScalarField::Zero(g.size());
    impose_boundary(g, f_boundary, f_bnd);
    const Eigen::VectorXd coupling = wf.restrict(wf.assemble_full(tw) * f_bnd);
    Eigen::VectorXd b(wf.unknowns());
    for (Eigen::Index s = 0; s < b.size(); ++s) {
        const Eigen::Index n = wf.interior_nodes()[std::size_t(s)];
        b[s] = wf.mass(n) * rhs[n] - coupling[s];
    }
    Eigen::VectorXd x = wf.restrict(u);
    const CgResult cg = conjugate_gradient(wf.assemble(tw), b, x, cg_tol, cg_limit(g, cg_max_iter));
    if (!cg.converged) {
        std::ostringstream os;
        os << "conjugate gradients stopped after " << cg.iterations << " iterations, relative residual "
           << cg.relative_residual;
        throw std::runtime_error(os.str());
    }
    wf.prolong(x, u);
    return u;
}

ScalarField harmonic_extension(const Problem& pr) {
    return solve_linear_weighted(ScalarField::Ones(pr.grid.size()), ScalarField::Zero(pr.grid.size()), pr.f,
                                 pr.frame, pr.solver.cg_tol, pr.solver.cg_max_iter);
}

PkResult solve_pk(const Problem& pr, double k, const ScalarField& init) {
    if (!(k >= 1.0)) throw std::invalid_argument("solve_pk needs k >= 1");
    if (init.size() != pr.grid.size() || !init.allFinite())
        throw std::invalid_argument("solve_pk: initial field must be finite and match the grid");
    const WeakForm wf(pr.frame, pr.p);
    ScalarField u = init;
    impose_boundary(pr.grid, pr.f, u);
    return pr.solver.method == PkMethod::newton ? solve_pk_newton(pr, wf, k, std::move(u))
                                                : solve_pk_picard(pr, wf, k, std::move(u));
}

SolveResult continue_k(const Problem& pr, const std::optional<ScalarField>& init) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult out;
    out.report.epsilon = pr.epsilon;
    out.report.form = jensen_form(pr.epsilon);
    out.u = init ? *init : harmonic_extension(pr);
    bool first = true;
    for (double k : pr.solver.k_schedule) {
        PkResult r;
        try {
            r = solve_pk(pr, k, out.u);
        } catch (const SolverError& e) {
            SolveReport rep = out.report;
            for (const auto& s : e.report().steps) rep.steps.push_back(s);
            std::ostringstream os;
            os << "continuation failed at k = " << k << ": " << e.what();
            throw SolverError(os.str(), rep);
        }
        out.report.steps.push_back(r.step);
        if (!first) {
            const double gap = sup_diff(r.u, out.u);
            out.report.gaps.push_back(gap);
            out.u = std::move(r.u);
            if (gap < pr.solver.continuation_tol) {
                out.report.stopped_early = true;
                break;
            }
        } else {
            out.u = std::move(r.u);
        }
        first = false;
    }
    out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

JensenForm jensen_form(double epsilon) {
    if (epsilon > 0.0) return JensenForm::min_form;
    if (epsilon < 0.0) return JensenForm::max_form;
    return JensenForm::plain;
}

SolveResult solve_jensen(const Problem& pr, const std::optional<ScalarField>& init) { return continue_k(pr, init); }

SolveResult solve_dirichlet_infinity(const Problem& pr, const std::optional<ScalarField>& init) {
    if (pr.epsilon != 0.0) throw std::invalid_argument("solve_dirichlet_infinity requires epsilon = 0");
    const auto t0 = std::chrono::steady_clock::now();
    SolveResult out = solve_jensen(pr, init);
    if (pr.solver.polish_sweeps > 0) {
        PolishResult pol = polish_infinity_residual(pr, out.u, pr.solver.polish_sweeps, pr.solver.polish_tol);
        out.report.polish_iterations = pol.iterations;
        out.report.residual_before_polish = pol.residual_before;
        out.report.residual_after_polish = pol.residual_after;
        out.report.polish_accepted = pol.accepted;
        if (pol.accepted) out.u = std::move(pol.u);
    }
    out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

PolishResult polish_infinity_residual(const Problem& pr, const ScalarField& start, int max_iterations, double tol) {
    const Grid2D& g = pr.grid;
    const FrameDifferences ops(pr.frame);
    const VectorField gl = grad_ln_p(pr.p, pr.frame);
    const RowSparse g0 = ops[0], g1 = ops[1];
    const std::array<RowSparse, 4> gg{RowSparse(g0 * g0), RowSparse(g0 * g1), RowSparse(g1 * g0),
                                      RowSparse(g1 * g1)};
    const double floor = default_log_floor;

    std::vector<Eigen::Index> interior;
    std::vector<Eigen::Index> slot(std::size_t(g.size()), -1);
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (!g.is_boundary(k)) {
            slot[std::size_t(k)] = Eigen::Index(interior.size());
            interior.push_back(k);
        }
    const Eigen::Index ni = Eigen::Index(interior.size());

    auto residual = [&](const ScalarField& u) {
        const VectorField eta = ops.gradient(u);
        const auto m = ops.raw_hessian(u);
        Eigen::VectorXd r(ni);
        for (Eigen::Index s = 0; s < ni; ++s) {
            const Eigen::Index k = interior[std::size_t(s)];
            const double e0 = eta(k, 0), e1 = eta(k, 1);
            const double quad = m(k, 0) * e0 * e0 + (m(k, 1) + m(k, 2)) * e0 * e1 + m(k, 3) * e1 * e1;
            const double n2 = e0 * e0 + e1 * e1;
            const double lt = n2 * (e0 * gl(k, 0) + e1 * gl(k, 1)) * std::log(std::max(std::sqrt(n2), floor));
            r[s] = -(quad + lt);
        }
        return r;
    };

    auto jacobian = [&](const ScalarField& u) {
        const VectorField eta = ops.gradient(u);
        const auto m = ops.raw_hessian(u);
        const Eigen::Index n = g.size();
        Eigen::VectorXd c0(n), c1(n), w00(n), w01(n), w11(n);
        for (Eigen::Index k = 0; k < n; ++k) {
            const Eigen::Vector2d e = eta.row(k).transpose();
            Eigen::Matrix2d mm;
            mm << m(k, 0), m(k, 1), m(k, 2), m(k, 3);
            const Eigen::Vector2d glk = gl.row(k).transpose();
            const double s2 = e.squaredNorm();
            const double t = e.dot(glk);
            const double nrm = std::sqrt(s2);
            const double ell = std::log(std::max(nrm, floor));
            Eigen::Vector2d c = (mm + mm.transpose()) * e + ell * (2.0 * t * e + s2 * glk);
            if (nrm > floor) c += t * e;
            c0[k] = c[0];
            c1[k] = c[1];
            w00[k] = e[0] * e[0];
            w01[k] = e[0] * e[1];
            w11[k] = e[1] * e[1];
        }
        RowSparse full = c0.asDiagonal() * g0;
        full += c1.asDiagonal() * g1;
        full += w00.asDiagonal() * gg[0];
        full += w01.asDiagonal() * gg[1];
        full += w01.asDiagonal() * gg[2];
        full += w11.asDiagonal() * gg[3];
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(std::size_t(full.nonZeros()));
        for (Eigen::Index s = 0; s < ni; ++s) {
            for (RowSparse::InnerIterator it(full, interior[std::size_t(s)]); it; ++it) {
                const Eigen::Index col = slot[std::size_t(it.col())];
                if (col >= 0) trips.emplace_back(s, col, -it.value());
            }
        }
        Eigen::SparseMatrix<double> j(ni, ni);
        j.setFromTriplets(trips.begin(), trips.end());
        return j;
    };

    PolishResult out;
    ScalarField u = start;
    Eigen::VectorXd r = residual(u);
    out.residual_before = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
    out.u = u;
    out.residual_after = out.residual_before;

    for (int it = 0; it < max_iterations; ++it) {
        if (out.residual_after <= std::min(tol, 1e-12)) break;
        Eigen::SparseMatrix<double> j = jacobian(u);
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(j);
        if (lu.info() != Eigen::Success) break;
        const Eigen::VectorXd step = lu.solve(-r);
        if (lu.info() != Eigen::Success || !step.allFinite()) break;

        const double merit = r.squaredNorm();
        double alpha = 1.0;
        bool moved = false;
        for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
            ScalarField trial = u;
            for (Eigen::Index s = 0; s < ni; ++s) trial[interior[std::size_t(s)]] += alpha * step[s];
            const Eigen::VectorXd rt = residual(trial);
            if (rt.allFinite() && rt.squaredNorm() < merit) {
                u = std::move(trial);
                r = rt;
                moved = true;
                break;
            }
        }
        out.iterations = it + 1;
        if (!moved) break;
        const double sup = r.cwiseAbs().maxCoeff();
        if (sup < out.residual_after) {
            out.residual_after = sup;
            out.u = u;
        }
    }
    out.accepted = out.residual_after <= tol;
    if (!out.accepted) out.u = start;
    return out;
}

}  // namespace infx
