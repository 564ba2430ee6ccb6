// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "infx/differential.hpp"
#include "infx/distance.hpp"
#include "infx/operators.hpp"
#include "infx/problem.hpp"
#include "infx/solvers.hpp"
#include "infx/verify.hpp"

using namespace infx;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> run;
};

double sup_diff(const ScalarField& a, const ScalarField& b) { return (a - b).cwiseAbs().maxCoeff(); }

double interior_error(const Grid2D& g, const ScalarField& u, const ScalarField& exact) {
    double e = 0.0;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (!g.is_boundary(k)) e = std::max(e, std::abs(u[k] - exact[k]));
    return e;
}

ProblemSpec square(double x0, double x1, int n, const char* f) {
    ProblemSpec s;
    s.grid = {x0, x1, x0, x1, n, n};
    s.f = Expr::parse(f);
    return s;
}

ProblemSpec cone_spec() {
    ProblemSpec s;
    s.grid = {0.0, 1.0, 0.0, 1.0, 65, 65};
    s.frame = {Expr::parse("1"), Expr::parse("0"), Expr::parse("0"), Expr::parse("1 + x/2")};
    s.p = Expr::parse("2 + x^2/4");
    s.cone_vertex = Eigen::Vector2d(-0.5, -0.5);
    return s;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Outcome stencil_order() {
    double grad[3], hess[3];
    const int sizes[3] = {33, 65, 129};
    for (int s = 0; s < 3; ++s) {
        const Grid2D g = build_grid({0.0, 1.0, 0.0, 1.0, sizes[s], sizes[s]});
        const FrameField id = sample_frame(FrameExprs::identity(), g);
        const ScalarField u = g.sample(Expr::parse("sin(x)*cos(y)"));
        const VectorField d = riemannian_gradient(u, id);
        const MatrixField h = symmetrized_hessian(u, id);
        grad[s] = hess[s] = 0.0;
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            const double x = g.point(k).x(), y = g.point(k).y();
            grad[s] = std::max({grad[s], std::abs(d(k, 0) - std::cos(x) * std::cos(y)),
                                std::abs(d(k, 1) + std::sin(x) * std::sin(y))});
            if (g.is_boundary(k)) continue;
            hess[s] = std::max({hess[s], std::abs(h(k, 0) + std::sin(x) * std::cos(y)),
                                std::abs(h(k, 1) + std::cos(x) * std::sin(y)), std::abs(h(k, 2) + std::sin(x) * std::cos(y))});
        }
    }
    const double r[4] = {grad[0] / grad[1], grad[1] / grad[2], hess[0] / hess[1], hess[1] / hess[2]};
    std::ostringstream os;
    os << "gradient ratios " << r[0] << ", " << r[1] << "; hessian ratios " << r[2] << ", " << r[3];
    return {r[0] >= 3.5 && r[1] >= 3.5 && r[2] >= 3.5 && r[3] >= 3.5, os.str()};
}

Outcome harmonic_oracle() {
    const Problem pr = sample_problem(square(0.0, 1.0, 65, "x^2 - y^2"));
    const ScalarField u = solve_pk(pr, 1.0, ScalarField::Zero(pr.grid.size())).u;
    const double e = sup_diff(u, pr.f);
    return {e <= 1e-6, fmt("sup error %.3g", e)};
}

Outcome radial_oracle() {
    double err[2];
    const int sizes[2] = {33, 65};
    for (int s = 0; s < 2; ++s) {
        ProblemSpec spec = square(1.0, 2.0, sizes[s], "(x^2 + y^2)^(1/3)");
        spec.p = Expr::parse("4");
        const Problem pr = sample_problem(spec);
        const ScalarField u = solve_pk(pr, 1.0, harmonic_extension(pr)).u;
        err[s] = interior_error(pr.grid, u, pr.f);
    }
    std::ostringstream os;
    os << "interior error 33: " << err[0] << ", 65: " << err[1];
    return {err[1] <= 5e-2 && err[1] < err[0], os.str()};
}

Outcome aronsson_oracle() {
    const Problem pr = sample_problem(square(1.0, 2.0, 65, "x^(4/3) - y^(4/3)"));
    const SolveResult r = continue_k(pr);
    const double e = sup_diff(r.u, pr.f);
    const auto& gaps = r.report.gaps;
    const bool gaps_ok = gaps.size() >= 2 && gaps.back() < gaps.front();
    std::ostringstream os;
    os << "sup error " << e << "; gaps";
    for (double g : gaps) os << " " << g;
    return {e <= 2e-2 && gaps_ok, os.str()};
}

Outcome cone_cancellation() {
    const Problem pr = sample_problem(cone_spec());
    const SolveResult r = solve_dirichlet_infinity(pr);
    const double res = interior_sup(pr.grid, infinity_x_residual_field(r.u, pr.frame, pr.p));
    std::ostringstream os;
    os << "interior residual " << res << " (continuation " << r.report.residual_before_polish << ")";
    return {res <= 5e-2, os.str()};
}

Outcome jensen_min_form() {
    ProblemSpec spec = square(0.0, 1.0, 65, "x");
    spec.epsilon = 1.0;
    const Problem pr = sample_problem(spec);
    const ScalarField u = solve_jensen(pr).u;
    const VectorField d = riemannian_gradient(u, pr.frame);
    const double min_sq = d.rowwise().squaredNorm().minCoeff();
    const double res = interior_sup(pr.grid, min_form_residual(u, pr.frame, pr.p, pr.epsilon));
    std::ostringstream os;
    os << "min |D_X u|^2 " << min_sq << ", min-form residual " << res;
    return {min_sq >= 1.0 - 5e-2 && res <= 5e-2, os.str()};
}

Outcome uniqueness() {
    const CheckReport r = uniqueness_probe(sample_problem(cone_spec()), 3);
    return {r.pass, r.summary};
}

Outcome comparison() {
    double worst = -1e300;
    std::ostringstream os;
    for (const char* f : {"sin(3*x)*cos(2*y)", "x^(4/3) - y^2"}) {
        ProblemSpec spec = cone_spec();
        spec.cone_vertex.reset();
        spec.f = Expr::parse(f);
        const Problem lo = sample_problem(spec);
        spec.f = Expr::parse(std::string("(") + f + ") + 0.1");
        const Problem hi = sample_problem(spec);
        const double drop = (solve_dirichlet_infinity(lo).u - solve_dirichlet_infinity(hi).u).maxCoeff();
        worst = std::max(worst, drop);
    }
    os << "largest decrease " << worst;
    return {worst <= 1e-6, os.str()};
}

Outcome harnack() {
    ProblemSpec spec = cone_spec();
    spec.cone_vertex.reset();
    spec.f = Expr::parse("1 + 0.5*x + 0.25*y^2 + 0.25*x*y");
    const CheckReport r = run_suite(sample_problem(spec), Suite::harnack, 2026);
    return {r.applicable && r.pass, r.summary};
}

Outcome log_gradient() {
    std::ostringstream os;
    bool pass = true;
    for (const char* p : {"3 + 0.5*sin(2*x + y)", "2 + x^2/4"}) {
        ProblemSpec spec = cone_spec();
        spec.cone_vertex.reset();
        spec.p = Expr::parse(p);
        spec.f = Expr::parse("2 + 0.25*x - 0.125*y");
        const Problem pr = sample_problem(spec);
        const ScalarField u = solve_dirichlet_infinity(pr).u;
        for (const Eigen::Vector2d& c : {Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.35, 0.6)}) {
            const CutoffField zeta = tent_cutoff(pr.grid, c, {0.25, 0.3});
            const CheckReport r = check_log_gradient_bound(u, zeta, pr.p, pr.frame, 0.1);
            pass = pass && r.pass;
            os << "[p=" << p << "] " << r.summary << "; ";
        }
    }
    return {pass, os.str()};
}

Outcome distance_scaling() {
    const Grid2D g = build_grid({0.0, 1.0, 0.0, 1.0, 65, 65});
    const FrameExprs a{Expr::parse("1 + 0.3*y"), Expr::parse("0.2*x"), Expr::parse("0"), Expr::parse("1 + x/2")};
    const FrameExprs a2{Expr::parse("2*(1 + 0.3*y)"), Expr::parse("2*(0.2*x)"), Expr::parse("0"), Expr::parse("2*(1 + x/2)")};
    const ScalarField d1 = riemannian_distance(sample_frame(a, g), {7, 3});
    const ScalarField d2 = riemannian_distance(sample_frame(a2, g), {7, 3});
    bool exact = true;
    for (Eigen::Index k = 0; k < g.size(); ++k) exact = exact && d2[k] == 0.5 * d1[k];
    const FrameField i1 = sample_frame(FrameExprs::identity(), g);
    const FrameField i2 = constant_frame(g, 2.0 * Eigen::Matrix2d::Identity());
    const CheckReport e1 = eikonal_check(riemannian_distance(i1, {0, 0}), i1, 0.2);
    const CheckReport e2 = eikonal_check(riemannian_distance(i2, {0, 0}), i2, 0.2);
    std::ostringstream os;
    os << (exact ? "halving exact" : "halving inexact") << "; eikonal deviation " << e1.worst_value << " vs "
       << e2.worst_value;
    return {exact && e1.pass && e2.pass && std::abs(e1.worst_value - e2.worst_value) <= 1e-12, os.str()};
}

Outcome jet_formulas() {
    auto jet = [](double e0, double e1, double h11, double h12, double h22) {
        Jet j;
        j.eta << e0, e1;
        j.h << h11, h12, h12, h22;
        return j;
    };
    auto ex = [](double p, double k, Eigen::Vector2d gl) {
        Exponent e;
        e.p = p;
        e.k = k;
        e.grad_ln_p = gl;
        e.grad_kp = k * p * gl;
        return e;
    };
    const std::vector<std::pair<double, double>> cases = {
        {infinity_residual_at(jet(1, 1, 0, 1, 0)), 2.0},
        {infinity_x_residual_at(jet(2, 0, 3, 0, 5), ex(2, 1, {1, 0})), -(12.0 + 8.0 * std::log(2.0))},
        {pk_residual_at(jet(1, 0, 1, 0, 1), ex(2, 1, {0, 0})), -2.0},
        {pk_residual_at(jet(1, 0, 1, 0, 0), ex(4, 1, {0, 0})), -3.0},
    };
    double worst = 0.0;
    for (const auto& [got, want] : cases) worst = std::max(worst, std::abs(got - want));
    const Grid2D g = build_grid({0.5, 1.5, 0.0, 1.0, 17, 17});
    const ScalarField r = infinity_x_residual_field(g.sample(Expr::parse("2*x")), sample_frame(FrameExprs::identity(), g),
                                                    g.sample(Expr::parse("e^x")));
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (!g.is_boundary(k)) worst = std::max(worst, std::abs(r[k] + 8.0 * std::log(2.0)));
    return {worst <= 1e-12, fmt("max deviation %.3g", worst)};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "stencil order", 1.0, stencil_order},
        {2, "harmonic oracle", 5.0, harmonic_oracle},
        {3, "radial p-harmonic oracle", 30.0, radial_oracle},
        {4, "Aronsson oracle", 60.0, aronsson_oracle},
        {5, "cone cancellation", 60.0, cone_cancellation},
        {6, "Jensen min-form", 60.0, jensen_min_form},
        {7, "uniqueness probe", 180.0, uniqueness},
        {8, "comparison monotonicity", 120.0, comparison},
        {9, "Harnack bound", 60.0, harnack},
        {10, "log-gradient inequality", 60.0, log_gradient},
        {11, "distance scaling", 5.0, distance_scaling},
        {12, "jet formulas", 1.0, jet_formulas},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs < c.limit_seconds;
        failed += !pass;
        std::printf("%s %2d %-26s %7.2fs (limit %g s)  %s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(), secs,
                    c.limit_seconds, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
