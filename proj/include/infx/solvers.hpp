#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infx/problem.hpp"

namespace infx {

/// Which limit equation a Jensen solve targets, by the sign of epsilon.
enum class JensenForm { min_form, max_form, plain };

struct KStepReport {
    double k{0.0};
    int iterations{0};
    double update_norm{0.0};
    double weak_residual{0.0};
    long cg_iterations{0};
};

struct SolveReport {
    std::vector<KStepReport> steps;
    /// |u_{k_{i+1}} - u_{k_i}|_inf for every consecutive pair that was run.
    std::vector<double> gaps;
    bool stopped_early{false};
    JensenForm form{JensenForm::plain};
    double epsilon{0.0};
    bool polish_accepted{false};
    int polish_iterations{0};
    double residual_before_polish{0.0};
    double residual_after_polish{0.0};
    double wall_seconds{0.0};
};

/// Raised when an iteration does not converge; carries the history so far.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, SolveReport report)
        : std::runtime_error(what), report_(std::move(report)) {}
    const SolveReport& report() const { return report_; }

private:
    SolveReport report_;
};

/// Solves -div_X(w D_X u) = rhs with u = f_boundary on boundary nodes.
/// `w` must be positive at every node; each cell uses the average of its
/// corner weights. Conjugate gradients run to `cg_tol` (relative).
ScalarField solve_linear_weighted(const ScalarField& w, const ScalarField& rhs, const ScalarField& f_boundary,
                                  const FrameField& frame, double cg_tol = 1e-10, int cg_max_iter = 0);

/// Discrete harmonic extension of the boundary values of `f` (w = 1, rhs = 0).
ScalarField harmonic_extension(const Problem& problem);

struct PkResult {
    ScalarField u;
    KStepReport step;
};

/// One Dirichlet problem -Delta_{X,kp(x)} u = sign(eps)|eps|^{kp(x)-1}, u = f on
/// the boundary, started from `init` (boundary values are overwritten by f).
PkResult solve_pk(const Problem& problem, double k, const ScalarField& init);

struct SolveResult {
    ScalarField u;
    SolveReport report;
};

/// Runs solve_pk along the k schedule with warm starts. `init` defaults to the
/// harmonic extension of f.
SolveResult continue_k(const Problem& problem, const std::optional<ScalarField>& init = std::nullopt);

JensenForm jensen_form(double epsilon);

/// Continuation with the signed right-hand side; the sign of epsilon selects
/// the limit equation recorded in the report.
SolveResult solve_jensen(const Problem& problem, const std::optional<ScalarField>& init = std::nullopt);

/// epsilon must be 0. Continuation followed by Newton polishing of the
/// pointwise -Delta_{X,inf(x)} u = 0 residual, kept only when it brings the
/// interior sup-norm of that residual down to solver.polish_tol.
SolveResult solve_dirichlet_infinity(const Problem& problem, const std::optional<ScalarField>& init = std::nullopt);

struct PolishResult {
    ScalarField u;
    int iterations{0};
    double residual_before{0.0};
    double residual_after{0.0};
    bool accepted{false};
};

/// Newton iterations on the discrete -Delta_{X,inf(x)} u = 0 equations at the
/// interior nodes, with a backtracking line search on the residual. The result
/// is accepted only when the interior sup-norm of the residual reaches `tol`;
/// otherwise `u` is the start field.
PolishResult polish_infinity_residual(const Problem& problem, const ScalarField& start, int max_iterations,
                                      double tol = 1e-8);

}  // namespace infx
