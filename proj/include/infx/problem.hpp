#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "infx/expr.hpp"
#include "infx/grid.hpp"

namespace infx {

enum class PkMethod {
    newton,  ///< Newton steps on the convex discrete energy, backtracking line search
    picard,  ///< lagged-coefficient iteration with damped updates
};

struct SolverConfig {
    std::vector<double> k_schedule{2, 4, 8, 16, 32, 64};
    double delta_reg{1e-8};
    double damping{0.7};
    double picard_tol{1e-8};
    int picard_max_iter{500};
    double cg_tol{1e-10};
    int cg_max_iter{0};  ///< 0 selects 10 * nx * ny
    double continuation_tol{1e-4};
    PkMethod method{PkMethod::newton};
    int polish_sweeps{50};
    double polish_tol{1e-8};

    /// Throws std::invalid_argument on a non-positive parameter or an
    /// unordered schedule.
    void validate() const;
};

/// User-facing description of a Dirichlet problem, as read from a config file.
struct ProblemSpec {
    GridSpec grid;
    FrameExprs frame = FrameExprs::identity();
    Expr p = Expr::constant(2.0);
    Expr f;
    /// Vertex of a distance cone used as boundary data instead of `f`. The
    /// point may lie outside the rectangle.
    std::optional<Eigen::Vector2d> cone_vertex;
    double epsilon{0.0};
    double p_min{2.0};
    double det_floor{1e-10};
    SolverConfig solver;
};

class ExponentError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A ProblemSpec sampled on its grid with every invariant checked.
struct Problem {
    Grid2D grid;
    FrameField frame;
    ScalarField p;
    ScalarField f;  ///< boundary data; interior entries carry the same expression (or 0 for cones)
    double epsilon{0.0};
    SolverConfig solver;
};

/// Samples frame, exponent and boundary data. Throws FrameSingular,
/// ExponentError (p below p_min or non-finite D_X ln p) or DomainError.
Problem sample_problem(const ProblemSpec& spec);

/// Boundary trace of the lattice distance cone d(., vertex) for the frame of
/// `spec`. The lattice is extended by whole cells until it contains the vertex,
/// which is snapped to the nearest extended node.
ScalarField cone_boundary(const ProblemSpec& spec);

}  // namespace infx
