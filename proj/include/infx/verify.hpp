#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infx/grid.hpp"
#include "infx/problem.hpp"

namespace infx {

struct CheckReport {
    bool applicable{true};
    bool pass{false};
    NodeIndex worst_node{};
    Eigen::Vector2d worst_point = Eigen::Vector2d::Zero();
    double worst_value{0.0};
    double tolerance{0.0};
    std::string summary;
};

std::string to_string(const CheckReport& r);

/// Distance fields from a subsample of boundary nodes.
struct BoundaryDistances {
    std::vector<Eigen::Index> sources;
    std::vector<ScalarField> fields;
};

BoundaryDistances boundary_distances(const FrameField& frame, int max_sources = 64);

/// max over (source, boundary node) pairs of |f(x) - f(y)| / d(x, y).
double lipschitz_constant(const ScalarField& f_boundary, const Grid2D& grid, const BoundaryDistances& dist);

/// Pass iff u <= v + tol at every interior node. Inapplicable (and failing)
/// when the ordering does not already hold on the boundary.
CheckReport check_comparison(const Grid2D& grid, const ScalarField& u, const ScalarField& v, double tol);

/// sup_{B_r} u / (inf_{B_r} u + r) over the Riemannian ball {dist <= r}.
/// Throws std::domain_error if u <= 0 somewhere in B_{2r} or if B_{2r}
/// reaches the boundary.
double harnack_constant(const Grid2D& grid, const ScalarField& u, NodeIndex center, double r,
                        const ScalarField& dist);

/// Nonnegative cutoff that vanishes on the boundary and on the nodes next to it.
class CutoffField {
public:
    CutoffField(const Grid2D& grid, ScalarField values);
    const ScalarField& values() const { return values_; }

private:
    ScalarField values_;
};

/// Pyramid max(0, 1 - max(|x-cx|/ax, |y-cy|/ay)) clipped to the admissible support.
CutoffField tent_cutoff(const Grid2D& grid, Eigen::Vector2d center, Eigen::Vector2d half_width);

struct LogGradientSides {
    double lhs{0.0};
    double rhs{0.0};
};

/// lhs = sup |<D_X zeta, D_X ln u>|^{p}, rhs = sup |D_X zeta + zeta ln(zeta/u) D_X ln p|^{p}.
LogGradientSides log_gradient_sides(const ScalarField& u, const CutoffField& zeta, const ScalarField& p,
                                    const FrameField& frame);

/// Pass iff lhs <= rhs (1 + tol) + tol.
CheckReport check_log_gradient_bound(const ScalarField& u, const CutoffField& zeta, const ScalarField& p,
                                     const FrameField& frame, double tol);

/// Runs solve_dirichlet_infinity from n_inits different starting fields and
/// reports the largest pairwise sup-distance.
CheckReport uniqueness_probe(const Problem& problem, int n_inits, double tol = 1e-3, unsigned seed = 7);

/// Starting fields used by uniqueness_probe, in order: harmonic extension,
/// constant boundary mean, harmonic extension plus a smooth interior bump.
std::vector<ScalarField> probe_initializations(const Problem& problem, int n_inits, unsigned seed);

/// sup ||D_X d| - 1| over interior nodes farther than exclusion_radius from the
/// source (measured by d itself). Pass iff <= tol.
CheckReport eikonal_check(const ScalarField& d, const FrameField& frame, double exclusion_radius, double tol = 0.1);

enum class Suite { comparison, harnack, lemma41, uniqueness, eikonal };

/// Parses "comparison", "harnack", "lemma41", "uniqueness" or "eikonal".
std::optional<Suite> parse_suite(const std::string& name);

/// End-to-end check of one property on a configured problem:
///   comparison  solves with f and f + 0.1, interior ordering to 1e-6
///   harnack     positive-data solve, 5 random admissible balls, bound max f / (min f + r) + 0.1
///   lemma41     positive-data solve, tent cutoff centred in the domain, tol 0.1
///   uniqueness  3 initializations, tol 1e-3
///   eikonal     distance from node (0,0), exclusion radius 0.2, tol 0.1
CheckReport run_suite(const Problem& problem, Suite suite, unsigned seed = 7);

}  // namespace infx
