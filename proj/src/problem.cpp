#include "infx/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infx/differential.hpp"
#include "infx/distance.hpp"

namespace infx {

void SolverConfig::validate() const {
    if (k_schedule.empty()) throw std::invalid_argument("k_schedule is empty");
    for (std::size_t i = 0; i < k_schedule.size(); ++i) {
        if (!(k_schedule[i] >= 1.0)) throw std::invalid_argument("k_schedule entries must be >= 1");
        if (i > 0 && !(k_schedule[i] > k_schedule[i - 1]))
            throw std::invalid_argument("k_schedule must be strictly increasing");
    }
    if (!(delta_reg > 0.0)) throw std::invalid_argument("delta_reg must be positive");
    if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("damping must lie in (0, 1]");
    if (!(picard_tol > 0.0) || picard_max_iter <= 0) throw std::invalid_argument("bad outer iteration limits");
    if (!(cg_tol > 0.0) || cg_max_iter < 0) throw std::invalid_argument("bad conjugate gradient limits");
    if (!(continuation_tol > 0.0)) throw std::invalid_argument("continuation_tol must be positive");
    if (polish_sweeps < 0) throw std::invalid_argument("polish_sweeps must be nonnegative");
    if (!(polish_tol > 0.0)) throw std::invalid_argument("polish_tol must be positive");
}

namespace {

int cells_needed(double gap, double h) { return gap > 0.0 ? int(std::ceil(gap / h - 1e-9)) : 0; }

}  // namespace

ScalarField cone_boundary(const ProblemSpec& spec) {
    if (!spec.cone_vertex) throw std::invalid_argument("cone_boundary: no vertex given");
    const Grid2D grid(spec.grid);
    const Eigen::Vector2d v = *spec.cone_vertex;
    const int left = cells_needed(grid.xmin() - v.x(), grid.hx());
    const int right = cells_needed(v.x() - grid.xmax(), grid.hx());
    const int below = cells_needed(grid.ymin() - v.y(), grid.hy());
    const int above = cells_needed(v.y() - grid.ymax(), grid.hy());

    GridSpec ext = grid.spec();
    ext.xmin -= left * grid.hx();
    ext.xmax += right * grid.hx();
    ext.ymin -= below * grid.hy();
    ext.ymax += above * grid.hy();
    ext.nx += left + right;
    ext.ny += below + above;
    const Grid2D big(ext);
    const FrameField frame = sample_frame(spec.frame, big, spec.det_floor);

    const int si = std::clamp(int(std::lround((v.x() - big.xmin()) / big.hx())), 0, big.nx() - 1);
    const int sj = std::clamp(int(std::lround((v.y() - big.ymin()) / big.hy())), 0, big.ny() - 1);
    const ScalarField d = riemannian_distance(frame, {si, sj});

    ScalarField out(grid.size());
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) out[grid.index(i, j)] = d[big.index(i + left, j + below)];
    return out;
}

Problem sample_problem(const ProblemSpec& spec) {
    spec.solver.validate();
    Problem pr;
    pr.grid = Grid2D(spec.grid);
    pr.frame = sample_frame(spec.frame, pr.grid, spec.det_floor);
    pr.p = pr.grid.sample(spec.p);
    for (Eigen::Index k = 0; k < pr.p.size(); ++k) {
        if (!(pr.p[k] >= spec.p_min) || !(pr.p[k] > 1.0)) {
            const auto n = pr.grid.node(k);
            std::ostringstream os;
            os << "exponent p = " << pr.p[k] << " below minimum " << spec.p_min << " at node (" << n.i << ","
               << n.j << ")";
            throw ExponentError(os.str());
        }
    }
    if (!grad_ln_p(pr.p, pr.frame).allFinite()) throw ExponentError("D_X ln p is not finite");

    if (spec.cone_vertex) {
        pr.f = cone_boundary(spec);
    } else {
        if (spec.f.empty()) throw std::invalid_argument("no boundary data");
        pr.f = ScalarField::Zero(pr.grid.size());
        for (int j = 0; j < pr.grid.ny(); ++j)
            for (int i = 0; i < pr.grid.nx(); ++i)
                if (pr.grid.is_boundary(i, j)) pr.f[pr.grid.index(i, j)] = spec.f(pr.grid.x(i), pr.grid.y(j));
        // interior samples are a convenience only; a domain error there is not fatal
        for (int j = 1; j < pr.grid.ny() - 1; ++j)
            for (int i = 1; i < pr.grid.nx() - 1; ++i) {
                try {
                    pr.f[pr.grid.index(i, j)] = spec.f(pr.grid.x(i), pr.grid.y(j));
                } catch (const DomainError&) {
                    pr.f[pr.grid.index(i, j)] = 0.0;
                }
            }
    }
    if (!pr.f.allFinite()) throw DomainError("boundary data is not finite");
    pr.epsilon = spec.epsilon;
    pr.solver = spec.solver;
    return pr;
}

}  // namespace infx
