#include "infx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "infx/differential.hpp"
#include "infx/distance.hpp"
#include "infx/solvers.hpp"

namespace infx {

std::string to_string(const CheckReport& r) {
    std::ostringstream os;
    os << "pass: " << (r.pass ? "true" : "false") << "\n"
       << "applicable: " << (r.applicable ? "true" : "false") << "\n"
       << "worst_node: " << r.worst_node.i << "," << r.worst_node.j << "\n"
       << "worst_point: " << r.worst_point.x() << "," << r.worst_point.y() << "\n"
       << "worst_value: " << r.worst_value << "\n"
       << "tolerance: " << r.tolerance << "\n"
       << "summary: " << r.summary << "\n";
    return os.str();
}

BoundaryDistances boundary_distances(const FrameField& frame, int max_sources) {
    const Grid2D& g = frame.grid;
    std::vector<Eigen::Index> boundary;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) boundary.push_back(k);
    BoundaryDistances out;
    const std::size_t count = std::min<std::size_t>(boundary.size(), std::size_t(std::max(max_sources, 1)));
    for (std::size_t s = 0; s < count; ++s) {
        const Eigen::Index k = boundary[s * boundary.size() / count];
        out.sources.push_back(k);
        out.fields.push_back(riemannian_distance(frame, g.node(k)));
    }
    return out;
}

double lipschitz_constant(const ScalarField& f, const Grid2D& g, const BoundaryDistances& dist) {
    if (2 * (g.nx() + g.ny()) - 4 < 2) throw std::invalid_argument("need at least two boundary nodes");
    double best = 0.0;
    for (std::size_t s = 0; s < dist.sources.size(); ++s) {
        const Eigen::Index src = dist.sources[s];
        for (Eigen::Index k = 0; k < g.size(); ++k) {
            if (k == src || !g.is_boundary(k)) continue;
            const double d = dist.fields[s][k];
            if (d > 0.0) best = std::max(best, std::abs(f[src] - f[k]) / d);
        }
    }
    return best;
}

CheckReport check_comparison(const Grid2D& g, const ScalarField& u, const ScalarField& v, double tol) {
    CheckReport r;
    r.tolerance = tol;
    double bnd = -std::numeric_limits<double>::infinity();
    double worst = -std::numeric_limits<double>::infinity();
    Eigen::Index worst_k = 0;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        const double gap = u[k] - v[k];
        if (g.is_boundary(k)) {
            bnd = std::max(bnd, gap);
        } else if (gap > worst) {
            worst = gap;
            worst_k = k;
        }
    }
    r.worst_node = g.node(worst_k);
    r.worst_point = g.point(worst_k);
    r.worst_value = worst;
    std::ostringstream os;
    if (bnd > tol) {
        r.applicable = false;
        r.pass = false;
        os << "boundary ordering violated: max (u - v) on boundary = " << bnd;
    } else {
        r.pass = worst <= tol;
        os << "max interior (u - v) = " << worst << " (boundary max " << bnd << ")";
    }
    r.summary = os.str();
    return r;
}

double harnack_constant(const Grid2D& g, const ScalarField& u, NodeIndex center, double r, const ScalarField& dist) {
    if (!(r > 0.0)) throw std::invalid_argument("harnack_constant needs r > 0");
    if (dist[g.index(center)] != 0.0) throw std::invalid_argument("distance field is not sourced at the center");
    double sup = -std::numeric_limits<double>::infinity();
    double inf = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (dist[k] > 2.0 * r) continue;
        if (g.is_boundary(k)) throw std::domain_error("ball B_2r is not contained in the domain");
        if (!(u[k] > 0.0)) throw std::domain_error("u is not positive on B_2r");
        if (dist[k] <= r) {
            sup = std::max(sup, u[k]);
            inf = std::min(inf, u[k]);
        }
    }
    return sup / (inf + r);
}

CutoffField::CutoffField(const Grid2D& g, ScalarField values) : values_(std::move(values)) {
    if (values_.size() != g.size()) throw std::invalid_argument("cutoff size does not match grid");
    for (int j = 0; j < g.ny(); ++j) {
        for (int i = 0; i < g.nx(); ++i) {
            const double z = values_[g.index(i, j)];
            if (!(z >= 0.0) || !std::isfinite(z)) throw std::invalid_argument("cutoff must be finite and nonnegative");
            const bool near_edge = i <= 1 || j <= 1 || i >= g.nx() - 2 || j >= g.ny() - 2;
            if (near_edge && z != 0.0)
                throw std::invalid_argument("cutoff must vanish on the boundary and its neighbours");
        }
    }
}

CutoffField tent_cutoff(const Grid2D& g, Eigen::Vector2d c, Eigen::Vector2d hw) {
    ScalarField z = ScalarField::Zero(g.size());
    for (int j = 2; j < g.ny() - 2; ++j)
        for (int i = 2; i < g.nx() - 2; ++i) {
            const double t = std::max(std::abs(g.x(i) - c.x()) / hw.x(), std::abs(g.y(j) - c.y()) / hw.y());
            z[g.index(i, j)] = std::max(0.0, 1.0 - t);
        }
    return CutoffField(g, std::move(z));
}

LogGradientSides log_gradient_sides(const ScalarField& u, const CutoffField& zeta, const ScalarField& p,
                                    const FrameField& frame) {
    const Grid2D& g = frame.grid;
    if (!(u.array() > 0.0).all()) throw std::domain_error("log-gradient bound needs u > 0");
    const FrameDifferences ops(frame);
    const ScalarField& z = zeta.values();
    const VectorField dz = ops.gradient(z);
    const VectorField dlu = ops.gradient(u.array().log().matrix());
    const VectorField dlp = grad_ln_p(p, frame);
    LogGradientSides s;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (g.is_boundary(k)) continue;
        const double lhs = std::abs(dz.row(k).dot(dlu.row(k)));
        const double zl = z[k] > 0.0 ? z[k] * std::log(z[k] / u[k]) : 0.0;
        const double rhs = (dz.row(k) + zl * dlp.row(k)).norm();
        s.lhs = std::max(s.lhs, std::pow(lhs, p[k]));
        s.rhs = std::max(s.rhs, std::pow(rhs, p[k]));
    }
    return s;
}

CheckReport check_log_gradient_bound(const ScalarField& u, const CutoffField& zeta, const ScalarField& p,
                                     const FrameField& frame, double tol) {
    const LogGradientSides s = log_gradient_sides(u, zeta, p, frame);
    CheckReport r;
    r.tolerance = tol;
    r.worst_value = s.lhs - s.rhs;
    r.pass = s.lhs <= s.rhs * (1.0 + tol) + tol;
    std::ostringstream os;
    os << "lhs = " << s.lhs << ", rhs = " << s.rhs;
    r.summary = os.str();
    return r;
}

std::vector<ScalarField> probe_initializations(const Problem& pr, int n_inits, unsigned seed) {
    const Grid2D& g = pr.grid;
    const ScalarField harmonic = harmonic_extension(pr);
    double mean = 0.0;
    int nb = 0;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) {
            mean += pr.f[k];
            ++nb;
        }
    mean /= nb;

    std::vector<ScalarField> inits;
    inits.push_back(harmonic);
    if (n_inits >= 2) {
        ScalarField c = ScalarField::Constant(g.size(), mean);
        for (Eigen::Index k = 0; k < g.size(); ++k)
            if (g.is_boundary(k)) c[k] = pr.f[k];
        inits.push_back(c);
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    const double scale = std::max(pr.f.cwiseAbs().maxCoeff(), 1.0);
    while (int(inits.size()) < n_inits) {
        ScalarField u = harmonic;
        for (int m = 1; m <= 3; ++m)
            for (int n = 1; n <= 3; ++n) {
                const double a = 0.1 * scale * coef(rng) / (m * n);
                for (int j = 0; j < g.ny(); ++j)
                    for (int i = 0; i < g.nx(); ++i) {
                        const double s = double(i) / (g.nx() - 1), t = double(j) / (g.ny() - 1);
                        u[g.index(i, j)] += a * std::sin(m * std::numbers::pi * s) * std::sin(n * std::numbers::pi * t);
                    }
            }
        for (Eigen::Index k = 0; k < g.size(); ++k)
            if (g.is_boundary(k)) u[k] = pr.f[k];
        inits.push_back(u);
    }
    return inits;
}

CheckReport uniqueness_probe(const Problem& pr, int n_inits, double tol, unsigned seed) {
    if (n_inits < 2) throw std::invalid_argument("uniqueness_probe needs at least two initializations");
    std::vector<ScalarField> sols;
    for (const ScalarField& init : probe_initializations(pr, n_inits, seed))
        sols.push_back(solve_dirichlet_infinity(pr, init).u);
    CheckReport r;
    r.tolerance = tol;
    Eigen::Index worst_k = 0;
    for (std::size_t a = 0; a < sols.size(); ++a)
        for (std::size_t b = a + 1; b < sols.size(); ++b) {
            Eigen::Index k = 0;
            const double d = (sols[a] - sols[b]).cwiseAbs().maxCoeff(&k);
            if (d > r.worst_value) {
                r.worst_value = d;
                worst_k = k;
            }
        }
    r.worst_node = pr.grid.node(worst_k);
    r.worst_point = pr.grid.point(worst_k);
    r.pass = r.worst_value < tol;
    std::ostringstream os;
    os << n_inits << " initializations, max pairwise sup-distance " << r.worst_value;
    r.summary = os.str();
    return r;
}

CheckReport eikonal_check(const ScalarField& d, const FrameField& frame, double exclusion_radius, double tol) {
    const Grid2D& g = frame.grid;
    const VectorField grad = riemannian_gradient(d, frame);
    CheckReport r;
    r.tolerance = tol;
    Eigen::Index worst_k = 0;
    int counted = 0;
    for (Eigen::Index k = 0; k < g.size(); ++k) {
        if (g.is_boundary(k) || !(d[k] > exclusion_radius)) continue;
        ++counted;
        const double dev = std::abs(grad.row(k).norm() - 1.0);
        if (dev > r.worst_value) {
            r.worst_value = dev;
            worst_k = k;
        }
    }
    r.worst_node = g.node(worst_k);
    r.worst_point = g.point(worst_k);
    r.pass = r.worst_value <= tol;
    std::ostringstream os;
    os << counted << " nodes checked, max | |D_X d| - 1 | = " << r.worst_value;
    r.summary = os.str();
    return r;
}

std::optional<Suite> parse_suite(const std::string& name) {
    if (name == "comparison") return Suite::comparison;
    if (name == "harnack") return Suite::harnack;
    if (name == "lemma41") return Suite::lemma41;
    if (name == "uniqueness") return Suite::uniqueness;
    if (name == "eikonal") return Suite::eikonal;
    return std::nullopt;
}

namespace {

ScalarField solve_configured(const Problem& pr) {
    return pr.epsilon == 0.0 ? solve_dirichlet_infinity(pr).u : solve_jensen(pr).u;
}

CheckReport harnack_suite(const Problem& pr, unsigned seed) {
    const Grid2D& g = pr.grid;
    const ScalarField u = solve_configured(pr);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick_i(1, g.nx() - 2), pick_j(1, g.ny() - 2);
    std::uniform_real_distribution<double> frac(0.3, 0.9);
    const double h = std::max(g.hx(), g.hy());
    double f_max = -std::numeric_limits<double>::infinity(), f_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (g.is_boundary(k)) {
            f_max = std::max(f_max, pr.f[k]);
            f_min = std::min(f_min, pr.f[k]);
        }

    CheckReport r;
    r.tolerance = 0.1;
    r.worst_value = -std::numeric_limits<double>::infinity();
    r.pass = true;
    int balls = 0;
    std::ostringstream os;
    for (int attempt = 0; attempt < 500 && balls < 5; ++attempt) {
        const NodeIndex c{pick_i(rng), pick_j(rng)};
        const ScalarField d = riemannian_distance(pr.frame, c);
        double reach = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < g.size(); ++k)
            if (g.is_boundary(k)) reach = std::min(reach, d[k]);
        const double radius = frac(rng) * reach / 2.0;
        if (radius < h) continue;
        double c_h = 0.0;
        try {
            c_h = harnack_constant(g, u, c, radius, d);
        } catch (const std::domain_error&) {
            continue;
        }
        ++balls;
        const double excess = c_h - f_max / (f_min + radius);
        if (excess > r.worst_value) {
            r.worst_value = excess;
            r.worst_node = c;
            r.worst_point = g.point(g.index(c));
        }
        r.pass = r.pass && excess <= r.tolerance;
        os << (balls > 1 ? "; " : "") << "r=" << radius << " C=" << c_h;
    }
    if (balls < 5) {
        r.applicable = false;
        r.pass = false;
        r.summary = "fewer than 5 admissible balls (u must be positive, domain large enough)";
        return r;
    }
    r.summary = "C against max f / (min f + r) over 5 balls: " + os.str();
    return r;
}

CheckReport lemma41_suite(const Problem& pr) {
    const Grid2D& g = pr.grid;
    const ScalarField u = solve_configured(pr);
    if (!(u.array() > 0.0).all()) {
        CheckReport r;
        r.applicable = false;
        r.summary = "solution is not positive";
        return r;
    }
    const Eigen::Vector2d lo = g.point(0);
    const Eigen::Vector2d hi = g.point(g.size() - 1);
    const CutoffField zeta = tent_cutoff(g, (lo + hi) / 2.0, 0.35 * (hi - lo));
    return check_log_gradient_bound(u, zeta, pr.p, pr.frame, 0.1);
}

CheckReport comparison_suite(const Problem& pr) {
    Problem lifted = pr;
    lifted.f.array() += 0.1;
    return check_comparison(pr.grid, solve_configured(pr), solve_configured(lifted), 1e-6);
}

}  // namespace

CheckReport run_suite(const Problem& pr, Suite suite, unsigned seed) {
    switch (suite) {
    case Suite::comparison: return comparison_suite(pr);
    case Suite::harnack: return harnack_suite(pr, seed);
    case Suite::lemma41: return lemma41_suite(pr);
    case Suite::uniqueness: return uniqueness_probe(pr, 3, 1e-3, seed);
    case Suite::eikonal: return eikonal_check(riemannian_distance(pr.frame, {0, 0}), pr.frame, 0.2, 0.1);
    }
    throw std::invalid_argument("unknown suite");
}

}  // namespace infx
