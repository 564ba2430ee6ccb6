#include <gtest/gtest.h>

#include <cmath>

#include "infx/distance.hpp"
#include "infx/problem.hpp"
#include "infx/solvers.hpp"
#include "infx/verify.hpp"

using namespace infx;

namespace {

Grid2D unit_grid(int n) { return build_grid({0.0, 1.0, 0.0, 1.0, n, n}); }

FrameField identity(const Grid2D& g) { return sample_frame(FrameExprs::identity(), g); }

}  // namespace

TEST(Lipschitz, ConstantDataIsZero) {
    const Grid2D g = unit_grid(17);
    const FrameField f = identity(g);
    EXPECT_EQ(lipschitz_constant(ScalarField::Constant(g.size(), 2.0), g, boundary_distances(f)), 0.0);
}

TEST(Lipschitz, CoordinateFunction) {
    const Grid2D g = unit_grid(17);
    const ScalarField x = g.sample(Expr::parse("x"));
    const double l1 = lipschitz_constant(x, g, boundary_distances(identity(g)));
    EXPECT_GE(l1, 0.91);
    EXPECT_LE(l1, 1.0 + 1e-12);
    const FrameField twice = constant_frame(g, 2.0 * Eigen::Matrix2d::Identity());
    EXPECT_NEAR(lipschitz_constant(x, g, boundary_distances(twice)), 2.0 * l1, 1e-12);
}

TEST(Comparison, EqualFieldsPass) {
    const Grid2D g = unit_grid(9);
    const ScalarField u = g.sample(Expr::parse("sin(x)*y"));
    const CheckReport r = check_comparison(g, u, u, 0.0);
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.pass);
}

TEST(Comparison, ShiftedFieldPasses) {
    const Grid2D g = unit_grid(9);
    const ScalarField u = g.sample(Expr::parse("sin(x)*y"));
    EXPECT_TRUE(check_comparison(g, u, (u.array() + 1.0).matrix(), 0.0).pass);
}

TEST(Comparison, InteriorBumpFailsAtBump) {
    const Grid2D g = unit_grid(9);
    const ScalarField v = g.sample(Expr::parse("x"));
    ScalarField u = v;
    u[g.index(3, 5)] += 0.5;
    const CheckReport r = check_comparison(g, u, v, 1e-9);
    EXPECT_TRUE(r.applicable);
    EXPECT_FALSE(r.pass);
    EXPECT_EQ(r.worst_node, (NodeIndex{3, 5}));
    EXPECT_NEAR(r.worst_value, 0.5, 1e-15);
}

TEST(ComparisonProperty, RolesSwapWithBoundaryOrdering) {
    const Grid2D g = unit_grid(9);
    const ScalarField v = g.sample(Expr::parse("x"));
    const ScalarField u = (v.array() + 0.25).matrix();
    const CheckReport uv = check_comparison(g, u, v, 0.0);
    const CheckReport vu = check_comparison(g, v, u, 0.0);
    EXPECT_FALSE(uv.applicable);
    EXPECT_FALSE(uv.pass);
    EXPECT_TRUE(vu.applicable);
    EXPECT_TRUE(vu.pass);
}

TEST(Harnack, ConstantField) {
    const Grid2D g = build_grid({-0.5, 1.5, -0.5, 1.5, 65, 65});
    const FrameField f = identity(g);
    const NodeIndex c{32, 32};
    const ScalarField d = riemannian_distance(f, c);
    EXPECT_NEAR(harnack_constant(g, ScalarField::Ones(g.size()), c, 0.25, d), 0.8, 1e-15);
    for (double value : {0.5, 3.0})
        for (double r : {0.05, 0.1, 0.2}) {
            const double h = harnack_constant(g, ScalarField::Constant(g.size(), value), c, r, d);
            EXPECT_DOUBLE_EQ(h, value / (value + r));
            EXPECT_LT(h, 1.0);
        }
}

TEST(HarnackProperty, DecreasesWithRadiusForConstantField) {
    const Grid2D g = unit_grid(33);
    const NodeIndex c{16, 16};
    const ScalarField d = riemannian_distance(identity(g), c);
    const ScalarField u = ScalarField::Constant(g.size(), 1.7);
    double last = 1e9;
    for (double r : {0.02, 0.05, 0.1, 0.2}) {
        const double h = harnack_constant(g, u, c, r, d);
        EXPECT_LT(h, last);
        last = h;
    }
}

TEST(HarnackProperty, ScaledFieldMatchesDefinition) {
    const Grid2D g = unit_grid(33);
    const NodeIndex c{14, 17};
    const ScalarField d = riemannian_distance(identity(g), c);
    const ScalarField u = g.sample(Expr::parse("1.5 + 0.3*sin(4*x)*y"));
    const double s = 3.0, r = 0.15;
    const ScalarField su = s * u;
    double sup = -1e300, inf = 1e300;
    for (Eigen::Index k = 0; k < g.size(); ++k)
        if (d[k] <= r) {
            sup = std::max(sup, su[k]);
            inf = std::min(inf, su[k]);
        }
    EXPECT_DOUBLE_EQ(harnack_constant(g, su, c, r, d), sup / (inf + r));
}

TEST(Harnack, InadmissibleBalls) {
    const Grid2D g = unit_grid(33);
    const NodeIndex c{16, 16};
    const ScalarField d = riemannian_distance(identity(g), c);
    EXPECT_THROW(harnack_constant(g, ScalarField::Ones(g.size()), c, 0.3, d), std::domain_error);
    ScalarField u = ScalarField::Ones(g.size());
    u[g.index(17, 16)] = -1.0;
    EXPECT_THROW(harnack_constant(g, u, c, 0.1, d), std::domain_error);
    EXPECT_THROW(harnack_constant(g, ScalarField::Ones(g.size()), c, 0.0, d), std::invalid_argument);
}

TEST(HarnackProperty, SolverOutputsObeyMaximumPrincipleBound) {
    ProblemSpec spec;
    spec.grid = {0.0, 1.0, 0.0, 1.0, 33, 33};
    spec.frame = {Expr::parse("1"), Expr::parse("0"), Expr::parse("0"), Expr::parse("1 + x/2")};
    spec.p = Expr::parse("2 + x^2/4");
    spec.f = Expr::parse("1 + 0.5*x + 0.25*y^2 + 0.25*x*y");
    const Problem pr = sample_problem(spec);
    const CheckReport r = run_suite(pr, Suite::harnack, 3);
    EXPECT_TRUE(r.applicable);
    EXPECT_TRUE(r.pass) << r.summary;
}

TEST(Cutoff, Validation) {
    const Grid2D g = unit_grid(9);
    EXPECT_NO_THROW(CutoffField(g, ScalarField::Zero(g.size())));
    ScalarField z = ScalarField::Zero(g.size());
    z[g.index(1, 4)] = 0.5;
    EXPECT_THROW(CutoffField(g, z), std::invalid_argument);
    z.setZero();
    z[g.index(4, 4)] = -0.1;
    EXPECT_THROW(CutoffField(g, z), std::invalid_argument);
    const CutoffField tent = tent_cutoff(g, {0.5, 0.5}, {0.3, 0.3});
    EXPECT_EQ(tent.values()[g.index(4, 4)], 1.0);
}

TEST(LogGradient, ZeroCutoffGivesZeroSides) {
    const Grid2D g = unit_grid(17);
    const CutoffField zero(g, ScalarField::Zero(g.size()));
    const ScalarField u = g.sample(Expr::parse("2 + x"));
    const LogGradientSides s = log_gradient_sides(u, zero, g.sample(Expr::parse("2 + y")), identity(g));
    EXPECT_EQ(s.lhs, 0.0);
    EXPECT_EQ(s.rhs, 0.0);
    EXPECT_TRUE(check_log_gradient_bound(u, zero, g.sample(Expr::parse("2 + y")), identity(g), 0.0).pass);
}

TEST(LogGradient, ConstantFieldAndExponent) {
    const Grid2D g = unit_grid(17);
    const CutoffField tent = tent_cutoff(g, {0.5, 0.5}, {0.3, 0.3});
    const ScalarField u = ScalarField::Constant(g.size(), 2.0);
    const ScalarField p = ScalarField::Constant(g.size(), 3.0);
    const LogGradientSides s = log_gradient_sides(u, tent, p, identity(g));
    EXPECT_EQ(s.lhs, 0.0);
    EXPECT_GT(s.rhs, 0.0);
    EXPECT_TRUE(check_log_gradient_bound(u, tent, p, identity(g), 0.0).pass);
}

TEST(LogGradient, RequiresPositiveField) {
    const Grid2D g = unit_grid(9);
    const CutoffField tent = tent_cutoff(g, {0.5, 0.5}, {0.3, 0.3});
    EXPECT_THROW(log_gradient_sides(g.sample(Expr::parse("x - 0.5")), tent, ScalarField::Constant(g.size(), 2.0),
                                    identity(g)),
                 std::domain_error);
}

TEST(Uniqueness, ConstantData) {
    ProblemSpec spec;
    spec.grid = {0.0, 1.0, 0.0, 1.0, 17, 17};
    spec.f = Expr::parse("0.75");
    const CheckReport r = uniqueness_probe(sample_problem(spec), 3);
    EXPECT_TRUE(r.pass);
    EXPECT_LT(r.worst_value, 1e-7);
}

TEST(Uniqueness, AronssonTwoInitializations) {
    ProblemSpec spec;
    spec.grid = {1.0, 2.0, 1.0, 2.0, 33, 33};
    spec.f = Expr::parse("x^(4/3) - y^(4/3)");
    const CheckReport r = uniqueness_probe(sample_problem(spec), 2);
    EXPECT_TRUE(r.pass) << r.summary;
    EXPECT_LT(r.worst_value, 1e-3);
}

TEST(Uniqueness, InitializationsDiffer) {
    ProblemSpec spec;
    spec.grid = {0.0, 1.0, 0.0, 1.0, 17, 17};
    spec.f = Expr::parse("x*y");
    const auto inits = probe_initializations(sample_problem(spec), 3, 7);
    ASSERT_EQ(inits.size(), 3u);
    EXPECT_GT((inits[0] - inits[1]).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_GT((inits[0] - inits[2]).cwiseAbs().maxCoeff(), 1e-3);
}

namespace {

CheckReport eikonal(int n, const Eigen::Matrix2d& a) {
    const Grid2D g = unit_grid(n);
    const FrameField f = constant_frame(g, a);
    return eikonal_check(riemannian_distance(f, {0, 0}), f, 0.2);
}

}  // namespace

TEST(Eikonal, EuclideanCorner) {
    const CheckReport r65 = eikonal(65, Eigen::Matrix2d::Identity());
    EXPECT_TRUE(r65.pass) << r65.summary;
    EXPECT_LE(r65.worst_value, 0.1);
}

TEST(Eikonal, DoubledFrameGivesSameDeviation) {
    const CheckReport a = eikonal(65, Eigen::Matrix2d::Identity());
    const CheckReport b = eikonal(65, 2.0 * Eigen::Matrix2d::Identity());
    EXPECT_TRUE(b.pass);
    EXPECT_NEAR(a.worst_value, b.worst_value, 1e-12);
}

TEST(Eikonal, RefinementDoesNotWorsen) {
    EXPECT_LE(eikonal(129, Eigen::Matrix2d::Identity()).worst_value,
              eikonal(65, Eigen::Matrix2d::Identity()).worst_value + 1e-12);
}

TEST(Suites, ParseNames) {
    EXPECT_EQ(parse_suite("comparison"), Suite::comparison);
    EXPECT_EQ(parse_suite("lemma41"), Suite::lemma41);
    EXPECT_FALSE(parse_suite("nonsense").has_value());
}

TEST(Report, TextListsFields) {
    CheckReport r;
    r.pass = true;
    r.summary = "ok";
    const std::string s = to_string(r);
    EXPECT_NE(s.find("pass: true"), std::string::npos);
    EXPECT_NE(s.find("summary: ok"), std::string::npos);
}
