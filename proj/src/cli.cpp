#include "infx/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "infx/config.hpp"
#include "infx/distance.hpp"
#include "infx/field_io.hpp"
#include "infx/operators.hpp"
#include "infx/solvers.hpp"
#include "infx/verify.hpp"

namespace infx {

namespace {

struct Options {
    std::string config;
    std::string in;
    std::string out;
    std::string report;
    std::string source;
    std::string suite;
    std::optional<double> epsilon;
    std::optional<double> k_max;
    unsigned seed{7};
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Problem load(const Options& o) {
    ProblemSpec spec = read_problem_spec(o.config);
    if (o.epsilon) spec.epsilon = *o.epsilon;
    if (o.k_max) {
        auto& ks = spec.solver.k_schedule;
        ks.erase(std::remove_if(ks.begin(), ks.end(), [&](double k) { return k > *o.k_max; }), ks.end());
        if (ks.empty()) throw UsageError("--k-max removes every entry of the k schedule");
    }
    return load_problem(spec);
}

std::filesystem::path sibling(const std::string& out, const std::string& suffix) {
    std::filesystem::path p(out);
    return p.parent_path() / (p.stem().string() + suffix);
}

int run_solve(const Options& o, std::ostream& out) {
    const Problem pr = load(o);
    const SolveResult res = pr.epsilon == 0.0 ? solve_dirichlet_infinity(pr) : solve_jensen(pr);
    export_field(res.u, pr.grid, o.out);
    const std::filesystem::path report = o.report.empty() ? sibling(o.out, ".report.json")
                                                                 : std::filesystem::path(o.report);
    std::ofstream rep(report);
    if (!rep) throw std::runtime_error("cannot write " + report.string());
    rep << report_to_json(res.report) << "\n";
    out << "wrote " << o.out << " and " << report.string() << "\n";
    out << "interior residual sup: "
        << interior_sup(pr.grid, infinity_x_residual_field(res.u, pr.frame, pr.p)) << "\n";
    return exit_ok;
}

int run_residual(const Options& o, std::ostream& out) {
    const Problem pr = load(o);
    const ScalarField u = import_field(pr.grid, o.in);
    const ScalarField r = infinity_x_residual_field(u, pr.frame, pr.p);
    export_field(r, pr.grid, o.out);
    out << "infinity_x residual sup: " << interior_sup(pr.grid, r) << "\n";
    if (pr.epsilon != 0.0) {
        const bool min_form = jensen_form(pr.epsilon) == JensenForm::min_form;
        const ScalarField m = min_form ? min_form_residual(u, pr.frame, pr.p, pr.epsilon)
                                       : max_form_residual(u, pr.frame, pr.p, pr.epsilon);
        const auto path = sibling(o.out, min_form ? ".min.csv" : ".max.csv");
        export_field(m, pr.grid, path);
        out << (min_form ? "min" : "max") << "-form residual sup: " << interior_sup(pr.grid, m) << " (" << path.string()
            << ")\n";
    }
    return exit_ok;
}

NodeIndex parse_node(const std::string& s, const Grid2D& g) {
    std::istringstream in(s);
    NodeIndex n{};
    char comma = 0;
    if (!(in >> n.i >> comma >> n.j) || comma != ',' || !(in >> std::ws).eof())
        throw UsageError("--source expects i,j");
    if (n.i < 0 || n.j < 0 || n.i >= g.nx() || n.j >= g.ny()) throw UsageError("--source is outside the grid");
    return n;
}

int run_distance(const Options& o, std::ostream& out) {
    const Problem pr = load(o);
    const ScalarField d = riemannian_distance(pr.frame, parse_node(o.source, pr.grid));
    export_field(d, pr.grid, o.out);
    out << "max distance: " << d.maxCoeff() << "\n";
    return exit_ok;
}

int run_verify(const Options& o, std::ostream& out) {
    const auto suite = parse_suite(o.suite);
    if (!suite) throw UsageError("unknown suite " + o.suite);
    const Problem pr = load(o);
    const CheckReport r = run_suite(pr, *suite, o.seed);
    out << "suite: " << o.suite << "\n" << to_string(r);
    return r.pass ? exit_ok : exit_failure;
}

int run_report(const Options& o, std::ostream& out) {
    std::ifstream in(o.in);
    if (!in) throw std::runtime_error("cannot read " + o.in);
    std::stringstream buf;
    buf << in.rdbuf();
    out << format_report(report_from_json(buf.str()));
    return exit_ok;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variable-exponent infinity-Laplace solver and verification harness", "infx"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "Solve the configured Dirichlet or Jensen problem");
    solve->add_option("--config", o.config, "Problem file")->required()->check(CLI::ExistingFile);
    solve->add_option("--out", o.out, "Field CSV to write")->required();
    solve->add_option("--report", o.report, "Report JSON (default <out stem>.report.json)");
    solve->add_option("--epsilon", o.epsilon, "Override [jensen] epsilon");
    solve->add_option("--k-max", o.k_max, "Drop k schedule entries above this value");

    auto* residual = app.add_subcommand("residual", "Pointwise residual of a stored field");
    residual->add_option("--config", o.config, "Problem file")->required()->check(CLI::ExistingFile);
    residual->add_option("--in", o.in, "Field CSV to read")->required()->check(CLI::ExistingFile);
    residual->add_option("--out", o.out, "Residual CSV to write")->required();

    auto* distance = app.add_subcommand("distance", "Lattice distance field from a node");
    distance->add_option("--config", o.config, "Problem file")->required()->check(CLI::ExistingFile);
    distance->add_option("--source", o.source, "Source node i,j")->required();
    distance->add_option("--out", o.out, "Distance CSV to write")->required();

    auto* verify = app.add_subcommand("verify", "Run one verification suite");
    verify->add_option("--config", o.config, "Problem file")->required()->check(CLI::ExistingFile);
    verify->add_option("--suite", o.suite, "Suite name")
        ->required()
        ->check(CLI::IsMember({"comparison", "harnack", "lemma41", "uniqueness", "eikonal"}));
    verify->add_option("--seed", o.seed, "Random seed for probes");

    auto* report = app.add_subcommand("report", "Print a solve report");
    report->add_option("--in", o.in, "Report JSON")->required()->check(CLI::ExistingFile);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_usage;
    }

    try {
        if (solve->parsed()) return run_solve(o, out);
        if (residual->parsed()) return run_residual(o, out);
        if (distance->parsed()) return run_distance(o, out);
        if (verify->parsed()) return run_verify(o, out);
        return run_report(o, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << "\n";
        return exit_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
}

int cli_dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace infx
