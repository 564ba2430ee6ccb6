#include "infx/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace infx {

namespace {

namespace pt = boost::property_tree;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_quotes(std::string s) {
    s = trim(s);
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        s = s.substr(1, s.size() - 2);
    return s;
}

class Reader {
public:
    explicit Reader(const pt::ptree& tree) : tree_(tree) {}

    bool has(const std::string& key) const { return bool(tree_.get_optional<std::string>(key)); }

    std::string text(const std::string& key) const {
        auto v = tree_.get_optional<std::string>(key);
        if (!v) throw ConfigError(ConfigError::Kind::missing_key, key, "missing key " + key);
        return strip_quotes(*v);
    }

    double number(const std::string& key) const {
        const std::string s = text(key);
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (trim(s.substr(used)).empty()) return v;
        } catch (const std::exception&) {
        }
        throw ConfigError(ConfigError::Kind::parse_error, key, key + ": not a number: '" + s + "'");
    }

    double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 1e9)
            throw ConfigError(ConfigError::Kind::parse_error, key, key + ": not an integer");
        return int(v);
    }

    int integer(const std::string& key, int fallback) const { return has(key) ? integer(key) : fallback; }

    Expr expr(const std::string& key) const {
        const std::string s = text(key);
        try {
            return Expr::parse(s);
        } catch (const ParseError& e) {
            throw ConfigError(ConfigError::Kind::parse_error, key, key + ": " + e.what());
        }
    }

    std::vector<double> list(const std::string& key) const {
        std::vector<double> out;
        std::stringstream ss(text(key));
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                std::size_t used = 0;
                out.push_back(std::stod(trim(item), &used));
                if (used != trim(item).size()) throw std::invalid_argument(item);
            } catch (const std::exception&) {
                throw ConfigError(ConfigError::Kind::parse_error, key, key + ": bad list entry '" + item + "'");
            }
        }
        return out;
    }

private:
    const pt::ptree& tree_;
};

ProblemSpec from_tree(const pt::ptree& tree) {
    const Reader r(tree);
    ProblemSpec s;
    s.grid.xmin = r.number("domain.xmin");
    s.grid.xmax = r.number("domain.xmax");
    s.grid.ymin = r.number("domain.ymin");
    s.grid.ymax = r.number("domain.ymax");
    s.grid.nx = r.integer("domain.nx");
    s.grid.ny = r.integer("domain.ny");
    if (s.grid.nx < 3 || s.grid.ny < 3)
        throw ConfigError(ConfigError::Kind::invalid_value, "domain.nx", "domain needs nx, ny >= 3");
    if (!(s.grid.xmax > s.grid.xmin) || !(s.grid.ymax > s.grid.ymin))
        throw ConfigError(ConfigError::Kind::invalid_value, "domain.xmax", "domain extent must be positive");

    if (r.has("frame.a11") || r.has("frame.a12") || r.has("frame.a21") || r.has("frame.a22"))
        s.frame = {r.expr("frame.a11"), r.expr("frame.a12"), r.expr("frame.a21"), r.expr("frame.a22")};

    s.p = r.expr("exponent.p");

    if (r.has("boundary.cone")) {
        const auto v = r.list("boundary.cone");
        if (v.size() != 2)
            throw ConfigError(ConfigError::Kind::parse_error, "boundary.cone", "boundary.cone needs two coordinates");
        s.cone_vertex = Eigen::Vector2d(v[0], v[1]);
    } else {
        s.f = r.expr("boundary.f");
    }

    s.epsilon = r.number("jensen.epsilon", 0.0);

    SolverConfig& c = s.solver;
    if (r.has("solver.k_schedule")) c.k_schedule = r.list("solver.k_schedule");
    c.delta_reg = r.number("solver.delta_reg", c.delta_reg);
    c.damping = r.number("solver.damping", c.damping);
    c.picard_tol = r.number("solver.picard_tol", c.picard_tol);
    c.picard_max_iter = r.integer("solver.picard_max_iter", c.picard_max_iter);
    c.cg_tol = r.number("solver.cg_tol", c.cg_tol);
    c.cg_max_iter = r.integer("solver.cg_max_iter", c.cg_max_iter);
    c.continuation_tol = r.number("solver.continuation_tol", c.continuation_tol);
    c.polish_sweeps = r.integer("solver.polish_sweeps", c.polish_sweeps);
    c.polish_tol = r.number("solver.polish_tol", c.polish_tol);
    if (r.has("solver.method")) {
        const std::string m = r.text("solver.method");
        if (m == "newton") c.method = PkMethod::newton;
        else if (m == "picard") c.method = PkMethod::picard;
        else throw ConfigError(ConfigError::Kind::invalid_value, "solver.method", "solver.method must be newton or picard");
    }
    s.p_min = r.number("solver.p_min", s.p_min);
    s.det_floor = r.number("solver.det_floor", s.det_floor);
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ConfigError::Kind::invalid_value, "solver", std::string("solver: ") + e.what());
    }
    return s;
}

pt::ptree parse_ini(std::istream& in, const std::string& name) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(ConfigError::Kind::parse_error, "", name + ": " + e.what());
    }
    return tree;
}

Problem sample_checked(const ProblemSpec& spec) {
    try {
        return sample_problem(spec);
    } catch (const FrameSingular& e) {
        throw ConfigError(ConfigError::Kind::frame_singular, "frame", e.what());
    } catch (const ExponentError& e) {
        throw ConfigError(ConfigError::Kind::exponent_below_minimum, "exponent.p", e.what());
    } catch (const DomainError& e) {
        throw ConfigError(ConfigError::Kind::invalid_value, "", std::string("expression domain error: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(ConfigError::Kind::invalid_value, "", e.what());
    }
}

}  // namespace

ProblemSpec parse_problem_spec(const std::string& text) {
    std::istringstream in(text);
    return from_tree(parse_ini(in, "<text>"));
}

ProblemSpec read_problem_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(ConfigError::Kind::io, "", "cannot read " + path.string());
    return from_tree(parse_ini(in, path.string()));
}

Problem load_problem(const std::filesystem::path& path) { return sample_checked(read_problem_spec(path)); }

Problem load_problem_text(const std::string& text) { return sample_checked(parse_problem_spec(text)); }

Problem load_problem(const ProblemSpec& spec) { return sample_checked(spec); }

}  // namespace infx
