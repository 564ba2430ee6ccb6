#include "infx/field_io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace infx {

namespace {

void put(std::ostream& out, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
}

double read_number(const std::string& s, std::size_t line) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    while (b < e && *b == ' ') ++b;
    auto [ptr, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || ptr == b) throw std::runtime_error("field csv: bad number on line " + std::to_string(line));
    return v;
}

const char* form_name(JensenForm f) {
    switch (f) {
    case JensenForm::min_form: return "min";
    case JensenForm::max_form: return "max";
    case JensenForm::plain: return "plain";
    }
    return "plain";
}

JensenForm form_from(const std::string& s) {
    if (s == "min") return JensenForm::min_form;
    if (s == "max") return JensenForm::max_form;
    return JensenForm::plain;
}

}  // namespace

void write_field_csv(std::ostream& out, const ScalarField& field, const Grid2D& grid) {
    if (field.size() != grid.size()) throw std::invalid_argument("field size does not match grid");
    out << "x,y,value\n";
    for (int j = 0; j < grid.ny(); ++j)
        for (int i = 0; i < grid.nx(); ++i) {
            put(out, grid.x(i));
            out << ',';
            put(out, grid.y(j));
            out << ',';
            put(out, field[grid.index(i, j)]);
            out << '\n';
        }
}

void export_field(const ScalarField& field, const Grid2D& grid, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_field_csv(out, field, grid);
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

ScalarField read_field_csv(std::istream& in, const Grid2D& grid) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("field csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "x,y,value") throw std::runtime_error("field csv: header must be 'x,y,value'");

    ScalarField out(grid.size());
    Eigen::Index row = 0;
    std::size_t lineno = 1;
    const double tol_x = 1e-9 * grid.hx(), tol_y = 1e-9 * grid.hy();
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= grid.size()) throw std::runtime_error("field csv: more rows than grid nodes");
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw std::runtime_error("field csv: expected 3 columns on line " + std::to_string(lineno));
        const double x = read_number(line.substr(0, c1), lineno);
        const double y = read_number(line.substr(c1 + 1, c2 - c1 - 1), lineno);
        const double v = read_number(line.substr(c2 + 1), lineno);
        const auto n = grid.node(row);
        if (std::abs(x - grid.x(n.i)) > tol_x || std::abs(y - grid.y(n.j)) > tol_y)
            throw std::runtime_error("field csv: coordinates on line " + std::to_string(lineno) +
                                     " do not match the grid");
        out[row++] = v;
    }
    if (row != grid.size())
        throw std::runtime_error("field csv: expected " + std::to_string(grid.size()) + " rows, got " +
                                 std::to_string(row));
    return out;
}

ScalarField import_field(const Grid2D& grid, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    return read_field_csv(in, grid);
}

std::string report_to_json(const SolveReport& r) {
    nlohmann::json j;
    j["form"] = form_name(r.form);
    j["epsilon"] = r.epsilon;
    j["stopped_early"] = r.stopped_early;
    j["wall_seconds"] = r.wall_seconds;
    j["gaps"] = r.gaps;
    auto steps = nlohmann::json::array();
    for (const auto& s : r.steps)
        steps.push_back({{"k", s.k},
                         {"iterations", s.iterations},
                         {"update_norm", s.update_norm},
                         {"weak_residual", s.weak_residual},
                         {"cg_iterations", s.cg_iterations}});
    j["steps"] = steps;
    j["polish"] = {{"accepted", r.polish_accepted},
                   {"iterations", r.polish_iterations},
                   {"residual_before", r.residual_before_polish},
                   {"residual_after", r.residual_after_polish}};
    return j.dump(2);
}

SolveReport report_from_json(const std::string& text) try {
    const auto j = nlohmann::json::parse(text);
    SolveReport r;
    r.form = form_from(j.value("form", "plain"));
    r.epsilon = j.value("epsilon", 0.0);
    r.stopped_early = j.value("stopped_early", false);
    r.wall_seconds = j.value("wall_seconds", 0.0);
    r.gaps = j.value("gaps", std::vector<double>{});
    for (const auto& s : j.value("steps", nlohmann::json::array()))
        r.steps.push_back({s.at("k").get<double>(), s.at("iterations").get<int>(), s.at("update_norm").get<double>(),
                           s.at("weak_residual").get<double>(), s.at("cg_iterations").get<long>()});
    if (j.contains("polish")) {
        const auto& p = j["polish"];
        r.polish_accepted = p.value("accepted", false);
        r.polish_iterations = p.value("iterations", 0);
        r.residual_before_polish = p.value("residual_before", 0.0);
        r.residual_after_polish = p.value("residual_after", 0.0);
    }
    return r;
} catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("not a solve report: ") + e.what());
}

std::string format_report(const SolveReport& r) {
    std::ostringstream os;
    os << "form: " << form_name(r.form) << "\n"
       << "epsilon: " << r.epsilon << "\n"
       << "wall_seconds: " << r.wall_seconds << "\n"
       << "stopped_early: " << (r.stopped_early ? "true" : "false") << "\n"
       << "steps:\n";
    for (const auto& s : r.steps)
        os << "  - k: " << s.k << "\n"
           << "    iterations: " << s.iterations << "\n"
           << "    update_norm: " << s.update_norm << "\n"
           << "    weak_residual: " << s.weak_residual << "\n"
           << "    cg_iterations: " << s.cg_iterations << "\n";
    os << "gaps:";
    for (double g : r.gaps) os << " " << g;
    os << "\n"
       << "polish:\n"
       << "  accepted: " << (r.polish_accepted ? "true" : "false") << "\n"
       << "  iterations: " << r.polish_iterations << "\n"
       << "  residual_before: " << r.residual_before_polish << "\n"
       << "  residual_after: " << r.residual_after_polish << "\n";
    return os.str();
}

}  // namespace infx
