#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "infx/problem.hpp"

namespace infx {

class ConfigError : public std::runtime_error {
public:
    enum class Kind { io, missing_key, parse_error, invalid_value, frame_singular, exponent_below_minimum };

    ConfigError(Kind kind, std::string key, const std::string& what)
        : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}

    Kind kind() const { return kind_; }
    /// "section.key" the error refers to, empty when not key-specific.
    const std::string& key() const { return key_; }

private:
    Kind kind_;
    std::string key_;
};

/// Reads an INI-style problem file:
///
///     [domain]    xmin xmax ymin ymax nx ny
///     [frame]     a11 a12 a21 a22          (optional, identity by default)
///     [exponent]  p
///     [boundary]  f  | cone = x0,y0
///     [jensen]    epsilon                  (optional, 0)
///     [solver]    k_schedule delta_reg damping picard_tol picard_max_iter
///                 cg_tol cg_max_iter continuation_tol method polish_sweeps
///                 polish_tol
///                 p_min det_floor         (all optional)
ProblemSpec read_problem_spec(const std::filesystem::path& path);
ProblemSpec parse_problem_spec(const std::string& text);

/// read_problem_spec followed by sample_problem, with sampling failures
/// reported as ConfigError.
Problem load_problem(const std::filesystem::path& path);
Problem load_problem_text(const std::string& text);
Problem load_problem(const ProblemSpec& spec);

}  // namespace infx
