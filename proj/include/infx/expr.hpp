#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace infx {

/// Malformed expression text. `offset` is the byte position of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the domain of an operation (log of nonpositive, division by zero, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {
struct Node;
}

/// Immutable arithmetic expression in the variables x and y.
///
/// Grammar (loosest to tightest): `+ -`, `* /`, unary `-`, `^` (right associative).
/// Functions: sin cos exp log sqrt abs (one argument), min max (two). Constants pi, e.
/// Copies share the tree; evaluation is reentrant.
class Expr {
public:
    Expr() = default;

    static Expr parse(std::string_view text);
    static Expr constant(double value);

    double operator()(double x, double y) const;

    /// Fully parenthesized form; parses back to an equivalent tree.
    std::string to_string() const;

    bool empty() const { return !root_; }

    // building blocks for generators and tests
    static Expr variable(char name);
    static Expr binary(char op, const Expr& lhs, const Expr& rhs);
    static Expr negate(const Expr& arg);
    static Expr call(std::string_view fn, const Expr& arg);
    static Expr call(std::string_view fn, const Expr& lhs, const Expr& rhs);

private:
    explicit Expr(std::shared_ptr<const detail::Node> root) : root_(std::move(root)) {}
    std::shared_ptr<const detail::Node> root_;
};

inline Expr parse(std::string_view text) { return Expr::parse(text); }
inline double eval(const Expr& e, double x, double y) { return e(x, y); }

}  // namespace infx
