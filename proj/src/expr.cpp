#include "infx/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>
#include <iomanip>
#include <vector>

namespace infx {

namespace detail {

enum class Kind { number, variable, negate, binary, call };

struct Node {
    Kind kind{};
    double value{0.0};        // number
    char symbol{0};           // variable name or binary operator
    std::string name;         // function name
    std::vector<std::shared_ptr<const Node>> args;
    std::size_t offset{0};    // position in source text, for messages
};

}  // namespace detail

namespace {

using detail::Kind;
using detail::Node;
using NodePtr = std::shared_ptr<const Node>;

bool is_unary_fn(std::string_view s) {
    return s == "sin" || s == "cos" || s == "exp" || s == "log" || s == "sqrt" || s == "abs";
}
bool is_binary_fn(std::string_view s) { return s == "min" || s == "max"; }

NodePtr make_number(double v, std::size_t off = 0) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::number;
    n->value = v;
    n->offset = off;
    return n;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr run() {
        skip_ws();
        if (pos_ == text_.size()) throw ParseError("empty expression", pos_);
        auto root = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
        return root;
    }

private:
    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr binary(char op, NodePtr lhs, NodePtr rhs, std::size_t off) {
        auto n = std::make_shared<Node>();
        n->kind = Kind::binary;
        n->symbol = op;
        n->args = {std::move(lhs), std::move(rhs)};
        n->offset = off;
        return n;
    }

    NodePtr parse_sum() {
        auto lhs = parse_product();
        for (;;) {
            skip_ws();
            std::size_t off = pos_;
            if (accept('+')) lhs = binary('+', lhs, parse_product(), off);
            else if (accept('-')) lhs = binary('-', lhs, parse_product(), off);
            else return lhs;
        }
    }

    NodePtr parse_product() {
        auto lhs = parse_unary();
        for (;;) {
            skip_ws();
            std::size_t off = pos_;
            if (accept('*')) lhs = binary('*', lhs, parse_unary(), off);
            else if (accept('/')) lhs = binary('/', lhs, parse_unary(), off);
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        skip_ws();
        std::size_t off = pos_;
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Kind::negate;
            n->args = {parse_unary()};
            n->offset = off;
            return n;
        }
        if (accept('+')) return parse_unary();
        return parse_power();
    }

    NodePtr parse_power() {
        auto base = parse_primary();
        skip_ws();
        std::size_t off = pos_;
        if (accept('^')) return binary('^', base, parse_unary(), off);
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
        const std::size_t off = pos_;
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto inner = parse_sum();
            expect(')');
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos_;
            while (end < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
                ++end;
            std::string ident(text_.substr(pos_, end - pos_));
            pos_ = end;
            if (ident == "x" || ident == "y") {
                auto n = std::make_shared<Node>();
                n->kind = Kind::variable;
                n->symbol = ident[0];
                n->offset = off;
                return n;
            }
            if (ident == "pi") return make_number(std::numbers::pi, off);
            if (ident == "e") return make_number(std::numbers::e, off);
            if (is_unary_fn(ident) || is_binary_fn(ident)) {
                auto n = std::make_shared<Node>();
                n->kind = Kind::call;
                n->name = ident;
                n->offset = off;
                expect('(');
                n->args.push_back(parse_sum());
                if (is_binary_fn(ident)) {
                    expect(',');
                    n->args.push_back(parse_sum());
                }
                expect(')');
                return n;
            }
            throw ParseError("unknown identifier '" + ident + "'", off);
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", off);
    }

    NodePtr parse_number() {
        const std::size_t off = pos_;
        std::size_t end = pos_;
        auto digits = [&] {
            while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
        };
        digits();
        if (end < text_.size() && text_[end] == '.') {
            ++end;
            digits();
        }
        if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
            std::size_t save = end;
            ++end;
            if (end < text_.size() && (text_[end] == '+' || text_[end] == '-')) ++end;
            if (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) digits();
            else end = save;  // "2e" is 2 followed by the constant e, which is an error later
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
        if (ec != std::errc() || ptr != text_.data() + end) throw ParseError("malformed number", off);
        pos_ = end;
        return make_number(v, off);
    }

    std::string_view text_;
    std::size_t pos_{0};
};

[[noreturn]] void domain_fail(const Node& n, const std::string& what) {
    throw DomainError(what + " (node at offset " + std::to_string(n.offset) + ")");
}

double checked(const Node& n, double v, const char* label) {
    if (!std::isfinite(v)) domain_fail(n, std::string("non-finite result in ") + label);
    return v;
}

double evaluate(const Node& n, double x, double y) {
    switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::variable: return n.symbol == 'x' ? x : y;
    case Kind::negate: return -evaluate(*n.args[0], x, y);
    case Kind::binary: {
        const double a = evaluate(*n.args[0], x, y);
        const double b = evaluate(*n.args[1], x, y);
        switch (n.symbol) {
        case '+': return checked(n, a + b, "'+'");
        case '-': return checked(n, a - b, "'-'");
        case '*': return checked(n, a * b, "'*'");
        case '/':
            if (b == 0.0) domain_fail(n, "division by zero");
            return checked(n, a / b, "'/'");
        default: return checked(n, std::pow(a, b), "'^'");
        }
    }
    case Kind::call: {
        const double a = evaluate(*n.args[0], x, y);
        const std::string& f = n.name;
        if (f == "min") return std::min(a, evaluate(*n.args[1], x, y));
        if (f == "max") return std::max(a, evaluate(*n.args[1], x, y));
        if (f == "sin") return std::sin(a);
        if (f == "cos") return std::cos(a);
        if (f == "abs") return std::abs(a);
        if (f == "exp") return checked(n, std::exp(a), "exp");
        if (f == "log") {
            if (!(a > 0.0)) domain_fail(n, "log of nonpositive value");
            return std::log(a);
        }
        if (!(a >= 0.0)) domain_fail(n, "sqrt of negative value");
        return std::sqrt(a);
    }
    }
    return 0.0;
}

void print(const Node& n, std::ostringstream& os) {
    switch (n.kind) {
    case Kind::number:
        if (n.value < 0) os << '(' << n.value << ')';
        else os << n.value;
        return;
    case Kind::variable: os << n.symbol; return;
    case Kind::negate:
        os << "(-";
        print(*n.args[0], os);
        os << ')';
        return;
    case Kind::binary:
        os << '(';
        print(*n.args[0], os);
        os << n.symbol;
        print(*n.args[1], os);
        os << ')';
        return;
    case Kind::call:
        os << n.name << '(';
        print(*n.args[0], os);
        if (n.args.size() == 2) {
            os << ',';
            print(*n.args[1], os);
        }
        os << ')';
        return;
    }
}

}  // namespace

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).run()); }

Expr Expr::constant(double value) { return Expr(make_number(value)); }

Expr Expr::variable(char name) {
    if (name != 'x' && name != 'y') throw std::invalid_argument("variable must be x or y");
    auto n = std::make_shared<Node>();
    n->kind = Kind::variable;
    n->symbol = name;
    return Expr(std::move(n));
}

Expr Expr::binary(char op, const Expr& lhs, const Expr& rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::binary;
    n->symbol = op;
    n->args = {lhs.root_, rhs.root_};
    return Expr(std::move(n));
}

Expr Expr::negate(const Expr& arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::negate;
    n->args = {arg.root_};
    return Expr(std::move(n));
}

Expr Expr::call(std::string_view fn, const Expr& arg) {
    if (!is_unary_fn(fn)) throw std::invalid_argument("not a one-argument function: " + std::string(fn));
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->name = std::string(fn);
    n->args = {arg.root_};
    return Expr(std::move(n));
}

Expr Expr::call(std::string_view fn, const Expr& lhs, const Expr& rhs) {
    if (!is_binary_fn(fn)) throw std::invalid_argument("not a two-argument function: " + std::string(fn));
    auto n = std::make_shared<Node>();
    n->kind = Kind::call;
    n->name = std::string(fn);
    n->args = {lhs.root_, rhs.root_};
    return Expr(std::move(n));
}

double Expr::operator()(double x, double y) const {
    if (!root_) throw std::logic_error("evaluating an empty expression");
    return evaluate(*root_, x, y);
}

std::string Expr::to_string() const {
    if (!root_) return {};
    std::ostringstream os;
    os << std::setprecision(17);
    print(*root_, os);
    return os.str();
}

}  // namespace infx
