#pragma once

// Scalar expressions of one variable: parsing, evaluation, printing and
// symbolic differentiation.
//
// Grammar:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' ['-'|'+'] number)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
// Functions: sin, cos, exp, ln, sqrt. The only other identifier accepted is
// the declared variable.

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ermakov {

enum class Op {
    constant,
    variable,
    neg,
    sin,
    cos,
    exp,
    ln,
    sqrt,
    add,
    sub,
    mul,
    div,
    pow,  // lhs ^ value, exponent is always a literal
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op = Op::constant;
    double value = 0.0;  // constant value, or the exponent for Op::pow
    NodePtr lhs;
    NodePtr rhs;
};

bool is_unary(Op op) noexcept;
bool is_binary(Op op) noexcept;

/// Immutable expression tree bound to a variable name.
class Expr {
public:
    Expr();
    Expr(NodePtr root, std::string var);

    static Expr constant(double c, std::string var);
    static Expr variable(std::string var);

    const Node& root() const noexcept { return *root_; }
    const NodePtr& node() const noexcept { return root_; }
    const std::string& var() const noexcept { return var_; }

    double operator()(double x) const;

    std::optional<double> constant_value() const noexcept;
    bool is_zero() const noexcept;

    /// Same tree, different variable name.
    Expr with_var(std::string var) const { return Expr(root_, std::move(var)); }

private:
    NodePtr root_;
    std::string var_;
};

Expr parse(std::string_view source, std::string_view var_name);

/// Throws DomainError naming the offending sub-expression.
double eval(const Expr& e, double x);

Expr differentiate(const Expr& e);

/// Constant folding plus a handful of algebraic identities. Never required
/// for correctness; used to keep derivative trees and printed output small.
Expr simplify(const Expr& e);

/// Minimal-parenthesis rendering that parses back to the same tree.
std::string to_string(const Expr& e);
std::string to_string(const Node& n, std::string_view var);

bool structurally_equal(const Node& a, const Node& b) noexcept;

// Tree builders. Both operands must use the same variable name.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);

namespace detail {
NodePtr make_constant(double c);
NodePtr make_variable();
NodePtr make_unary(Op op, NodePtr arg);
NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs);
NodePtr make_pow(NodePtr base, double exponent);
} // namespace detail

} // namespace ermakov
