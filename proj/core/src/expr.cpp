#include "ermakov/expr.hpp"

#include "ermakov/errors.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace ermakov {

namespace detail {

NodePtr make_constant(double c) {
    auto n = std::make_shared<Node>();
    n->op = Op::constant;
    n->value = c;
    return n;
}

NodePtr make_variable() {
    auto n = std::make_shared<Node>();
    n->op = Op::variable;
    return n;
}

NodePtr make_unary(Op op, NodePtr arg) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(arg);
    return n;
}

NodePtr make_binary(Op op, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_pow(NodePtr base, double exponent) {
    auto n = std::make_shared<Node>();
    n->op = Op::pow;
    n->value = exponent;
    n->lhs = std::move(base);
    return n;
}

} // namespace detail

bool is_unary(Op op) noexcept {
    switch (op) {
    case Op::neg:
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
        return true;
    default:
        return false;
    }
}

bool is_binary(Op op) noexcept {
    switch (op) {
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
        return true;
    default:
        return false;
    }
}

Expr::Expr() : root_(detail::make_constant(0.0)), var_("x") {}

Expr::Expr(NodePtr root, std::string var) : root_(std::move(root)), var_(std::move(var)) {
    if (!root_) throw std::invalid_argument("Expr: null root");
}

Expr Expr::constant(double c, std::string var) { return {detail::make_constant(c), std::move(var)}; }

Expr Expr::variable(std::string var) { return {detail::make_variable(), std::move(var)}; }

double Expr::operator()(double x) const { return eval(*this, x); }

std::optional<double> Expr::constant_value() const noexcept {
    if (root_->op == Op::constant) return root_->value;
    return std::nullopt;
}

bool Expr::is_zero() const noexcept { return root_->op == Op::constant && root_->value == 0.0; }

namespace {

[[noreturn]] void domain_fail(const char* what, const Node& n, std::string_view var) {
    throw DomainError(std::string(what) + " in '" + to_string(n, var) + "'");
}

double eval_node(const Node& n, double x, std::string_view var) {
    double r = 0.0;
    switch (n.op) {
    case Op::constant:
        return n.value;
    case Op::variable:
        return x;
    case Op::neg:
        return -eval_node(*n.lhs, x, var);
    case Op::sin:
        r = std::sin(eval_node(*n.lhs, x, var));
        break;
    case Op::cos:
        r = std::cos(eval_node(*n.lhs, x, var));
        break;
    case Op::exp:
        r = std::exp(eval_node(*n.lhs, x, var));
        break;
    case Op::ln: {
        const double a = eval_node(*n.lhs, x, var);
        if (!(a > 0.0)) domain_fail("ln of non-positive argument", n, var);
        r = std::log(a);
        break;
    }
    case Op::sqrt: {
        const double a = eval_node(*n.lhs, x, var);
        if (a < 0.0) domain_fail("sqrt of negative argument", n, var);
        r = std::sqrt(a);
        break;
    }
    case Op::add:
        r = eval_node(*n.lhs, x, var) + eval_node(*n.rhs, x, var);
        break;
    case Op::sub:
        r = eval_node(*n.lhs, x, var) - eval_node(*n.rhs, x, var);
        break;
    case Op::mul:
        r = eval_node(*n.lhs, x, var) * eval_node(*n.rhs, x, var);
        break;
    case Op::div: {
        const double num = eval_node(*n.lhs, x, var);
        const double den = eval_node(*n.rhs, x, var);
        if (den == 0.0) domain_fail("division by zero", n, var);
        r = num / den;
        break;
    }
    case Op::pow: {
        const double b = eval_node(*n.lhs, x, var);
        if (b == 0.0 && n.value < 0.0) domain_fail("zero raised to a negative power", n, var);
        r = std::pow(b, n.value);
        if (std::isnan(r)) domain_fail("negative base with non-integer exponent", n, var);
        break;
    }
    }
    if (!std::isfinite(r)) domain_fail("non-finite result", n, var);
    return r;
}

// Printing precedence: higher binds tighter.
int precedence(const Node& n) {
    switch (n.op) {
    case Op::add:
    case Op::sub:
        return 1;
    case Op::mul:
    case Op::div:
        return 2;
    case Op::neg:
        return 3;
    case Op::pow:
        return 4;
    case Op::constant:
        return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    default:
        return 5;
    }
}

void append_number(std::string& out, double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
}

const char* function_name(Op op) {
    switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::exp: return "exp";
    case Op::ln: return "ln";
    case Op::sqrt: return "sqrt";
    default: return "?";
    }
}

char binary_symbol(Op op) {
    switch (op) {
    case Op::add: return '+';
    case Op::sub: return '-';
    case Op::mul: return '*';
    default: return '/';
    }
}

void print(std::string& out, const Node& n, std::string_view var);

void print_wrapped(std::string& out, const Node& n, std::string_view var, bool parens) {
    if (parens) out.push_back('(');
    print(out, n, var);
    if (parens) out.push_back(')');
}

void print(std::string& out, const Node& n, std::string_view var) {
    switch (n.op) {
    case Op::constant:
        append_number(out, n.value);
        return;
    case Op::variable:
        out.append(var);
        return;
    case Op::neg:
        out.push_back('-');
        print_wrapped(out, *n.lhs, var, precedence(*n.lhs) < 3);
        return;
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
        out.append(function_name(n.op));
        print_wrapped(out, *n.lhs, var, true);
        return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div: {
        const int p = precedence(n);
        print_wrapped(out, *n.lhs, var, precedence(*n.lhs) < p);
        out.push_back(binary_symbol(n.op));
        print_wrapped(out, *n.rhs, var, precedence(*n.rhs) <= p);
        return;
    }
    case Op::pow:
        print_wrapped(out, *n.lhs, var, precedence(*n.lhs) < 5);
        out.push_back('^');
        append_number(out, n.value);
        return;
    }
}

Expr combine(Op op, const Expr& a, const Expr& b) {
    if (a.var() != b.var())
        throw std::invalid_argument("cannot combine expressions in '" + a.var() + "' and '" + b.var() + "'");
    return {detail::make_binary(op, a.node(), b.node()), a.var()};
}

} // namespace

double eval(const Expr& e, double x) { return eval_node(e.root(), x, e.var()); }

std::string to_string(const Node& n, std::string_view var) {
    std::string out;
    print(out, n, var);
    return out;
}

std::string to_string(const Expr& e) { return to_string(e.root(), e.var()); }

bool structurally_equal(const Node& a, const Node& b) noexcept {
    if (&a == &b) return true;
    if (a.op != b.op) return false;
    if ((a.op == Op::constant || a.op == Op::pow) && a.value != b.value) return false;
    if (a.lhs && !structurally_equal(*a.lhs, *b.lhs)) return false;
    if (a.rhs && !structurally_equal(*a.rhs, *b.rhs)) return false;
    return true;
}

Expr operator+(const Expr& a, const Expr& b) { return combine(Op::add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return combine(Op::sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return combine(Op::mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return combine(Op::div, a, b); }

} // namespace ermakov
