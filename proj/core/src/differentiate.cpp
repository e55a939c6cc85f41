#include "ermakov/expr.hpp"

#include <cmath>

namespace ermakov {

namespace {

using detail::make_binary;
using detail::make_constant;
using detail::make_pow;
using detail::make_unary;

bool is_const(const NodePtr& n) { return n->op == Op::constant; }
bool is_const(const NodePtr& n, double v) { return n->op == Op::constant && n->value == v; }

// Folds only when the folded value is finite; otherwise the node is kept so
// evaluation still reports the domain error.
NodePtr fold_or(Op op, const NodePtr& a, const NodePtr& b, NodePtr fallback) {
    if (!is_const(a) || (b && !is_const(b))) return fallback;
    double r = 0.0;
    const double x = a->value;
    const double y = b ? b->value : 0.0;
    switch (op) {
    case Op::neg: r = -x; break;
    case Op::sin: r = std::sin(x); break;
    case Op::cos: r = std::cos(x); break;
    case Op::exp: r = std::exp(x); break;
    case Op::ln: if (!(x > 0.0)) return fallback; r = std::log(x); break;
    case Op::sqrt: if (x < 0.0) return fallback; r = std::sqrt(x); break;
    case Op::add: r = x + y; break;
    case Op::sub: r = x - y; break;
    case Op::mul: r = x * y; break;
    case Op::div: if (y == 0.0) return fallback; r = x / y; break;
    default: return fallback;
    }
    return std::isfinite(r) ? make_constant(r) : fallback;
}

NodePtr s_neg(const NodePtr& a) {
    if (is_const(a)) return make_constant(-a->value);
    if (a->op == Op::neg) return a->lhs;
    return make_unary(Op::neg, a);
}

NodePtr s_unary(Op op, const NodePtr& a) { return fold_or(op, a, nullptr, make_unary(op, a)); }

NodePtr s_add(const NodePtr& a, const NodePtr& b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (b->op == Op::neg) return fold_or(Op::sub, a, b->lhs, make_binary(Op::sub, a, b->lhs));
    return fold_or(Op::add, a, b, make_binary(Op::add, a, b));
}

NodePtr s_sub(const NodePtr& a, const NodePtr& b) {
    if (is_const(b, 0.0)) return a;
    if (is_const(a, 0.0)) return s_neg(b);
    if (structurally_equal(*a, *b)) return make_constant(0.0);
    return fold_or(Op::sub, a, b, make_binary(Op::sub, a, b));
}

NodePtr s_pow(const NodePtr& base, double n);

NodePtr s_mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (is_const(a, -1.0)) return s_neg(b);
    if (is_const(b, -1.0)) return s_neg(a);
    if (is_const(a) && is_const(b)) return fold_or(Op::mul, a, b, make_binary(Op::mul, a, b));
    if (is_const(b)) std::swap(a, b);  // constants lead
    if (is_const(a) && b->op == Op::mul && is_const(b->lhs))
        return s_mul(make_constant(a->value * b->lhs->value), b->rhs);
    if (a->op == Op::neg) return s_neg(s_mul(a->lhs, b));
    if (b->op == Op::neg) return s_neg(s_mul(a, b->lhs));
    if (structurally_equal(*a, *b)) return s_pow(a, 2.0);
    // X*X^n, X^n*X, X^a*X^b
    if (b->op == Op::pow && structurally_equal(*a, *b->lhs)) return s_pow(a, b->value + 1.0);
    if (a->op == Op::pow && structurally_equal(*b, *a->lhs)) return s_pow(b, a->value + 1.0);
    if (a->op == Op::pow && b->op == Op::pow && structurally_equal(*a->lhs, *b->lhs))
        return s_pow(a->lhs, a->value + b->value);
    // X*(Y/X) -> Y
    if (b->op == Op::div && structurally_equal(*a, *b->rhs)) return b->lhs;
    if (a->op == Op::div && structurally_equal(*b, *a->rhs)) return a->lhs;
    return make_binary(Op::mul, a, b);
}

NodePtr s_div(const NodePtr& a, const NodePtr& b) {
    if (is_const(b, 1.0)) return a;
    if (is_const(a, 0.0) && !is_const(b, 0.0)) return make_constant(0.0);
    if (is_const(a) && is_const(b)) return fold_or(Op::div, a, b, make_binary(Op::div, a, b));
    if (structurally_equal(*a, *b)) return make_constant(1.0);
    // (c*X)/X -> c, (c*X)/d -> (c/d)*X, X^n/X -> X^(n-1)
    if (a->op == Op::mul && is_const(a->lhs)) {
        if (structurally_equal(*a->rhs, *b)) return a->lhs;
        if (is_const(b) && b->value != 0.0) return s_mul(make_constant(a->lhs->value / b->value), a->rhs);
    }
    if (a->op == Op::pow && structurally_equal(*a->lhs, *b)) return s_pow(b, a->value - 1.0);
    if (a->op == Op::mul && is_const(a->lhs) && a->rhs->op == Op::pow &&
        structurally_equal(*a->rhs->lhs, *b))
        return s_mul(a->lhs, s_pow(b, a->rhs->value - 1.0));
    // (X+Y)/Z term by term, kept only when every term cancels
    if ((a->op == Op::add || a->op == Op::sub) && !is_const(b)) {
        const NodePtr l = s_div(a->lhs, b);
        const NodePtr r = s_div(a->rhs, b);
        if (l->op != Op::div && r->op != Op::div) return a->op == Op::add ? s_add(l, r) : s_sub(l, r);
    }
    return make_binary(Op::div, a, b);
}

NodePtr s_pow(const NodePtr& base, double n) {
    if (n == 1.0) return base;
    if (n == 0.0) return make_constant(1.0);
    if (is_const(base)) {
        const double r = std::pow(base->value, n);
        if (std::isfinite(r) && !(base->value == 0.0 && n < 0.0)) return make_constant(r);
    }
    if (base->op == Op::pow && std::trunc(n) == n && std::trunc(base->value) == base->value)
        return s_pow(base->lhs, base->value * n);
    return make_pow(base, n);
}

NodePtr d(const NodePtr& n) {
    switch (n->op) {
    case Op::constant:
        return make_constant(0.0);
    case Op::variable:
        return make_constant(1.0);
    case Op::neg:
        return s_neg(d(n->lhs));
    case Op::sin:
        return s_mul(s_unary(Op::cos, n->lhs), d(n->lhs));
    case Op::cos:
        return s_neg(s_mul(s_unary(Op::sin, n->lhs), d(n->lhs)));
    case Op::exp:
        return s_mul(n, d(n->lhs));
    case Op::ln:
        return s_div(d(n->lhs), n->lhs);
    case Op::sqrt:
        return s_div(d(n->lhs), s_mul(make_constant(2.0), n));
    case Op::add:
        return s_add(d(n->lhs), d(n->rhs));
    case Op::sub:
        return s_sub(d(n->lhs), d(n->rhs));
    case Op::mul:
        return s_add(s_mul(d(n->lhs), n->rhs), s_mul(n->lhs, d(n->rhs)));
    case Op::div: {
        const NodePtr da = d(n->lhs);
        const NodePtr db = d(n->rhs);
        if (is_const(db, 0.0)) return s_div(da, n->rhs);
        return s_div(s_sub(s_mul(da, n->rhs), s_mul(n->lhs, db)), s_pow(n->rhs, 2.0));
    }
    case Op::pow:
        if (n->value == 0.0) return make_constant(0.0);
        return s_mul(s_mul(make_constant(n->value), s_pow(n->lhs, n->value - 1.0)), d(n->lhs));
    }
    return make_constant(0.0);
}

NodePtr simp(const NodePtr& n) {
    switch (n->op) {
    case Op::constant:
    case Op::variable:
        return n;
    case Op::neg:
        return s_neg(simp(n->lhs));
    case Op::sin:
    case Op::cos:
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
        return s_unary(n->op, simp(n->lhs));
    case Op::add:
        return s_add(simp(n->lhs), simp(n->rhs));
    case Op::sub:
        return s_sub(simp(n->lhs), simp(n->rhs));
    case Op::mul:
        return s_mul(simp(n->lhs), simp(n->rhs));
    case Op::div:
        return s_div(simp(n->lhs), simp(n->rhs));
    case Op::pow:
        return s_pow(simp(n->lhs), n->value);
    }
    return n;
}

} // namespace

Expr differentiate(const Expr& e) { return {d(e.node()), e.var()}; }

Expr simplify(const Expr& e) { return {simp(e.node()), e.var()}; }

} // namespace ermakov
