#pragma once

#include "ermakov/expr.hpp"

#include <string>
#include <string_view>

namespace ermakov {

/// A scalar function of one variable together with its first two symbolic
/// derivatives. Immutable; copies share the underlying trees.
///
/// Functions built as a quotient by their own variable (F = V'(u)/u and
/// friends) carry a rule for the single point u = 0: either the analytic
/// limit, or a hard singularity. The rule only affects `value(0)`.
class Func1 {
public:
    enum class AtZero { regular, limit, singular };

    Func1();
    explicit Func1(Expr e);

    double value(double x) const;
    double derivative(double x) const { return d1_(x); }
    double second_derivative(double x) const { return d2_(x); }
    double operator()(double x) const { return value(x); }

    const Expr& expr() const noexcept { return expr_; }
    const Expr& d1() const noexcept { return d1_; }
    const Expr& d2() const noexcept { return d2_; }
    const std::string& var() const noexcept { return expr_.var(); }

    /// True when the function is the literal constant 0.
    bool is_zero() const noexcept { return expr_.is_zero(); }

    AtZero zero_rule() const noexcept { return zero_rule_; }
    Func1 with_zero_limit(double limit) const;
    Func1 with_zero_singular() const;

private:
    Expr expr_;
    Expr d1_;
    Expr d2_;
    AtZero zero_rule_ = AtZero::regular;
    double zero_limit_ = 0.0;
};

/// parse + two symbolic derivatives.
Func1 compile(std::string_view source, std::string_view var_name);

} // namespace ermakov
