#include "ermakov/func1.hpp"

#include "ermakov/errors.hpp"

namespace ermakov {

Func1::Func1() : Func1(Expr()) {}

Func1::Func1(Expr e) : expr_(std::move(e)), d1_(differentiate(expr_)), d2_(differentiate(d1_)) {}

double Func1::value(double x) const {
    if (x == 0.0) {
        if (zero_rule_ == AtZero::limit) return zero_limit_;
        if (zero_rule_ == AtZero::singular)
            throw SingularityError("'" + to_string(expr_) + "' is singular at " + var() + " = 0");
    }
    return expr_(x);
}

Func1 Func1::with_zero_limit(double limit) const {
    Func1 out = *this;
    out.zero_rule_ = AtZero::limit;
    out.zero_limit_ = limit;
    return out;
}

Func1 Func1::with_zero_singular() const {
    Func1 out = *this;
    out.zero_rule_ = AtZero::singular;
    return out;
}

Func1 compile(std::string_view source, std::string_view var_name) { return Func1(parse(source, var_name)); }

} // namespace ermakov
