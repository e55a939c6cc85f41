#pragma once

#include "ermakov/func1.hpp"

#include <functional>
#include <map>

namespace ermakov {

using Integrand = std::function<double(double)>;

/// Adaptive Simpson with recursive bisection. Target accuracy
/// |result - exact| <= tol (1 + |result|). quad(f, b, a) == -quad(f, a, b)
/// exactly. Throws QuadratureError on a non-finite sample or when the
/// recursion exceeds depth 50.
double quad(const Integrand& fn, double a, double b, double tol);
double quad(const Func1& fn, double a, double b, double tol);

/// x -> integral of `integrand` from `ref` to x.
///
/// Values at anchor points ref + k*spacing are cached, so evaluating along a
/// long trajectory only integrates short segments. Results do not depend on
/// evaluation order. The cache is not synchronized: one instance per worker.
class Antiderivative {
public:
    Antiderivative(Integrand integrand, double ref, double tol, double spacing = 1.0 / 64.0);

    double operator()(double x) const;
    double ref() const noexcept { return ref_; }

private:
    double anchor(long long k) const;

    Integrand integrand_;
    double ref_;
    double tol_;
    double spacing_;
    mutable std::map<long long, double> anchors_;
};

} // namespace ermakov
