#include "ermakov/quadrature.hpp"

#include "ermakov/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ermakov {

namespace {

constexpr int max_depth = 50;
constexpr int min_depth = 3;

struct Simpson {
    const Integrand& fn;

    double sample(double x) const {
        double v = 0.0;
        try {
            v = fn(x);
        } catch (const Error& e) {
            throw QuadratureError("integrand not defined at " + std::to_string(x) + ": " + e.what());
        }
        if (!std::isfinite(v)) throw QuadratureError("non-finite integrand sample at " + std::to_string(x));
        return v;
    }

    double refine(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = sample(lm);
        const double frm = sample(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        const bool converged = std::abs(delta) <= 15.0 * eps ||
                               std::abs(delta) <= 64.0 * std::numeric_limits<double>::epsilon() *
                                                      (std::abs(left) + std::abs(right));
        if (depth >= min_depth && converged) return left + right + delta / 15.0;
        if (depth >= max_depth)
            throw QuadratureError("adaptive Simpson did not converge on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]");
        return refine(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
               refine(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
    }
};

} // namespace

double quad(const Integrand& fn, double a, double b, double tol) {
    if (!(tol > 0.0)) throw QuadratureError("quad: tol must be > 0");
    if (!std::isfinite(a) || !std::isfinite(b)) throw QuadratureError("quad: non-finite limit");
    if (a == b) return 0.0;
    if (b < a) return -quad(fn, b, a, tol);
    const Simpson s{fn};
    const double fa = s.sample(a);
    const double fb = s.sample(b);
    const double m = 0.5 * (a + b);
    const double fm = s.sample(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return s.refine(a, b, fa, fm, fb, whole, tol * (1.0 + std::abs(whole)), 0);
}

double quad(const Func1& fn, double a, double b, double tol) {
    return quad([&fn](double x) { return fn(x); }, a, b, tol);
}

Antiderivative::Antiderivative(Integrand integrand, double ref, double tol, double spacing)
    : integrand_(std::move(integrand)), ref_(ref), tol_(tol), spacing_(spacing) {
    if (!(spacing_ > 0.0)) throw QuadratureError("Antiderivative: spacing must be > 0");
}

double Antiderivative::anchor(long long k) const {
    if (k == 0) return 0.0;
    if (const auto it = anchors_.find(k); it != anchors_.end()) return it->second;
    // Walk outward from the nearest cached anchor toward ref.
    const long long step = k > 0 ? 1 : -1;
    long long j = k - step;
    while (j != 0 && !anchors_.count(j)) j -= step;
    double acc = j == 0 ? 0.0 : anchors_.at(j);
    for (long long i = j + step; i != k + step; i += step) {
        const double a = ref_ + static_cast<double>(i - step) * spacing_;
        const double b = ref_ + static_cast<double>(i) * spacing_;
        acc += quad(integrand_, a, b, tol_);
        anchors_.emplace(i, acc);
    }
    return acc;
}

double Antiderivative::operator()(double x) const {
    const double offset = (x - ref_) / spacing_;
    if (!std::isfinite(offset)) throw QuadratureError("Antiderivative: non-finite argument");
    // Far away points are integrated directly rather than through thousands of anchors.
    if (std::abs(offset) > 4096.0) return quad(integrand_, ref_, x, tol_);
    const auto k = static_cast<long long>(std::trunc(offset));
    const double xk = ref_ + static_cast<double>(k) * spacing_;
    return anchor(k) + quad(integrand_, xk, x, tol_);
}

} // namespace ermakov
