#pragma once

// Generic steppers over fixed-size state vectors:
//   - classical fixed-step Runge-Kutta 4
//   - Dormand-Prince 5(4) with FSAL and PI step control
//   - Stormer-Verlet (kick-drift-kick) for Q'' = a(Q)
//
// Samples are produced exactly at the requested output times: the adaptive
// stepper shortens the step that would cross an output time, so no
// interpolation error enters the samples. Errors thrown by the right-hand
// side stop the integration and are reported through Solution::status; the
// samples gathered so far are kept.

#include "ermakov/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ermakov::ode {

template <std::size_t N>
using Vec = std::array<double, N>;

enum class Status { ok, singularity, step_underflow, domain_error };

inline std::string_view to_string(Status s) noexcept {
    switch (s) {
    case Status::ok: return "ok";
    case Status::singularity: return "singularity";
    case Status::step_underflow: return "step_underflow";
    case Status::domain_error: return "domain_error";
    }
    return "?";
}

template <std::size_t N>
struct Solution {
    std::vector<double> t;
    std::vector<Vec<N>> y;
    Status status = Status::ok;
    std::string message;
    std::size_t steps = 0;
    std::size_t rejected = 0;

    bool ok() const noexcept { return status == Status::ok; }
};

/// t0, t0 + stride, ..., t_end in the direction of t_end. The last point is
/// always t_end exactly; a grid point within 1e-9 stride of t_end is merged.
std::vector<double> output_grid(double t0, double t_end, double stride);

/// Number of steps of size dt spanning `stride`; ConfigError unless dt divides it.
std::size_t substeps(double stride, double dt);

struct AdaptiveOptions {
    double tol = 1e-10;  // atol = rtol = tol
    double safety = 0.9;
    double min_factor = 0.2;
    double max_factor = 5.0;
    double min_step = 1e-14;
    std::size_t max_steps = 50'000'000;
};

namespace detail {

// Runs `step` and converts library errors into a status. Returns true on success.
template <std::size_t N, class F>
bool guarded(Solution<N>& sol, F&& step) {
    try {
        step();
        return true;
    } catch (const SingularityError& e) {
        sol.status = Status::singularity;
        sol.message = e.what();
    } catch (const Error& e) {
        sol.status = Status::domain_error;
        sol.message = e.what();
    }
    return false;
}

template <std::size_t N>
bool all_finite(const Vec<N>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

template <std::size_t N>
Vec<N> axpy(const Vec<N>& y, double h, const Vec<N>& k) {
    Vec<N> out;
    for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
    return out;
}

} // namespace detail

template <std::size_t N, class Rhs>
Solution<N> rk4(Rhs&& rhs, double t0, const Vec<N>& y0, double dt, double t_end, double stride) {
    if (!(dt > 0.0)) throw ConfigError("rk4: dt must be > 0");
    if (!(stride > 0.0)) throw ConfigError("rk4: output stride must be > 0");
    const std::size_t per_stride = substeps(stride, dt);
    const std::vector<double> grid = output_grid(t0, t_end, stride);
    const double dir = t_end >= t0 ? 1.0 : -1.0;

    Solution<N> sol;
    sol.t.push_back(t0);
    sol.y.push_back(y0);
    Vec<N> y = y0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double ta = grid[k - 1];
        const double tb = grid[k];
        const double span = std::abs(tb - ta);
        std::size_t n = per_stride;
        if (std::abs(span - stride) > 1e-9 * stride)
            n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-9)));
        for (std::size_t j = 0; j < n; ++j) {
            const double t = ta + dir * static_cast<double>(j) * dt;
            const double h = j + 1 == n ? tb - t : dir * dt;
            Vec<N> next;
            const bool ok = detail::guarded(sol, [&] {
                const Vec<N> k1 = rhs(t, y);
                const Vec<N> k2 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
                const Vec<N> k3 = rhs(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
                const Vec<N> k4 = rhs(t + h, detail::axpy(y, h, k3));
                for (std::size_t i = 0; i < N; ++i) next[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            });
            if (!ok) return sol;
            if (!detail::all_finite(next)) {
                sol.status = Status::domain_error;
                sol.message = "non-finite state after step at t = " + std::to_string(t);
                return sol;
            }
            y = next;
            ++sol.steps;
        }
        sol.t.push_back(tb);
        sol.y.push_back(y);
    }
    return sol;
}

/// Dormand-Prince 5(4). `outputs` must be strictly monotone away from t0.
template <std::size_t N, class Rhs>
Solution<N> dopri54(Rhs&& rhs, double t0, const Vec<N>& y0, std::span<const double> outputs,
                    const AdaptiveOptions& opt) {
    if (!(opt.tol > 0.0)) throw ConfigError("adaptive54: tol must be > 0");

    // Butcher tableau of the 7-stage pair; the last stage is the FSAL stage.
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    // b(5th order) - b(4th order)
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double atol = opt.tol;
    const double rtol = opt.tol;
    auto scaled_rms = [&](const Vec<N>& v, const Vec<N>& ya, const Vec<N>& yb) {
        double acc = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double sc = atol + rtol * std::max(std::abs(ya[i]), std::abs(yb[i]));
            acc += (v[i] / sc) * (v[i] / sc);
        }
        return std::sqrt(acc / static_cast<double>(N));
    };

    Solution<N> sol;
    sol.t.push_back(t0);
    sol.y.push_back(y0);
    if (outputs.empty()) return sol;

    const double dir = outputs.back() >= t0 ? 1.0 : -1.0;
    double t = t0;
    Vec<N> y = y0;
    Vec<N> k1{};
    if (!detail::guarded(sol, [&] { k1 = rhs(t, y); })) return sol;

    // Initial step from the scaled sizes of y and y' (Hairer, Norsett & Wanner).
    double h = 0.0;
    {
        const double d0 = scaled_rms(y, y, y);
        const double d1 = scaled_rms(k1, y, y);
        double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h0 = std::min(h0, std::abs(outputs.back() - t0));
        h = h0;
        try {
            const Vec<N> y1 = detail::axpy(y, dir * h0, k1);
            const Vec<N> f1 = rhs(t + dir * h0, y1);
            Vec<N> df;
            for (std::size_t i = 0; i < N; ++i) df[i] = f1[i] - k1[i];
            const double d2 = scaled_rms(df, y, y) / h0;
            const double dm = std::max(d1, d2);
            const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / 5.0);
            if (std::isfinite(h1)) h = std::min(100.0 * h0, h1);
        } catch (const Error&) {
        }
        if (!(h > 0.0)) h = 1e-6;
        h *= dir;
    }

    double err_prev = 1e-4;
    bool last_rejected = false;
    Status failure_kind = Status::step_underflow;
    std::string failure_msg;

    for (const double target : outputs) {
        while (dir * (target - t) > 0.0) {
            if (sol.steps + sol.rejected >= opt.max_steps) {
                sol.status = Status::domain_error;
                sol.message = "adaptive54: step limit reached at t = " + std::to_string(t);
                return sol;
            }
            if (std::abs(h) < opt.min_step * std::max(1.0, std::abs(t))) {
                sol.status = failure_kind;
                sol.message = "adaptive54: step size underflow at t = " + std::to_string(t) +
                              (failure_msg.empty() ? std::string() : "; last failure: " + failure_msg);
                return sol;
            }
            double h_try = h;
            bool clamped = false;
            if (dir * (t + h - target) > -0.01 * std::abs(h)) {
                h_try = target - t;
                clamped = true;
            }

            Vec<N> y5{};
            Vec<N> k7{};
            Vec<N> errv{};
            bool stages_ok = true;
            try {
                const Vec<N> k2 = rhs(t + c2 * h_try, detail::axpy(y, h_try * a21, k1));
                Vec<N> ys;
                for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h_try * (a31 * k1[i] + a32 * k2[i]);
                const Vec<N> k3 = rhs(t + c3 * h_try, ys);
                for (std::size_t i = 0; i < N; ++i) ys[i] = y[i] + h_try * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
                const Vec<N> k4 = rhs(t + c4 * h_try, ys);
                for (std::size_t i = 0; i < N; ++i)
                    ys[i] = y[i] + h_try * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
                const Vec<N> k5 = rhs(t + c5 * h_try, ys);
                for (std::size_t i = 0; i < N; ++i)
                    ys[i] = y[i] + h_try * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
                const Vec<N> k6 = rhs(t + h_try, ys);
                for (std::size_t i = 0; i < N; ++i)
                    y5[i] = y[i] + h_try * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
                k7 = rhs(t + h_try, y5);
                for (std::size_t i = 0; i < N; ++i)
                    errv[i] = h_try * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            } catch (const SingularityError& e) {
                stages_ok = false;
                failure_kind = Status::singularity;
                failure_msg = e.what();
            } catch (const Error& e) {
                stages_ok = false;
                failure_kind = Status::domain_error;
                failure_msg = e.what();
            }

            const double err = stages_ok && detail::all_finite(y5) && detail::all_finite(k7)
                                   ? scaled_rms(errv, y, y5)
                                   : std::numeric_limits<double>::infinity();
            if (!stages_ok || !std::isfinite(err)) {
                // A stage left the domain or blew up: treat as a hard rejection.
                ++sol.rejected;
                h = h_try * 0.25;
                last_rejected = true;
                continue;
            }
            if (err <= 1.0) {
                t = clamped ? target : t + h_try;
                y = y5;
                k1 = k7;
                ++sol.steps;
                double fac = opt.safety * std::pow(std::max(err, 1e-10), -0.7 / 5.0) * std::pow(err_prev, 0.4 / 5.0);
                fac = std::clamp(fac, opt.min_factor, opt.max_factor);
                if (last_rejected) fac = std::min(fac, 1.0);
                err_prev = std::max(err, 1e-4);
                last_rejected = false;
                const double h_next = h_try * fac;
                h = clamped ? dir * std::max(std::abs(h_next), std::abs(h)) : h_next;
                failure_kind = Status::step_underflow;
                failure_msg.clear();
            } else {
                ++sol.rejected;
                const double fac = std::max(opt.min_factor, opt.safety * std::pow(err, -1.0 / 5.0));
                h = h_try * fac;
                last_rejected = true;
            }
        }
        sol.t.push_back(target);
        sol.y.push_back(y);
    }
    return sol;
}

template <std::size_t N, class Rhs>
Solution<N> dopri54(Rhs&& rhs, double t0, const Vec<N>& y0, double t_end, double stride,
                    const AdaptiveOptions& opt) {
    if (!(stride > 0.0)) throw ConfigError("adaptive54: output stride must be > 0");
    const std::vector<double> grid = output_grid(t0, t_end, stride);
    return dopri54<N>(std::forward<Rhs>(rhs), t0, y0, std::span<const double>(grid).subspan(1), opt);
}

/// Kick-drift-kick leapfrog for y = (Q, P), Q' = P, P' = accel(Q). With
/// `singular_origin`, a step that carries Q across 0 stops the run with
/// Status::singularity; a fixed step would otherwise jump the pole unnoticed.
template <class Accel>
Solution<2> verlet(Accel&& accel, double t0, const Vec<2>& y0, double dt, double t_end, double stride,
                   bool singular_origin = false) {
    if (!(dt > 0.0)) throw ConfigError("verlet: dt must be > 0");
    if (!(stride > 0.0)) throw ConfigError("verlet: output stride must be > 0");
    const std::size_t per_stride = substeps(stride, dt);
    const std::vector<double> grid = output_grid(t0, t_end, stride);
    const double dir = t_end >= t0 ? 1.0 : -1.0;

    Solution<2> sol;
    sol.t.push_back(t0);
    sol.y.push_back(y0);
    double Q = y0[0];
    double P = y0[1];
    double a = 0.0;
    if (!detail::guarded(sol, [&] { a = accel(Q); })) return sol;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double ta = grid[k - 1];
        const double tb = grid[k];
        const double span = std::abs(tb - ta);
        std::size_t n = per_stride;
        if (std::abs(span - stride) > 1e-9 * stride)
            n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt - 1e-9)));
        for (std::size_t j = 0; j < n; ++j) {
            const double t = ta + dir * static_cast<double>(j) * dt;
            const double h = j + 1 == n ? tb - t : dir * dt;
            const double P_half = P + 0.5 * h * a;
            const double Q_next = Q + h * P_half;
            if (singular_origin && (Q_next == 0.0 || std::signbit(Q_next) != std::signbit(Q))) {
                sol.status = Status::singularity;
                sol.message = "verlet: Q crossed the singular point 0 at t = " + std::to_string(t + h);
                return sol;
            }
            double a_next = 0.0;
            if (!detail::guarded(sol, [&] { a_next = accel(Q_next); })) return sol;
            Q = Q_next;
            P = P_half + 0.5 * h * a_next;
            a = a_next;
            ++sol.steps;
            if (!std::isfinite(Q) || !std::isfinite(P)) {
                sol.status = Status::domain_error;
                sol.message = "verlet: non-finite state at t = " + std::to_string(t + h);
                return sol;
            }
        }
        sol.t.push_back(tb);
        sol.y.push_back({Q, P});
    }
    return sol;
}

} // namespace ermakov::ode
