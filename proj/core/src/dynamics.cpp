#include "ermakov/dynamics.hpp"

#include "ermakov/errors.hpp"

#include <cmath>
#include <string>

namespace ermakov {

namespace {

void guard(double value, const char* name, double t) {
    if (!(std::abs(value) >= singularity_guard))
        throw SingularityError(std::string(name) + " = " + std::to_string(value) + " within singularity guard at time " +
                               std::to_string(t));
}

// W(1/Q) with the Q = 0 guard only when W is not identically zero.
double potential_W_of_inverse(const Func1& W, double Q, double tau) {
    if (W.is_zero()) return 0.0;
    guard(Q, "Q", tau);
    return W(1.0 / Q);
}

const Func1& require(const std::optional<Func1>& p, const char* what) {
    if (!p) throw UnsupportedError(std::string("operation needs the potential ") + what +
                                   "; scenario was built from couplings only");
    return *p;
}

} // namespace

DerivPhys rhs_phys(const PhysState& s, const Scenario& scn) {
    guard(s.q, "q", s.t);
    guard(s.f, "f", s.t);
    const double m = checked_mass(scn.mass, s.t);
    const double rate = scn.mass.derivative(s.t) / m;
    const double w2 = scn.omega_tilde_sq(s.t);
    const double m2 = m * m;

    DerivPhys d;
    d.dq = s.q_dot;
    d.df = s.f_dot;
    d.dq_dot = -rate * s.q_dot - w2 * s.q;
    if (!scn.coupling_G.is_zero()) d.dq_dot += scn.coupling_G(s.f / s.q) / (m2 * s.q * s.q * s.q);
    d.df_dot = -rate * s.f_dot - w2 * s.f;
    if (!scn.coupling_F.is_zero()) d.df_dot += scn.coupling_F(s.q / s.f) / (m2 * s.f * s.f * s.f);
    d.dtau = 1.0 / (m * s.f * s.f);
    return d;
}

XRhoSystem xrho_system(const Scenario& scn) {
    Func1 m = scn.mass;
    Func1 w2 = scn.omega_tilde_sq;
    return {[m, w2](double t) { return omega_sq_from_mass(m, w2, t); }, g_from_G(scn.coupling_G),
            h_from_F(scn.coupling_F)};
}

XRhoState rhs_xrho(const XRhoState& s, double t, const XRhoSystem& sys) {
    guard(s.x, "x", t);
    guard(s.rho, "rho", t);
    const double w2 = sys.omega_sq(t);
    XRhoState d;
    d.x = s.x_dot;
    d.rho = s.rho_dot;
    d.x_dot = -w2 * s.x;
    if (!sys.g.is_zero()) d.x_dot += sys.g(s.rho / s.x) / (s.rho * s.x * s.x);
    d.rho_dot = -w2 * s.rho;
    if (!sys.h.is_zero()) d.rho_dot += sys.h(s.x / s.rho) / (s.rho * s.rho * s.x);
    return d;
}

DerivQ rhs_Q(const QFrameState& s, const Func1& V, const Func1& W) {
    double acc = -V.derivative(s.Q);
    if (!W.is_zero()) {
        guard(s.Q, "Q", s.tau);
        acc += W.derivative(1.0 / s.Q) / (s.Q * s.Q);
    }
    return {s.Q_prime, acc};
}

DerivQ rhs_Q_coupled(const QFrameState& s, const Func1& F, const Func1& G) {
    double acc = F.is_zero() ? 0.0 : -s.Q * F(s.Q);
    if (!G.is_zero()) {
        guard(s.Q, "Q", s.tau);
        acc += G(1.0 / s.Q) / (s.Q * s.Q * s.Q);
    }
    return {s.Q_prime, acc};
}

double lagrangian_Q(const QFrameState& s, const Func1& V, const Func1& W) {
    return 0.5 * s.Q_prime * s.Q_prime - V(s.Q) - potential_W_of_inverse(W, s.Q, s.tau);
}

double momentum_rate_f(const PhysState& s, const Scenario& scn) {
    guard(s.f, "f", s.t);
    const double m = checked_mass(scn.mass, s.t);
    double r = -m * scn.omega_tilde_sq(s.t) * s.f;
    if (!scn.coupling_F.is_zero()) r += scn.coupling_F(s.q / s.f) / (m * s.f * s.f * s.f);
    return r;
}

double lagrangian_q_tilde(const PhysState& s, const Scenario& scn) {
    const Func1& V = require(scn.potential_V, "V");
    const Func1& W = require(scn.potential_W, "W");
    guard(s.q, "q", s.t);
    guard(s.f, "f", s.t);
    const double m = checked_mass(scn.mass, s.t);
    const double u = s.q / s.f;
    const double potential = V(u) + (W.is_zero() ? 0.0 : W(s.f / s.q));
    return 0.5 * m * s.q_dot * s.q_dot + 0.5 * (s.q * s.q / s.f) * momentum_rate_f(s, scn) -
           potential / (m * s.f * s.f);
}

double gauge_function(const PhysState& s, const Scenario& scn) {
    guard(s.f, "f", s.t);
    const double m = checked_mass(scn.mass, s.t);
    return 0.5 * (s.q * s.q / s.f) * m * s.f_dot;
}

double gauge_function_rate(const PhysState& s, const Scenario& scn) {
    guard(s.f, "f", s.t);
    const double m = checked_mass(scn.mass, s.t);
    const double p = m * s.f_dot;
    // d/dt [ (q^2/f) p / 2 ] with dp/dt from the f equation of motion
    return s.q * s.q_dot * p / s.f - 0.5 * s.q * s.q * s.f_dot * p / (s.f * s.f) +
           0.5 * (s.q * s.q / s.f) * momentum_rate_f(s, scn);
}

double gauge_residual(const PhysState& s, const Scenario& scn) {
    const Func1& V = require(scn.potential_V, "V");
    const Func1& W = require(scn.potential_W, "W");
    const double lq = lagrangian_q_tilde(s, scn);
    const double m = checked_mass(scn.mass, s.t);
    const QFrameState Qs = to_qframe(s, scn.mass);
    const double dtau_dt = 1.0 / (m * s.f * s.f);
    return lq - (lagrangian_Q(Qs, V, W) * dtau_dt + gauge_function_rate(s, scn));
}

} // namespace ermakov
