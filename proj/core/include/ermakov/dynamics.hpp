#pragma once

// Right-hand sides of the three equivalent formulations and the Lagrangian
// evaluators. All functions are pure.

#include "ermakov/func1.hpp"
#include "ermakov/model.hpp"
#include "ermakov/state.hpp"

#include <functional>

namespace ermakov {

/// Time derivatives of the PhysState components.
struct DerivPhys {
    double dq = 0.0;
    double dq_dot = 0.0;
    double df = 0.0;
    double df_dot = 0.0;
    double dtau = 0.0;
};

/// Physical frame:
///   d/dt(m qdot) + m w~^2 q = G(f/q) / (m q^3)
///   d/dt(m fdot) + m w~^2 f = F(q/f) / (m f^3)
///   dtau/dt = 1 / (m f^2)
DerivPhys rhs_phys(const PhysState& s, const Scenario& scn);

/// The rescaled pair. `omega_sq` is the mass-shifted frequency, a function of t.
struct XRhoSystem {
    std::function<double(double)> omega_sq;
    Func1 g;
    Func1 h;
};

/// Builds the x-rho system equivalent to a scenario: g = vG, h = uF and
/// omega^2 from omega_sq_from_mass.
XRhoSystem xrho_system(const Scenario& scn);

/// xddot = -w^2 x + g(rho/x)/(rho x^2),  rhoddot = -w^2 rho + h(x/rho)/(rho^2 x).
/// Result packs (xdot, xddot, rhodot, rhoddot).
XRhoState rhs_xrho(const XRhoState& s, double t, const XRhoSystem& sys);

struct DerivQ {
    double dQ = 0.0;
    double dQ_prime = 0.0;
};

/// Euler-Lagrange of L_Q = Q'^2/2 - V(Q) - W(1/Q):  Q'' = -V'(Q) + W'(1/Q)/Q^2.
DerivQ rhs_Q(const QFrameState& s, const Func1& V, const Func1& W);

/// Same flow written with the couplings: Q'' = -Q F(Q) + G(1/Q)/Q^3.
/// Used when a scenario carries F, G without potentials.
DerivQ rhs_Q_coupled(const QFrameState& s, const Func1& F, const Func1& G);

double lagrangian_Q(const QFrameState& s, const Func1& V, const Func1& W);

/// d/dt(m fdot) along the flow: -m w~^2 f + F(q/f)/(m f^3).
double momentum_rate_f(const PhysState& s, const Scenario& scn);

/// L~_q = m qdot^2/2 + (q^2/f) d/dt(m fdot)/2 - [V(q/f) + W(f/q)]/(m f^2).
/// Requires potentials; throws UnsupportedError otherwise.
double lagrangian_q_tilde(const PhysState& s, const Scenario& scn);

/// Gauge function Phi = (1/2)(q^2/f) m fdot; L~_q = L_Q dtau/dt + dPhi/dt.
double gauge_function(const PhysState& s, const Scenario& scn);
double gauge_function_rate(const PhysState& s, const Scenario& scn);

/// L~_q - [L_Q(Q, Q') dtau/dt + dPhi/dt]; zero up to round-off.
double gauge_residual(const PhysState& s, const Scenario& scn);

} // namespace ermakov
