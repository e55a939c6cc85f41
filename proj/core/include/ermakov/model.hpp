#pragma once

// Scenario assembly and the coupling-function algebra relating the potentials
// (V, W) of the autonomous frame to the couplings (F, G) of the physical
// frame and to the (h, g) pair of the rescaled x-rho system.

#include "ermakov/config.hpp"
#include "ermakov/func1.hpp"
#include "ermakov/state.hpp"

#include <optional>
#include <string_view>

namespace ermakov {

enum class Method { rk4, adaptive54, verlet };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

struct IntegrationPlan {
    Method method = Method::adaptive54;
    double t_end = 0.0;
    double dt = 0.01;   // rk4, verlet
    double tol = 1e-10; // adaptive54
    double output_stride = 0.1;

    /// Throws ConfigError. t_end == t0 is accepted and yields a single sample.
    void validate(double t0) const;
};

/// Complete, validated problem definition. Immutable once built.
struct Scenario {
    Func1 mass;             // m(t)
    Func1 omega_tilde_sq;   // omega~^2(t), may be negative
    Func1 coupling_F;       // F(u), u = q/f
    Func1 coupling_G;       // G(v), v = f/q
    std::optional<Func1> potential_V;  // V(Q)
    std::optional<Func1> potential_W;  // W(s), s = 1/Q
    PhysState initial;
    IntegrationPlan plan;

    bool has_potentials() const noexcept { return potential_V.has_value() && potential_W.has_value(); }
};

/// F(u) = V'(u)/u. When V'(0) = 0 the value at u = 0 is the limit V''(0);
/// otherwise evaluating at 0 raises SingularityError.
Func1 F_from_V(const Func1& V);

/// G(v) = W'(v)/v, same treatment of v = 0 as F_from_V.
Func1 G_from_W(const Func1& W);

/// h(u) = u F(u).
Func1 h_from_F(const Func1& F);

/// g(v) = v G(v).
Func1 g_from_G(const Func1& G);

/// omega^2(t) = (1/4) mdot^2/m^2 - (1/2) mddot/m + omega~^2(t). Negative values are legal.
double omega_sq_from_mass(const Func1& m, const Func1& omega_tilde_sq, double t);

/// x = q sqrt(m), rho = f sqrt(m) and their time derivatives.
XRhoState to_xrho(const PhysState& s, const Func1& m);

/// Chain rule for the second derivatives of the rescaled pair: given the
/// physical accelerations (q'', f''), returns (xdot, xddot, rhodot, rhoddot)
/// packed as an XRhoState.
XRhoState xrho_derivative_from_phys(const PhysState& s, double q_ddot, double f_ddot, const Func1& m);

/// Q = q/f, Q' = m (qdot f - q fdot), tau carried over.
QFrameState to_qframe(const PhysState& s, const Func1& m);

/// Mass at t, raising InvalidMassError when m(t) <= 0.
double checked_mass(const Func1& m, double t);

Scenario build_scenario(const ConfigDocument& config);

} // namespace ermakov
