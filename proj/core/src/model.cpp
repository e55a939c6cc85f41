#include "ermakov/model.hpp"

#include "ermakov/errors.hpp"

#include <cmath>

namespace ermakov {

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::rk4: return "rk4";
    case Method::adaptive54: return "adaptive54";
    case Method::verlet: return "verlet";
    }
    return "?";
}

Method parse_method(std::string_view name) {
    if (name == "rk4") return Method::rk4;
    if (name == "adaptive54") return Method::adaptive54;
    if (name == "verlet") return Method::verlet;
    throw ConfigError("unknown integration method '" + std::string(name) + "' (expected rk4, adaptive54 or verlet)");
}

void IntegrationPlan::validate(double t0) const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("integration.dt must be > 0");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw ConfigError("integration.tol must be > 0");
    if (!(output_stride > 0.0) || !std::isfinite(output_stride))
        throw ConfigError("integration.output_stride must be > 0");
    if (!std::isfinite(t_end) || t_end < t0) throw ConfigError("integration.t_end must be >= t0");
}

namespace {

// V'(u)/u style quotient with the u = 0 rule.
Func1 quotient_by_variable(const Func1& P, const char* var) {
    const Expr dP = P.d1().with_var(var);
    if (dP.is_zero()) return Func1(Expr::constant(0.0, var));
    Func1 q(simplify(dP / Expr::variable(var)));
    try {
        if (P.derivative(0.0) != 0.0) return q.with_zero_singular();
        return q.with_zero_limit(P.second_derivative(0.0));
    } catch (const DomainError&) {
        return q.with_zero_singular();
    }
}

Func1 times_variable(const Func1& P) {
    if (P.is_zero()) return P;
    Func1 out(simplify(Expr::variable(P.var()) * P.expr()));
    if (P.zero_rule() == Func1::AtZero::limit) return out.with_zero_limit(0.0);
    return out;
}

double number_value(const ConfigDocument& doc, std::string_view section, std::string_view key) {
    const auto raw = doc.get(section, key);
    if (!raw) throw ConfigError("missing [" + std::string(section) + "] " + std::string(key));
    try {
        // Constant expressions such as sqrt(2) are accepted.
        return parse(*raw, "_")(0.0);
    } catch (const Error& e) {
        throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": " + e.what());
    }
}

double number_value_or(const ConfigDocument& doc, std::string_view section, std::string_view key, double fallback) {
    return doc.has(section, key) ? number_value(doc, section, key) : fallback;
}

Func1 function_value(const ConfigDocument& doc, std::string_view section, std::string_view key,
                     std::string_view var) {
    const auto raw = doc.get(section, key);
    if (!raw) throw ConfigError("missing [" + std::string(section) + "] " + std::string(key));
    try {
        return compile(*raw, var);
    } catch (const Error& e) {
        throw ConfigError("[" + std::string(section) + "] " + std::string(key) + ": " + e.what());
    }
}

} // namespace

Func1 F_from_V(const Func1& V) { return quotient_by_variable(V, "u"); }

Func1 G_from_W(const Func1& W) { return quotient_by_variable(W, "v"); }

Func1 h_from_F(const Func1& F) { return times_variable(F); }

Func1 g_from_G(const Func1& G) { return times_variable(G); }

double checked_mass(const Func1& m, double t) {
    const double mv = m(t);
    if (!(mv > 0.0)) throw InvalidMassError("m(t) = " + std::to_string(mv) + " <= 0 at t = " + std::to_string(t));
    return mv;
}

double omega_sq_from_mass(const Func1& m, const Func1& omega_tilde_sq, double t) {
    const double mv = checked_mass(m, t);
    const double md = m.derivative(t);
    const double mdd = m.second_derivative(t);
    return 0.25 * md * md / (mv * mv) - 0.5 * mdd / mv + omega_tilde_sq(t);
}

XRhoState to_xrho(const PhysState& s, const Func1& m) {
    const double mv = checked_mass(m, s.t);
    const double sm = std::sqrt(mv);
    const double half_rate = 0.5 * m.derivative(s.t) / sm;
    return {s.q * sm, s.q_dot * sm + s.q * half_rate, s.f * sm, s.f_dot * sm + s.f * half_rate};
}

XRhoState xrho_derivative_from_phys(const PhysState& s, double q_ddot, double f_ddot, const Func1& m) {
    const double mv = checked_mass(m, s.t);
    const double md = m.derivative(s.t);
    const double mdd = m.second_derivative(s.t);
    const double sm = std::sqrt(mv);
    // d/dt (y sqrt m) and d^2/dt^2 (y sqrt m)
    const double c1 = 0.5 * md / sm;
    const double c2 = 0.5 * mdd / sm - 0.25 * md * md / (mv * sm);
    return {s.q_dot * sm + s.q * c1, q_ddot * sm + 2.0 * s.q_dot * c1 + s.q * c2,
            s.f_dot * sm + s.f * c1, f_ddot * sm + 2.0 * s.f_dot * c1 + s.f * c2};
}

QFrameState to_qframe(const PhysState& s, const Func1& m) {
    if (std::abs(s.f) < singularity_guard)
        throw SingularityError("f = " + std::to_string(s.f) + " at t = " + std::to_string(s.t));
    const double mv = checked_mass(m, s.t);
    return {s.tau, s.q / s.f, mv * (s.q_dot * s.f - s.q * s.f_dot)};
}

Scenario build_scenario(const ConfigDocument& config) {
    Scenario scn;
    scn.mass = function_value(config, "functions", "m", "t");
    scn.omega_tilde_sq = function_value(config, "functions", "omega_tilde_sq", "t");

    const bool hasV = config.has("coupling", "V");
    const bool hasF = config.has("coupling", "F");
    const bool hasW = config.has("coupling", "W");
    const bool hasG = config.has("coupling", "G");
    if (hasV && hasF) throw ConfigError("[coupling] V and F are mutually exclusive; give only one of them");
    if (hasW && hasG) throw ConfigError("[coupling] W and G are mutually exclusive; give only one of them");
    if (!hasV && !hasF) throw ConfigError("[coupling] needs V or F");
    if (!hasW && !hasG) throw ConfigError("[coupling] needs W or G");

    if (hasV) {
        scn.potential_V = function_value(config, "coupling", "V", "Q");
        scn.coupling_F = F_from_V(*scn.potential_V);
    } else {
        scn.coupling_F = function_value(config, "coupling", "F", "u");
    }
    if (hasW) {
        scn.potential_W = function_value(config, "coupling", "W", "s");
        scn.coupling_G = G_from_W(*scn.potential_W);
    } else {
        scn.coupling_G = function_value(config, "coupling", "G", "v");
    }

    PhysState& init = scn.initial;
    init.t = number_value_or(config, "initial", "t0", 0.0);
    init.tau = 0.0;
    init.q = number_value(config, "initial", "q");
    init.q_dot = number_value(config, "initial", "q_dot");
    init.f = number_value(config, "initial", "f");
    init.f_dot = number_value(config, "initial", "f_dot");
    if (std::abs(init.q) < singularity_guard) throw ConfigError("[initial] q must be nonzero");
    if (std::abs(init.f) < singularity_guard) throw ConfigError("[initial] f must be nonzero");
    try {
        checked_mass(scn.mass, init.t);
    } catch (const Error& e) {
        throw ConfigError(std::string("[functions] m: ") + e.what());
    }

    IntegrationPlan& plan = scn.plan;
    if (const auto method = config.get("integration", "method")) plan.method = parse_method(*method);
    plan.t_end = number_value(config, "integration", "t_end");
    plan.dt = number_value_or(config, "integration", "dt", plan.dt);
    plan.tol = number_value_or(config, "integration", "tol", plan.tol);
    plan.output_stride = number_value_or(config, "integration", "output_stride", plan.output_stride);
    plan.validate(init.t);
    return scn;
}

} // namespace ermakov
