#include "ermakov/integrate.hpp"

#include "ermakov/errors.hpp"

namespace ermakov {

ode::Vec<5> pack(const PhysState& s) { return {s.q, s.q_dot, s.f, s.f_dot, s.tau}; }

PhysState unpack(double t, const ode::Vec<5>& y) { return {t, y[4], y[0], y[1], y[2], y[3]}; }

std::function<ode::Vec<5>(double, const ode::Vec<5>&)> phys_vector_field(const Scenario& scn) {
    return [&scn](double t, const ode::Vec<5>& y) -> ode::Vec<5> {
        const DerivPhys d = rhs_phys(unpack(t, y), scn);
        return {d.dq, d.dq_dot, d.df, d.df_dot, d.dtau};
    };
}

namespace {

template <std::size_t N>
TrajectoryMeta meta_of(const ode::Solution<N>& sol, Method method, double dt_or_tol) {
    return {method, dt_or_tol, sol.steps, sol.rejected, sol.status, sol.message};
}

PhysTrajectory to_phys(const ode::Solution<5>& sol, Method method, double dt_or_tol) {
    PhysTrajectory out;
    out.samples.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) out.samples.push_back(unpack(sol.t[i], sol.y[i]));
    out.meta = meta_of(sol, method, dt_or_tol);
    return out;
}

QTrajectory to_q(const ode::Solution<2>& sol, Method method, double dt_or_tol) {
    QTrajectory out;
    out.samples.reserve(sol.t.size());
    for (std::size_t i = 0; i < sol.t.size(); ++i) out.samples.push_back({sol.t[i], sol.y[i][0], sol.y[i][1]});
    out.meta = meta_of(sol, method, dt_or_tol);
    return out;
}

} // namespace

PhysTrajectory integrate_fixed_rk4(const Scenario& scn, double dt, double t_end, double output_stride) {
    const auto sol = ode::rk4<5>(phys_vector_field(scn), scn.initial.t, pack(scn.initial), dt, t_end, output_stride);
    return to_phys(sol, Method::rk4, dt);
}

PhysTrajectory integrate_adaptive54(const Scenario& scn, double tol, double t_end, double output_stride) {
    ode::AdaptiveOptions opt;
    opt.tol = tol;
    const auto sol = ode::dopri54<5>(phys_vector_field(scn), scn.initial.t, pack(scn.initial), t_end, output_stride, opt);
    return to_phys(sol, Method::adaptive54, tol);
}

PhysTrajectory integrate_physical(const Scenario& scn, const IntegrationPlan& plan) {
    plan.validate(scn.initial.t);
    switch (plan.method) {
    case Method::rk4:
        return integrate_fixed_rk4(scn, plan.dt, plan.t_end, plan.output_stride);
    case Method::adaptive54:
        return integrate_adaptive54(scn, plan.tol, plan.t_end, plan.output_stride);
    case Method::verlet:
        break;
    }
    throw ConfigError("method 'verlet' integrates the autonomous Q-frame only; use rk4 or adaptive54 for the "
                      "physical frame");
}

XRhoTrajectory integrate_xrho_adaptive(const XRhoSystem& sys, double t0, const XRhoState& initial, double tol,
                                       double t_end, double output_stride) {
    ode::AdaptiveOptions opt;
    opt.tol = tol;
    auto field = [&sys](double t, const ode::Vec<4>& y) -> ode::Vec<4> {
        const XRhoState d = rhs_xrho({y[0], y[1], y[2], y[3]}, t, sys);
        return {d.x, d.x_dot, d.rho, d.rho_dot};
    };
    const auto sol = ode::dopri54<4>(field, t0, {initial.x, initial.x_dot, initial.rho, initial.rho_dot}, t_end,
                                     output_stride, opt);
    XRhoTrajectory out;
    out.t = sol.t;
    for (const auto& y : sol.y) out.samples.push_back({y[0], y[1], y[2], y[3]});
    out.meta = {Method::adaptive54, tol, sol.steps, sol.rejected, sol.status, sol.message};
    return out;
}

QForce q_force(const Func1& V, const Func1& W) {
    return [V, W](double Q) { return rhs_Q({0.0, Q, 0.0}, V, W).dQ_prime; };
}

QForce q_force_coupled(const Func1& F, const Func1& G) {
    return [F, G](double Q) { return rhs_Q_coupled({0.0, Q, 0.0}, F, G).dQ_prime; };
}

QForce q_force(const Scenario& scn) {
    if (scn.has_potentials()) return q_force(*scn.potential_V, *scn.potential_W);
    return q_force_coupled(scn.coupling_F, scn.coupling_G);
}

QTrajectory integrate_Q_adaptive(const QForce& force, const QFrameState& initial, double tol,
                                 std::span<const double> taus) {
    ode::AdaptiveOptions opt;
    opt.tol = tol;
    auto field = [&force](double, const ode::Vec<2>& y) -> ode::Vec<2> { return {y[1], force(y[0])}; };
    const auto sol = ode::dopri54<2>(field, initial.tau, {initial.Q, initial.Q_prime}, taus, opt);
    return to_q(sol, Method::adaptive54, tol);
}

bool singular_at_origin(const Scenario& scn) {
    return scn.potential_W ? !scn.potential_W->is_zero() : !scn.coupling_G.is_zero();
}

QTrajectory integrate_verlet_Q(const QForce& force, const QFrameState& initial, double dt, double tau_end,
                               double output_stride, bool singular_origin) {
    const auto sol =
        ode::verlet(force, initial.tau, {initial.Q, initial.Q_prime}, dt, tau_end, output_stride, singular_origin);
    return to_q(sol, Method::verlet, dt);
}

QTrajectory integrate_verlet_Q(const Func1& V, const Func1& W, const QFrameState& initial, double dt,
                               double tau_end) {
    return integrate_verlet_Q(q_force(V, W), initial, dt, tau_end, dt, !W.is_zero());
}

} // namespace ermakov
