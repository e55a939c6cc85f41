#include "ermakov/invariants.hpp"

#include "ermakov/errors.hpp"

#include <cmath>

namespace ermakov {

namespace {

void guard(double v, const char* name) {
    if (!(std::abs(v) >= singularity_guard))
        throw SingularityError(std::string(name) + " = " + std::to_string(v) + " within singularity guard");
}

Integrand times_argument(const Func1& c) {
    return [c](double x) { return x * c(x); };
}

} // namespace

double energy_Q(const QFrameState& s, const Func1& V, const Func1& W) {
    double e = 0.5 * s.Q_prime * s.Q_prime + V(s.Q);
    if (!W.is_zero()) {
        guard(s.Q, "Q");
        e += W(1.0 / s.Q);
    }
    return e;
}

double wronskian_term(const PhysState& s, double m) {
    const double w = m * (s.q_dot * s.f - s.q * s.f_dot);
    return 0.5 * w * w;
}

double ray_reid_invariant(const PhysState& s, const Scenario& scn, double u_ref, double v_ref, double tol) {
    guard(s.q, "q");
    guard(s.f, "f");
    const double m = checked_mass(scn.mass, s.t);
    double e = wronskian_term(s, m);
    if (!scn.coupling_F.is_zero()) e += quad(times_argument(scn.coupling_F), u_ref, s.q / s.f, tol);
    if (!scn.coupling_G.is_zero()) e += quad(times_argument(scn.coupling_G), v_ref, s.f / s.q, tol);
    return e;
}

double ermakov_lewis(const PhysState& s, double m_val, double Omega) {
    guard(s.f, "f");
    const double u = s.q / s.f;
    return wronskian_term(s, m_val) + 0.5 * Omega * Omega * u * u;
}

std::pair<double, double> wronskian_identity_check(const PhysState& s, const Func1& m) {
    const double mv = checked_mass(m, s.t);
    const XRhoState xr = to_xrho(s, m);
    const double lhs = mv * (s.q_dot * s.f - s.q * s.f_dot);
    const double rhs = xr.x_dot * xr.rho - xr.x * xr.rho_dot;
    return {lhs * lhs, rhs * rhs};
}

double default_reference(const Func1& coupling) {
    try {
        const double v = 0.0 * coupling(0.0);
        if (std::isfinite(v)) return 0.0;
    } catch (const Error&) {
    }
    return 1.0;
}

InvariantEvaluator::InvariantEvaluator(const Scenario& scn, InvariantOptions opt)
    : scn_(scn),
      u_ref_(opt.u_ref.value_or(default_reference(scn.coupling_F))),
      v_ref_(opt.v_ref.value_or(default_reference(scn.coupling_G))),
      uF_(times_argument(scn.coupling_F), u_ref_, opt.quad_tol),
      vG_(times_argument(scn.coupling_G), v_ref_, opt.quad_tol) {
    if (scn.potential_V) offset_V_ = (*scn.potential_V)(u_ref_);
    if (scn.potential_W && !scn.potential_W->is_zero()) offset_W_ = (*scn.potential_W)(v_ref_);
}

std::string_view InvariantEvaluator::frame_check_mode() const noexcept {
    return scn_.has_potentials() ? "potential" : "reconstructed";
}

double InvariantEvaluator::e_phys(const PhysState& s) const {
    guard(s.q, "q");
    guard(s.f, "f");
    const double m = checked_mass(scn_.mass, s.t);
    double e = wronskian_term(s, m) + offset_V_ + offset_W_;
    if (!scn_.coupling_F.is_zero()) e += uF_(s.q / s.f);
    if (!scn_.coupling_G.is_zero()) e += vG_(s.f / s.q);
    return e;
}

double InvariantEvaluator::e_Q(const PhysState& s) const {
    const QFrameState qs = to_qframe(s, scn_.mass);
    double e = 0.5 * qs.Q_prime * qs.Q_prime;
    if (scn_.potential_V)
        e += (*scn_.potential_V)(qs.Q);
    else if (!scn_.coupling_F.is_zero())
        e += uF_(qs.Q);
    if (scn_.potential_W) {
        if (!scn_.potential_W->is_zero()) {
            guard(qs.Q, "Q");
            e += (*scn_.potential_W)(1.0 / qs.Q);
        }
    } else if (!scn_.coupling_G.is_zero()) {
        guard(qs.Q, "Q");
        e += vG_(1.0 / qs.Q);
    }
    return e;
}

InvariantReport drift_report(const PhysTrajectory& traj, const Scenario& scn, const InvariantOptions& opt) {
    if (traj.samples.empty()) throw Error("drift_report: empty trajectory");
    const InvariantEvaluator eval(scn, opt);
    InvariantReport r;
    r.u_ref = eval.u_ref();
    r.v_ref = eval.v_ref();
    r.samples = traj.samples.size();
    r.e_phys.reserve(r.samples);
    r.e_Q.reserve(r.samples);
    for (const PhysState& s : traj.samples) {
        r.e_phys.push_back(eval.e_phys(s));
        r.e_Q.push_back(eval.e_Q(s));
    }
    r.e0 = r.e_phys.front();
    for (std::size_t i = 0; i < r.samples; ++i) {
        r.max_abs_drift = std::max(r.max_abs_drift, std::abs(r.e_phys[i] - r.e0));
        r.frame_gap = std::max(r.frame_gap, std::abs(r.e_phys[i] - r.e_Q[i]));
    }
    if (std::abs(r.e0) >= 1e-12) r.max_rel_drift = r.max_abs_drift / std::abs(r.e0);
    return r;
}

InvariantReport drift_report(const PhysTrajectory& traj, const Scenario& scn, double tol) {
    InvariantOptions opt;
    opt.quad_tol = tol;
    return drift_report(traj, scn, opt);
}

} // namespace ermakov
