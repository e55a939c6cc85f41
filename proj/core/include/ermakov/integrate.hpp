#pragma once

#include "ermakov/dynamics.hpp"
#include "ermakov/model.hpp"
#include "ermakov/ode.hpp"
#include "ermakov/state.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace ermakov {

struct TrajectoryMeta {
    Method method = Method::adaptive54;
    double dt_or_tol = 0.0;
    std::size_t steps = 0;
    std::size_t rejected = 0;
    ode::Status status = ode::Status::ok;
    std::string message;
};

/// Samples in strictly increasing t; the first sample is the initial condition.
/// On failure the samples stop at the last valid state.
struct PhysTrajectory {
    std::vector<PhysState> samples;
    TrajectoryMeta meta;

    bool ok() const noexcept { return meta.status == ode::Status::ok; }
    const PhysState& last_valid() const { return samples.back(); }
};

struct QTrajectory {
    std::vector<QFrameState> samples;
    TrajectoryMeta meta;

    bool ok() const noexcept { return meta.status == ode::Status::ok; }
};

struct XRhoTrajectory {
    std::vector<double> t;
    std::vector<XRhoState> samples;
    TrajectoryMeta meta;
};

/// y = (q, qdot, f, fdot, tau) as a function of t.
std::function<ode::Vec<5>(double, const ode::Vec<5>&)> phys_vector_field(const Scenario& scn);

ode::Vec<5> pack(const PhysState& s);
PhysState unpack(double t, const ode::Vec<5>& y);

PhysTrajectory integrate_fixed_rk4(const Scenario& scn, double dt, double t_end, double output_stride);
PhysTrajectory integrate_adaptive54(const Scenario& scn, double tol, double t_end, double output_stride);

/// Dispatches on plan.method; verlet is rejected because it only applies to
/// the autonomous frame.
PhysTrajectory integrate_physical(const Scenario& scn, const IntegrationPlan& plan);
inline PhysTrajectory integrate_physical(const Scenario& scn) { return integrate_physical(scn, scn.plan); }

XRhoTrajectory integrate_xrho_adaptive(const XRhoSystem& sys, double t0, const XRhoState& initial, double tol,
                                       double t_end, double output_stride);

/// Q'' as a function of Q.
using QForce = std::function<double(double)>;

QForce q_force(const Func1& V, const Func1& W);
QForce q_force_coupled(const Func1& F, const Func1& G);
/// Potentials when the scenario has them, couplings otherwise.
QForce q_force(const Scenario& scn);
/// True when the autonomous-frame force of the scenario has a pole at Q = 0.
bool singular_at_origin(const Scenario& scn);

/// Adaptive integration of the autonomous frame, sampled exactly at `taus`
/// (strictly increasing, all after initial.tau).
QTrajectory integrate_Q_adaptive(const QForce& force, const QFrameState& initial, double tol,
                                 std::span<const double> taus);

/// `singular_origin`: the force has a pole at Q = 0 (nonzero W or G); a step
/// crossing it ends the run with a singularity status.
QTrajectory integrate_verlet_Q(const QForce& force, const QFrameState& initial, double dt, double tau_end,
                               double output_stride, bool singular_origin = false);
QTrajectory integrate_verlet_Q(const Func1& V, const Func1& W, const QFrameState& initial, double dt,
                               double tau_end);

} // namespace ermakov
