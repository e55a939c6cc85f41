// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "commands.hpp"
#include "ermakov/dynamics.hpp"
#include "ermakov/integrate.hpp"
#include "ermakov/invariants.hpp"
#include "ermakov/ode.hpp"
#include "ermakov/quadrature.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ermakov;
using ermakov::testing::load_scenario;

namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ermakov");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ermakov_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

Outcome s1_conservation() {
    const Scenario scn = load_scenario("s1_harmonic");
    const auto start = std::chrono::steady_clock::now();
    const PhysTrajectory traj = integrate_physical(scn);
    const InvariantReport rep = drift_report(traj, scn, 1e-10);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!traj.ok() || !rep.max_rel_drift) return {false, "integration failed"};
    double worst = 0.0;
    for (double e : rep.e_phys) worst = std::max(worst, std::abs(e - 1.0));
    const bool pass = *rep.max_rel_drift < 1e-8 && worst <= 1e-6 && secs < 5.0;
    return {pass, fmt("max_rel_drift=%.3g max|E-1|=%.3g runtime=%.3gs", *rep.max_rel_drift, worst, secs)};
}

Outcome frame_equality() {
    double worst = 0.0;
    for (const char* name : {"s1_harmonic", "s2_time_dependent_mass", "s3_anharmonic_singular"}) {
        const Scenario scn = load_scenario(name);
        const PhysTrajectory traj = integrate_physical(scn);
        if (!traj.ok()) return {false, std::string(name) + " failed"};
        worst = std::max(worst, drift_report(traj, scn, 1e-10).frame_gap);
    }
    return {worst < 1e-7, fmt("max frame gap=%.3g", worst)};
}

// Closed-form mass derivatives, independent of the library's finite-difference path.
Outcome rescaled_rhs() {
    const Scenario scn = ermakov::testing::scenario_from_text(
        "[functions]\nm = 1+0.1*sin(t)\nomega_tilde_sq = 1+0.2*cos(t)\n[coupling]\nV = Q^4/4+Q^2\nW = s^2/2\n"
        "[initial]\nq = 1\nq_dot = 0\nf = 1\nf_dot = 0\n[integration]\nt_end = 1\n");
    const XRhoSystem sys = xrho_system(scn);
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> pos(0.3, 2.0), vel(-1.5, 1.5), time(0.0, 20.0);
    std::bernoulli_distribution flip(0.5);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        PhysState s;
        s.t = time(rng);
        s.q = pos(rng) * (flip(rng) ? -1 : 1);
        s.f = pos(rng) * (flip(rng) ? -1 : 1);
        s.q_dot = vel(rng);
        s.f_dot = vel(rng);
        const DerivPhys d = rhs_phys(s, scn);
        const double m = 1 + 0.1 * std::sin(s.t), md = 0.1 * std::cos(s.t), mdd = -0.1 * std::sin(s.t);
        const double r = std::sqrt(m), rd = md / (2 * r), rdd = mdd / (2 * r) - md * md / (4 * m * r);
        const double want[] = {s.q_dot * r + s.q * rd, d.dq_dot * r + 2 * s.q_dot * rd + s.q * rdd,
                               s.f_dot * r + s.f * rd, d.df_dot * r + 2 * s.f_dot * rd + s.f * rdd};
        const XRhoState got = rhs_xrho(to_xrho(s, scn.mass), s.t, sys);
        const double have[] = {got.x, got.x_dot, got.rho, got.rho_dot};
        for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(have[k] - want[k]) / std::max(1.0, std::abs(want[k])));
    }
    return {worst <= 1e-9, fmt("max relative mismatch=%.3g over 100 states", worst)};
}

Outcome gauge_identity() {
    double worst = 0.0;
    for (const char* name : {"s1_harmonic", "s3_anharmonic_singular"}) {
        const Scenario scn = load_scenario(name);
        const PhysTrajectory traj = integrate_adaptive54(scn, 1e-10, 50.0, 0.05);
        if (!traj.ok() || traj.samples.size() < 1000) return {false, std::string(name) + " failed"};
        for (std::size_t i = 0; i < 1000; ++i) worst = std::max(worst, std::abs(gauge_residual(traj.samples[i], scn)));
    }
    return {worst < 1e-9, fmt("max residual=%.3g over 2x1000 states", worst)};
}

Outcome qframe_mapping() {
    const Scenario scn = load_scenario("s3_anharmonic_singular");
    const PhysTrajectory phys = integrate_adaptive54(scn, 1e-10, 60.0, 0.1);
    if (!phys.ok()) return {false, "physical integration failed"};
    std::vector<double> taus;
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i < phys.samples.size() && phys.samples[i].tau <= 20.0; ++i) {
        taus.push_back(phys.samples[i].tau);
        idx.push_back(i);
    }
    const QTrajectory direct = integrate_Q_adaptive(q_force(scn), to_qframe(scn.initial, scn.mass), 1e-10, taus);
    if (!direct.ok() || direct.samples.size() != taus.size() + 1) return {false, "direct integration failed"};
    double worst = 0.0;
    for (std::size_t k = 0; k < idx.size(); ++k) {
        const PhysState& s = phys.samples[idx[k]];
        worst = std::max(worst, std::abs(s.q / s.f - direct.samples[k + 1].Q));
    }
    return {worst < 1e-5, fmt("max |dQ|=%.3g over %g samples up to tau=%.4g", worst, double(taus.size()), taus.back())};
}

Outcome symbolic_derivatives() {
    ermakov::testing::ExprGenerator gen(2718);
    int trees = 0, tries = 0;
    double worst = 0.0;
    while (trees < 200 && tries < 5000) {
        ++tries;
        const Expr e = gen.tree(5);
        const auto samples = ermakov::testing::derivative_samples(e, gen, 100);
        if (samples.size() < 100) continue;
        ++trees;
        for (const auto& s : samples)
            worst = std::max(worst, std::abs(s.symbolic - s.finite_difference) / (1.0 + std::abs(s.symbolic)));
    }
    return {trees == 200 && worst < 1e-6, fmt("trees=%g max relative error=%.3g", trees, worst)};
}

Outcome quadrature() {
    const double v = quad([](double u) { return u * u * u; }, 1.0, 2.0, 1e-12);
    const auto f = [](double x) { return std::cos(3 * x) * std::exp(x); };
    bool anti = true;
    for (auto [a, b] : {std::pair{0.0, 1.0}, {-2.0, 0.7}, {1.3, 5.1}}) anti = anti && quad(f, b, a, 1e-10) == -quad(f, a, b, 1e-10);
    return {std::abs(v - 3.75) <= 1e-9 && anti, fmt("integral=%.15g antisymmetric=%g", v, anti)};
}

Outcome convergence() {
    const Scenario scn = load_scenario("s1_harmonic");
    // Closed form on this scenario: q = cos t, f = sqrt 2.
    const double T = 10.0;
    auto endpoint_error = [&](const PhysTrajectory& tr) {
        const PhysState& s = tr.samples.back();
        return std::hypot(s.q - std::cos(T), s.q_dot + std::sin(T));
    };
    std::vector<double> rk;
    for (double dt : {0.1, 0.05, 0.025}) rk.push_back(endpoint_error(integrate_fixed_rk4(scn, dt, T, 1.0)));
    std::vector<double> ad;
    for (double tol : {1e-6, 1e-8, 1e-10}) ad.push_back(endpoint_error(integrate_adaptive54(scn, tol, T, 1.0)));
    const double r1 = rk[0] / rk[1], r2 = rk[1] / rk[2];
    const bool rk_ok = r1 >= 8 && r1 <= 32 && r2 >= 8 && r2 <= 32;
    const bool ad_ok = ad[1] <= 2 * ad[0] && ad[2] <= 2 * ad[1];
    return {rk_ok && ad_ok, fmt("rk4 ratios=%.3g,%.3g", r1, r2) + fmt(" adaptive errors=%.3g,%.3g,%.3g", ad[0], ad[1], ad[2])};
}

Outcome verlet_bounded() {
    const Scenario scn = load_scenario("s3_anharmonic_singular");
    const QFrameState q0 = to_qframe(scn.initial, scn.mass);
    const QTrajectory traj = integrate_verlet_Q(q_force(scn), q0, 0.01, 1000.0, 1.0, singular_at_origin(scn));
    if (!traj.ok()) return {false, traj.meta.message};
    const double e0 = energy_Q(q0, *scn.potential_V, *scn.potential_W);
    std::vector<double> tau, drift;
    for (const auto& s : traj.samples) {
        tau.push_back(s.tau);
        drift.push_back(std::abs(energy_Q(s, *scn.potential_V, *scn.potential_W) - e0));
    }
    const double worst = *std::max_element(drift.begin(), drift.end());
    const auto [slope, se] = ermakov::testing::linear_fit_slope(tau, drift);
    return {worst < 1e-3 && std::abs(slope) <= 2 * se, fmt("max |dE|=%.3g slope=%.3g se=%.3g", worst, slope, se)};
}

Outcome cli_determinism() {
    const std::string cfg = ermakov::testing::scenario_path("s2_time_dependent_mass").string();
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    const int ca = run_cli({"simulate", "--config", cfg, "--out", a.string()});
    const int cb = run_cli({"simulate", "--config", cfg, "--out", b.string()});
    const std::string ta = slurp(a / "trajectory.csv"), tb = slurp(b / "trajectory.csv");
    const bool same = !ta.empty() && ta == tb;
    fs::remove_all(a);
    fs::remove_all(b);
    return {ca == 0 && cb == 0 && same, fmt("exit codes %g,%g identical=%g", ca, cb, same)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"AC1 harmonic invariant conserved", s1_conservation},
        {"AC2 physical and Q-frame invariants agree", frame_equality},
        {"AC3 rescaled-frame RHS matches transformed physical RHS", rescaled_rhs},
        {"AC4 gauge identity along trajectories", gauge_identity},
        {"AC5 mapped and direct Q-frame trajectories agree", qframe_mapping},
        {"AC6 symbolic derivatives match finite differences", symbolic_derivatives},
        {"AC7 quadrature accuracy and antisymmetry", quadrature},
        {"AC8 integrator convergence", convergence},
        {"AC9 Verlet energy stays bounded", verlet_bounded},
        {"AC10 CLI output is deterministic", cli_determinism},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
