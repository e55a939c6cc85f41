#include "commands.hpp"

#include "ermakov/config.hpp"
#include "ermakov/errors.hpp"
#include "ermakov/integrate.hpp"
#include "ermakov/invariants.hpp"
#include "ermakov/model.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <sstream>
#include <thread>

namespace ermakov::cli {

using nlohmann::json;

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

using Clock = std::chrono::steady_clock;

constexpr const char* trajectory_header = "t,tau,q,q_dot,f,f_dot,Q,Q_prime,E_phys,E_Q";

double elapsed_ms(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

int exit_code_for(ode::Status s) {
    switch (s) {
    case ode::Status::ok: return exit_ok;
    case ode::Status::singularity:
    case ode::Status::step_underflow: return exit_singularity;
    case ode::Status::domain_error: return exit_integrator_failure;
    }
    return exit_integrator_failure;
}

json state_json(const PhysState& s) {
    return {{"t", s.t}, {"tau", s.tau}, {"q", s.q}, {"q_dot", s.q_dot}, {"f", s.f}, {"f_dot", s.f_dot}};
}

json scenario_json(const Scenario& scn) {
    json j;
    j["m"] = to_string(scn.mass.expr());
    j["omega_tilde_sq"] = to_string(scn.omega_tilde_sq.expr());
    j["F"] = to_string(scn.coupling_F.expr());
    j["G"] = to_string(scn.coupling_G.expr());
    j["V"] = scn.potential_V ? json(to_string(scn.potential_V->expr())) : json(nullptr);
    j["W"] = scn.potential_W ? json(to_string(scn.potential_W->expr())) : json(nullptr);
    j["initial"] = state_json(scn.initial);
    j["plan"] = {{"method", std::string(to_string(scn.plan.method))},
                 {"t_end", scn.plan.t_end},
                 {"dt", scn.plan.dt},
                 {"tol", scn.plan.tol},
                 {"output_stride", scn.plan.output_stride}};
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

/// Shared bookkeeping: every command run ends with a manifest.
class Run {
public:
    Run(std::string command, const CommonOptions& opt, std::ostream& err)
        : command_(std::move(command)), opt_(opt), err_(err), start_(Clock::now()) {
        manifest_["command"] = command_;
        manifest_["config_path"] = opt.config_path.string();
        manifest_["overrides"] = opt.overrides;
        manifest_["outputs"] = json::array();
    }

    /// Loads and validates the scenario. Returns nullopt after reporting a config error.
    std::optional<Scenario> load() {
        try {
            std::filesystem::create_directories(opt_.out_dir);
        } catch (const std::exception& e) {
            err_ << "error: cannot create output directory: " << e.what() << "\n";
            return std::nullopt;
        }
        try {
            ConfigDocument doc = ConfigDocument::load(opt_.config_path);
            for (const auto& o : opt_.overrides) doc.apply_override(o);
            manifest_["config_text"] = doc.to_text();
            Scenario scn = build_scenario(doc);
            manifest_["scenario"] = scenario_json(scn);
            return scn;
        } catch (const Error& e) {
            fail(exit_config_error, std::string("config error: ") + e.what());
            return std::nullopt;
        }
    }

    void output(const std::string& name) { manifest_["outputs"].push_back(name); }
    const std::filesystem::path& dir() const { return opt_.out_dir; }
    json& manifest() { return manifest_; }

    void fail(int code, const std::string& message) {
        code_ = code;
        manifest_["message"] = message;
        err_ << "error: " << message << "\n";
    }

    void trajectory_status(const PhysTrajectory& traj) {
        manifest_["status"] = std::string(ode::to_string(traj.meta.status));
        if (!traj.ok()) {
            manifest_["last_valid_state"] = state_json(traj.last_valid());
            fail(exit_code_for(traj.meta.status), "integration stopped: " + traj.meta.message);
        }
    }

    int code() const { return code_; }
    void set_code(int c) { code_ = c; }

    int finish() {
        manifest_["exit_status"] = code_;
        manifest_["wall_ms"] = elapsed_ms(start_);
        try {
            write_json(opt_.out_dir / "manifest.json", manifest_);
        } catch (const std::exception& e) {
            err_ << "error: " << e.what() << "\n";
        }
        return code_;
    }

private:
    std::string command_;
    const CommonOptions& opt_;
    std::ostream& err_;
    Clock::time_point start_;
    json manifest_;
    int code_ = exit_ok;
};

struct SimulationResult {
    PhysTrajectory traj;
    std::optional<InvariantReport> report;
};

// Integrates, evaluates invariants, writes trajectory.csv and report.json.
std::optional<SimulationResult> simulate_and_write(Run& run, const Scenario& scn, const CommonOptions& opt,
                                                   json* report_extra) {
    SimulationResult res;
    try {
        res.traj = integrate_physical(scn);
    } catch (const ConfigError& e) {
        run.fail(exit_config_error, std::string("config error: ") + e.what());
        return std::nullopt;
    }
    run.trajectory_status(res.traj);

    InvariantOptions iopt;
    iopt.quad_tol = opt.quad_tol;
    try {
        res.report = drift_report(res.traj, scn, iopt);
    } catch (const Error& e) {
        if (run.code() == exit_ok) run.fail(exit_integrator_failure, std::string("invariant evaluation: ") + e.what());
    }

    std::string csv = std::string(trajectory_header) + "\n";
    for (std::size_t i = 0; i < res.traj.samples.size(); ++i) {
        const PhysState& s = res.traj.samples[i];
        double Q = std::nan("");
        double Qp = std::nan("");
        try {
            const QFrameState qs = to_qframe(s, scn.mass);
            Q = qs.Q;
            Qp = qs.Q_prime;
        } catch (const Error&) {
        }
        const double ep = res.report ? res.report->e_phys[i] : std::nan("");
        const double eq = res.report ? res.report->e_Q[i] : std::nan("");
        for (double v : {s.t, s.tau, s.q, s.q_dot, s.f, s.f_dot, Q, Qp, ep}) csv += format_number(v) + ",";
        csv += format_number(eq) + "\n";
    }
    write_text(run.dir() / "trajectory.csv", csv);
    run.output("trajectory.csv");

    json rep;
    if (res.report) {
        const InvariantReport& r = *res.report;
        rep["e0"] = r.e0;
        rep["max_abs_drift"] = r.max_abs_drift;
        rep["max_rel_drift"] = r.max_rel_drift ? json(*r.max_rel_drift) : json(nullptr);
        rep["samples"] = r.samples;
        rep["frame_gap"] = r.frame_gap;
        rep["invariant_convention"] = {
            {"u_ref", r.u_ref},
            {"v_ref", r.v_ref},
            {"frame_check", std::string(InvariantEvaluator(scn, iopt).frame_check_mode())},
            {"note", "physical-frame invariant is defined up to an additive constant fixed by u_ref and v_ref"}};
    } else {
        rep["e0"] = nullptr;
        rep["samples"] = res.traj.samples.size();
    }
    rep["method"] = std::string(to_string(res.traj.meta.method));
    rep["dt_or_tol"] = res.traj.meta.dt_or_tol;
    rep["steps"] = res.traj.meta.steps;
    rep["rejected_steps"] = res.traj.meta.rejected;
    rep["status"] = std::string(ode::to_string(res.traj.meta.status));
    if (!res.traj.meta.message.empty()) rep["message"] = res.traj.meta.message;
    if (report_extra) rep.update(*report_extra);
    write_json(run.dir() / "report.json", rep);
    run.output("report.json");
    return res;
}

int guarded_command(Run& run, std::ostream& err, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        run.set_code(exit_integrator_failure);
        run.manifest()["message"] = e.what();
    }
    return run.finish();
}

std::string csv_qframe(const std::vector<QFrameState>& rows) {
    std::string csv = "tau,Q,Q_prime\n";
    for (const auto& r : rows) csv += format_number(r.tau) + "," + format_number(r.Q) + "," + format_number(r.Q_prime) + "\n";
    return csv;
}

} // namespace

int cmd_simulate(const CommonOptions& opt, std::ostream& err) {
    Run run("simulate", opt, err);
    const auto scn = run.load();
    if (!scn) return run.finish();
    return guarded_command(run, err, [&] { simulate_and_write(run, *scn, opt, nullptr); });
}

int cmd_check(const CheckOptions& opt, std::ostream& err) {
    Run run("check", opt, err);
    const auto scn = run.load();
    if (!scn) return run.finish();
    return guarded_command(run, err, [&] {
        // Evaluate first so the verdict lands in report.json.
        json extra;
        extra["check"] = {{"max_drift", opt.max_drift}};
        auto res = simulate_and_write(run, *scn, opt, nullptr);
        if (!res || !res->report) return;
        const InvariantReport& r = *res->report;
        const double drift = r.max_rel_drift.value_or(r.max_abs_drift);
        const bool passed = drift <= opt.max_drift;
        extra["check"]["drift"] = drift;
        extra["check"]["measure"] = r.max_rel_drift ? "relative" : "absolute";
        extra["check"]["passed"] = passed;
        std::ifstream in(run.dir() / "report.json");
        json rep = json::parse(in);
        rep.update(extra);
        write_json(run.dir() / "report.json", rep);
        if (run.code() == exit_ok && !passed) {
            run.set_code(exit_drift_exceeded);
            run.manifest()["message"] = "drift " + format_number(drift) + " exceeds " + format_number(opt.max_drift);
            err << "check failed: drift " << format_number(drift) << " > " << format_number(opt.max_drift) << "\n";
        }
    });
}

int cmd_map(const CommonOptions& opt, std::ostream& err) {
    Run run("map", opt, err);
    const auto scn = run.load();
    if (!scn) return run.finish();
    return guarded_command(run, err, [&] {
        PhysTrajectory traj;
        try {
            traj = integrate_physical(*scn);
        } catch (const ConfigError& e) {
            run.fail(exit_config_error, std::string("config error: ") + e.what());
            return;
        }
        run.trajectory_status(traj);

        std::vector<QFrameState> mapped;
        for (const auto& s : traj.samples) mapped.push_back(to_qframe(s, scn->mass));
        write_text(run.dir() / "qframe_mapped.csv", csv_qframe(mapped));
        run.output("qframe_mapped.csv");

        std::vector<double> taus;
        for (std::size_t i = 1; i < mapped.size(); ++i) taus.push_back(mapped[i].tau);
        const QTrajectory direct = integrate_Q_adaptive(q_force(*scn), mapped.front(), scn->plan.tol, taus);
        write_text(run.dir() / "qframe_direct.csv", csv_qframe(direct.samples));
        run.output("qframe_direct.csv");

        const std::size_t n = std::min(mapped.size(), direct.samples.size());
        double gap_Q = 0.0;
        double gap_Qp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            gap_Q = std::max(gap_Q, std::abs(mapped[i].Q - direct.samples[i].Q));
            gap_Qp = std::max(gap_Qp, std::abs(mapped[i].Q_prime - direct.samples[i].Q_prime));
        }
        json gap = {{"max_abs_dQ", gap_Q},
                    {"max_abs_dQ_prime", gap_Qp},
                    {"matched_samples", n},
                    {"tau_end", mapped[n - 1].tau},
                    {"direct_method", "adaptive54"},
                    {"direct_tol", scn->plan.tol},
                    {"direct_status", std::string(ode::to_string(direct.meta.status))}};
        write_json(run.dir() / "gap.json", gap);
        run.output("gap.json");
        if (!direct.ok() && run.code() == exit_ok)
            run.fail(exit_code_for(direct.meta.status), "direct Q-frame integration stopped: " + direct.meta.message);
    });
}

int cmd_convert(const ConvertOptions& opt, std::ostream& out, std::ostream& err) {
    const int given = int(opt.V.has_value()) + int(opt.W.has_value()) + int(opt.F.has_value()) + int(opt.G.has_value());
    if (given != 1) {
        err << "error: convert needs exactly one of --V, --W, --F (with --h-from-F), --G (with --g-from-G)\n";
        return exit_config_error;
    }
    if ((opt.F && !opt.h_from_F) || (opt.G && !opt.g_from_G) || (opt.h_from_F && !opt.F) ||
        (opt.g_from_G && !opt.G)) {
        err << "error: --F requires --h-from-F and --G requires --g-from-G\n";
        return exit_config_error;
    }
    try {
        Func1 result;
        if (opt.V) result = F_from_V(compile(*opt.V, "Q"));
        else if (opt.W) result = G_from_W(compile(*opt.W, "s"));
        else if (opt.F) result = h_from_F(compile(*opt.F, "u"));
        else result = g_from_G(compile(*opt.G, "v"));
        out << to_string(simplify(result.expr())) << "\n";
        return exit_ok;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }
}

namespace {

struct BenchRow {
    Method method;
    double param;
    double drift = std::nan("");
    std::size_t steps = 0;
    double wall_ms = 0.0;
    std::string status = "ok";
};

void run_bench_row(BenchRow& row, const Scenario& scn, const BenchOptions& opt) {
    const auto start = Clock::now();
    try {
        InvariantOptions iopt;
        iopt.quad_tol = opt.quad_tol;
        if (row.method == Method::verlet) {
            const QFrameState q0 = to_qframe(scn.initial, scn.mass);
            const double tau_end = opt.tau_end.value_or(scn.plan.t_end - scn.initial.t);
            const QTrajectory traj = integrate_verlet_Q(q_force(scn), q0, row.param, tau_end, row.param, singular_at_origin(scn));
            row.steps = traj.meta.steps;
            // Energy in the autonomous frame: potentials, or reconstructed from the couplings.
            Antiderivative uF([&](double u) { return u * scn.coupling_F(u); }, default_reference(scn.coupling_F),
                              opt.quad_tol);
            Antiderivative vG([&](double v) { return v * scn.coupling_G(v); }, default_reference(scn.coupling_G),
                              opt.quad_tol);
            auto energy = [&](const QFrameState& s) {
                if (scn.has_potentials()) return energy_Q(s, *scn.potential_V, *scn.potential_W);
                double e = 0.5 * s.Q_prime * s.Q_prime;
                if (!scn.coupling_F.is_zero()) e += uF(s.Q);
                if (!scn.coupling_G.is_zero()) e += vG(1.0 / s.Q);
                return e;
            };
            const double e0 = energy(traj.samples.front());
            double worst = 0.0;
            for (const auto& s : traj.samples) worst = std::max(worst, std::abs(energy(s) - e0));
            row.drift = std::abs(e0) >= 1e-12 ? worst / std::abs(e0) : worst;
            if (!traj.ok()) row.status = std::string(ode::to_string(traj.meta.status));
        } else {
            IntegrationPlan plan = scn.plan;
            plan.method = row.method;
            if (row.method == Method::rk4) plan.dt = row.param;
            else plan.tol = row.param;
            const PhysTrajectory traj = integrate_physical(scn, plan);
            row.steps = traj.meta.steps;
            const InvariantReport r = drift_report(traj, scn, iopt);
            row.drift = r.max_rel_drift.value_or(r.max_abs_drift);
            if (!traj.ok()) row.status = std::string(ode::to_string(traj.meta.status));
        }
    } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
    }
    row.wall_ms = elapsed_ms(start);
}

std::string csv_field(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

} // namespace

int cmd_bench(const BenchOptions& opt, std::ostream& err) {
    Run run("bench", opt, err);
    std::vector<BenchRow> rows;
    for (double v : opt.rk4_dts) rows.push_back({Method::rk4, v});
    for (double v : opt.adaptive_tols) rows.push_back({Method::adaptive54, v});
    for (double v : opt.verlet_dts) rows.push_back({Method::verlet, v});
    if (rows.empty()) {
        run.fail(exit_config_error, "bench grid is empty; pass --rk4, --adaptive and/or --verlet values");
        return run.finish();
    }
    const auto scn = run.load();
    if (!scn) return run.finish();
    return guarded_command(run, err, [&] {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t jobs = opt.jobs ? opt.jobs : hw;
        for (std::size_t begin = 0; begin < rows.size(); begin += jobs) {
            std::vector<std::future<void>> pending;
            for (std::size_t i = begin; i < std::min(rows.size(), begin + jobs); ++i)
                pending.push_back(std::async(std::launch::async, [&, i] { run_bench_row(rows[i], *scn, opt); }));
            for (auto& f : pending) f.get();
        }
        std::string csv = "method,dt_or_tol,max_rel_drift,steps,wall_ms,status\n";
        std::size_t succeeded = 0;
        for (const auto& r : rows) {
            if (r.status == "ok") ++succeeded;
            csv += std::string(to_string(r.method)) + "," + format_number(r.param) + "," + format_number(r.drift) + "," +
                   std::to_string(r.steps) + "," + format_number(r.wall_ms) + "," + csv_field(r.status) + "\n";
        }
        write_text(run.dir() / "bench.csv", csv);
        run.output("bench.csv");
        run.manifest()["rows"] = rows.size();
        run.manifest()["rows_succeeded"] = succeeded;
        if (succeeded == 0) run.fail(exit_integrator_failure, "every bench row failed");
    });
}

namespace {

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) throw CLI::ValidationError("list", "bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

void add_common(CLI::App& sub, CommonOptions& opt) {
    sub.add_option("--config", opt.config_path, "Scenario file")->required();
    sub.add_option("--out", opt.out_dir, "Output directory")->capture_default_str();
    sub.add_option("--set", opt.overrides, "Override section.key=value (repeatable)");
    sub.add_option("--quad-tol", opt.quad_tol, "Quadrature tolerance for the invariant integrals")
        ->capture_default_str();
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Ermakov / Ray-Reid oscillator simulator and invariant checker", "ermakov"};
    app.require_subcommand(1);

    CommonOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate a scenario; write trajectory.csv and report.json");
    add_common(*simulate, sim);

    CheckOptions chk;
    auto* check = app.add_subcommand("check", "Integrate and fail (exit 1) when the invariant drift is too large");
    add_common(*check, chk);
    check->add_option("--max-drift", chk.max_drift, "Drift threshold")->capture_default_str();

    CommonOptions mp;
    auto* map = app.add_subcommand("map", "Compare the mapped and the directly integrated Q-frame trajectories");
    add_common(*map, mp);

    ConvertOptions conv;
    auto* convert = app.add_subcommand("convert", "Convert between potential and coupling representations");
    convert->add_option("--V", conv.V, "V(Q): print F(u) = V'(u)/u");
    convert->add_option("--W", conv.W, "W(s): print G(v) = W'(v)/v");
    convert->add_option("--F", conv.F, "F(u), with --h-from-F");
    convert->add_option("--G", conv.G, "G(v), with --g-from-G");
    convert->add_flag("--h-from-F", conv.h_from_F, "print h(u) = u F(u)");
    convert->add_flag("--g-from-G", conv.g_from_G, "print g(v) = v G(v)");

    BenchOptions bn;
    std::string rk4_list, adaptive_list, verlet_list;
    auto* bench = app.add_subcommand("bench", "Drift versus cost over a grid of methods and step sizes");
    add_common(*bench, bn);
    bench->add_option("--rk4", rk4_list, "Comma-separated rk4 step sizes");
    bench->add_option("--adaptive", adaptive_list, "Comma-separated adaptive54 tolerances");
    bench->add_option("--verlet", verlet_list, "Comma-separated Q-frame Verlet step sizes");
    bench->add_option("--tau-end", bn.tau_end, "Q-frame horizon for verlet rows");
    bench->add_option("--jobs", bn.jobs, "Worker threads (0 = hardware concurrency)");

    try {
        app.parse(argc, argv);
        if (bench->parsed()) {
            bn.rk4_dts = parse_list(rk4_list);
            bn.adaptive_tols = parse_list(adaptive_list);
            bn.verlet_dts = parse_list(verlet_list);
        }
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_config_error;
    }

    if (simulate->parsed()) return cmd_simulate(sim, err);
    if (check->parsed()) return cmd_check(chk, err);
    if (map->parsed()) return cmd_map(mp, err);
    if (convert->parsed()) return cmd_convert(conv, out, err);
    return cmd_bench(bn, err);
}

} // namespace ermakov::cli
