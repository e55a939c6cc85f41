#include "ermakov/config.hpp"
#include "ermakov/expr.hpp"
#include "ermakov/func1.hpp"
#include "ermakov/integrate.hpp"
#include "ermakov/invariants.hpp"
#include "ermakov/model.hpp"
#include "ermakov/quadrature.hpp"

#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>
#include <string>

namespace {

ermakov::Scenario scenario(const std::string& name) {
    std::ifstream in(std::string(ERMAKOV_SCENARIO_DIR) + "/" + name + ".cfg");
    std::stringstream ss;
    ss << in.rdbuf();
    return ermakov::build_scenario(ermakov::ConfigDocument::parse(ss.str()));
}

const char* const names[] = {"s1_harmonic", "s2_time_dependent_mass", "s3_anharmonic_singular"};

void BM_Adaptive54(benchmark::State& state) {
    const auto scn = scenario(names[state.range(0)]);
    for (auto _ : state) benchmark::DoNotOptimize(ermakov::integrate_physical(scn));
    state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_Adaptive54)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Rk4(benchmark::State& state) {
    const auto scn = scenario("s1_harmonic");
    const double dt = 0.1 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(ermakov::integrate_fixed_rk4(scn, dt, scn.plan.t_end, 0.1));
}
BENCHMARK(BM_Rk4)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond);

void BM_VerletQ(benchmark::State& state) {
    const auto scn = scenario("s3_anharmonic_singular");
    const auto q0 = ermakov::to_qframe(scn.initial, scn.mass);
    const auto force = ermakov::q_force(scn);
    for (auto _ : state) benchmark::DoNotOptimize(ermakov::integrate_verlet_Q(force, q0, 0.01, 100.0, 1.0, true));
}
BENCHMARK(BM_VerletQ)->Unit(benchmark::kMillisecond);

void BM_DriftReport(benchmark::State& state) {
    const auto scn = scenario(names[state.range(0)]);
    const auto traj = ermakov::integrate_physical(scn);
    for (auto _ : state) benchmark::DoNotOptimize(ermakov::drift_report(traj, scn, 1e-10));
    state.SetLabel(names[state.range(0)]);
}
BENCHMARK(BM_DriftReport)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_Quad(benchmark::State& state) {
    const auto f = ermakov::compile("u^3+sin(u)", "u");
    for (auto _ : state) benchmark::DoNotOptimize(ermakov::quad(f, 0.0, 2.0, 1e-12));
}
BENCHMARK(BM_Quad);

void BM_ParseDifferentiate(benchmark::State& state) {
    for (auto _ : state) {
        auto e = ermakov::parse("exp(-x^2/2)*sin(3*x)+ln(1+x^2)/(x^2+2)", "x");
        benchmark::DoNotOptimize(ermakov::simplify(ermakov::differentiate(e)));
    }
}
BENCHMARK(BM_ParseDifferentiate);

} // namespace

BENCHMARK_MAIN();
