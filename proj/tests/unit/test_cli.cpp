#include "commands.hpp"
#include "ermakov/expr.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using ermakov::testing::scenario_path;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "ermakov");
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    std::ostringstream out, err;
    const int code = ermakov::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("ermakov_cli_" + std::string(info->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path out(const std::string& sub = "out") const { return dir_ / sub; }

    fs::path write_config(const std::string& name, const std::string& text) const {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<std::vector<double>> read_csv(const fs::path& p, std::string* header = nullptr) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    if (header) *header = line;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        rows.push_back(row);
    }
    return rows;
}

std::string s1() { return scenario_path("s1_harmonic").string(); }
std::string s2() { return scenario_path("s2_time_dependent_mass").string(); }
std::string s3() { return scenario_path("s3_anharmonic_singular").string(); }

constexpr const char* free_particle = R"([functions]
m = 1
omega_tilde_sq = 0
[coupling]
V = 0
W = 0
[initial]
q = 1
q_dot = 0.5
f = 1
f_dot = 0
[integration]
t_end = 5
output_stride = 0.5
)";

} // namespace

TEST_F(Cli, SimulateWritesTrajectoryReportAndManifest) {
    const Result r = cli({"simulate", "--config", s1(), "--out", out().string()});
    ASSERT_EQ(r.code, 0) << r.err;
    std::string header;
    const auto rows = read_csv(out() / "trajectory.csv", &header);
    EXPECT_EQ(header, "t,tau,q,q_dot,f,f_dot,Q,Q_prime,E_phys,E_Q");
    ASSERT_EQ(rows.size(), 501u);
    for (const auto& row : rows) {
        ASSERT_EQ(row.size(), 10u);
        EXPECT_NEAR(row[8], 1.0, 1e-8);
    }
    const json rep = read_json(out() / "report.json");
    for (const char* key : {"e0", "max_abs_drift", "max_rel_drift", "samples", "frame_gap", "method", "dt_or_tol",
                            "steps", "rejected_steps", "status", "invariant_convention"})
        EXPECT_TRUE(rep.contains(key)) << key;
    EXPECT_EQ(rep["samples"], 501);
    const json man = read_json(out() / "manifest.json");
    EXPECT_EQ(man["command"], "simulate");
    EXPECT_EQ(man["exit_status"], 0);
    EXPECT_TRUE(man.contains("wall_ms"));
    EXPECT_TRUE(man.contains("config_text"));
    EXPECT_TRUE(man.contains("scenario"));
}

TEST_F(Cli, SimulateIsBitReproducible) {
    ASSERT_EQ(cli({"simulate", "--config", s2(), "--out", out("a").string()}).code, 0);
    ASSERT_EQ(cli({"simulate", "--config", s2(), "--out", out("b").string()}).code, 0);
    EXPECT_EQ(slurp(out("a") / "trajectory.csv"), slurp(out("b") / "trajectory.csv"));
    EXPECT_EQ(slurp(out("a") / "report.json"), slurp(out("b") / "report.json"));
}

TEST_F(Cli, ConflictingCouplingsAreAConfigError) {
    const Result r = cli({"simulate", "--config", s1(), "--out", out().string(), "--set", "coupling.F=4"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("V"), std::string::npos);
    EXPECT_NE(r.err.find("F"), std::string::npos);
    EXPECT_EQ(read_json(out() / "manifest.json")["exit_status"], 2);
}

TEST_F(Cli, CollapseIntoTheSingularityExitsThree) {
    const Result r = cli({"simulate", "--config", s1(), "--out", out().string(), "--set", "coupling.V=0", "--set",
                          "coupling.W=-s^2/2", "--set", "initial.f=1"});
    EXPECT_EQ(r.code, 3) << r.err;
    const json man = read_json(out() / "manifest.json");
    ASSERT_TRUE(man.contains("last_valid_state"));
    EXPECT_GT(std::abs(man["last_valid_state"]["q"].get<double>()), 1e-10);
    EXPECT_TRUE(fs::exists(out() / "trajectory.csv"));
}

TEST_F(Cli, CheckPassesForTightTolerance) {
    EXPECT_EQ(cli({"check", "--config", s1(), "--out", out().string()}).code, 0);
    EXPECT_EQ(read_json(out() / "report.json")["check"]["passed"], true);
}

TEST_F(Cli, CheckFailsForCoarseRk4) {
    const Result r = cli({"check", "--config", s1(), "--out", out().string(), "--set", "integration.method=rk4", "--set",
                          "integration.dt=0.5", "--set", "integration.output_stride=0.5"});
    EXPECT_EQ(r.code, 1) << r.err;
    EXPECT_TRUE(fs::exists(out() / "trajectory.csv"));
    const json rep = read_json(out() / "report.json");
    EXPECT_EQ(rep["check"]["passed"], false);
    EXPECT_GT(rep["check"]["drift"].get<double>(), 1e-6);

    // The reference integrator on the same grid stays far below the threshold.
    ASSERT_EQ(cli({"check", "--config", s1(), "--out", out("ref").string(), "--set", "integration.output_stride=0.5"}).code, 0);
    const auto coarse = read_csv(out() / "trajectory.csv");
    const auto ref = read_csv(out("ref") / "trajectory.csv");
    ASSERT_EQ(coarse.size(), ref.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) worst = std::max(worst, std::abs(coarse[i][8] - ref[i][8]));
    EXPECT_GT(worst, 1e-6);
}

TEST_F(Cli, CheckVacuousThreshold) {
    EXPECT_EQ(cli({"check", "--config", s1(), "--out", out().string(), "--max-drift", "1e300", "--set",
                   "integration.method=rk4", "--set", "integration.dt=0.5", "--set", "integration.output_stride=0.5"})
                  .code,
              0);
}

TEST_F(Cli, VerletIsRejectedForPhysicalFrameCommands) {
    for (const char* cmd : {"simulate", "check", "map"})
        EXPECT_EQ(cli({cmd, "--config", s1(), "--out", out().string(), "--set", "integration.method=verlet"}).code, 2);
}

TEST_F(Cli, MapAgreesWithDirectIntegration) {
    for (const auto& cfg : {s1(), s3()}) {
        ASSERT_EQ(cli({"map", "--config", cfg, "--out", out().string()}).code, 0);
        const json gap = read_json(out() / "gap.json");
        EXPECT_LT(gap["max_abs_dQ"].get<double>(), 1e-5) << cfg;
        std::string h1, h2;
        const auto mapped = read_csv(out() / "qframe_mapped.csv", &h1);
        const auto direct = read_csv(out() / "qframe_direct.csv", &h2);
        EXPECT_EQ(h1, "tau,Q,Q_prime");
        EXPECT_EQ(h2, "tau,Q,Q_prime");
        ASSERT_EQ(mapped.size(), direct.size());
        for (std::size_t i = 0; i < mapped.size(); ++i) EXPECT_EQ(mapped[i][0], direct[i][0]);
    }
}

TEST_F(Cli, MapFreeParticleIsLinearInTau) {
    const fs::path cfg = write_config("free.cfg", free_particle);
    ASSERT_EQ(cli({"map", "--config", cfg.string(), "--out", out().string()}).code, 0);
    for (const char* file : {"qframe_mapped.csv", "qframe_direct.csv"}) {
        const auto rows = read_csv(out() / file);
        ASSERT_GT(rows.size(), 3u);
        for (const auto& row : rows) {
            EXPECT_NEAR(row[1], 1.0 + 0.5 * row[0], 1e-8) << file;
            EXPECT_NEAR(row[2], 0.5, 1e-8) << file;
        }
    }
}

TEST_F(Cli, MapDegenerateSpan) {
    ASSERT_EQ(cli({"map", "--config", s1(), "--out", out().string(), "--set", "integration.t_end=0"}).code, 0);
    EXPECT_EQ(read_csv(out() / "qframe_mapped.csv").size(), 1u);
    EXPECT_EQ(read_csv(out() / "qframe_direct.csv").size(), 1u);
    const json gap = read_json(out() / "gap.json");
    EXPECT_EQ(gap["max_abs_dQ"], 0.0);
    EXPECT_EQ(gap["matched_samples"], 1);
}

TEST_F(Cli, ConvertRepresentations) {
    auto value_of = [](const std::string& text, const char* var, double x) {
        std::string t = text;
        while (!t.empty() && t.back() == '\n') t.pop_back();
        return ermakov::eval(ermakov::parse(t, var), x);
    };
    const Result f = cli({"convert", "--V", "2*Q^2"});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_EQ(f.out, "4\n");
    const Result g = cli({"convert", "--W", "s^2/2"});
    ASSERT_EQ(g.code, 0);
    for (double v : {-2.0, 0.5, 3.0}) EXPECT_DOUBLE_EQ(value_of(g.out, "v", v), 1.0);
    const Result h = cli({"convert", "--F", "u^2", "--h-from-F"});
    ASSERT_EQ(h.code, 0);
    for (double u : {-1.5, 0.3, 2.0}) EXPECT_DOUBLE_EQ(value_of(h.out, "u", u), u * u * u);
    const Result gg = cli({"convert", "--G", "v^2", "--g-from-G"});
    ASSERT_EQ(gg.code, 0);
    EXPECT_DOUBLE_EQ(value_of(gg.out, "v", 2.0), 8.0);
}

TEST_F(Cli, ConvertValidation) {
    EXPECT_EQ(cli({"convert"}).code, 2);
    EXPECT_EQ(cli({"convert", "--V", "Q^2", "--W", "s^2"}).code, 2);
    EXPECT_EQ(cli({"convert", "--F", "u^2"}).code, 2);
    EXPECT_EQ(cli({"convert", "--V", "q^2"}).code, 2);
    EXPECT_EQ(cli({"convert", "--V", "Q^"}).code, 2);
}

TEST_F(Cli, BenchRk4ConvergesAtHighOrder) {
    ASSERT_EQ(cli({"bench", "--config", s1(), "--out", out().string(), "--rk4", "0.1,0.05,0.025", "--jobs", "3"}).code, 0);
    std::ifstream in(out() / "bench.csv");
    std::string header, line;
    std::getline(in, header);
    EXPECT_EQ(header, "method,dt_or_tol,max_rel_drift,steps,wall_ms,status");
    std::vector<double> drift;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string c;
        while (std::getline(ss, c, ',')) cells.push_back(c);
        ASSERT_EQ(cells.size(), 6u);
        EXPECT_EQ(cells[0], "rk4");
        EXPECT_EQ(cells[5], "ok");
        drift.push_back(std::stod(cells[2]));
    }
    ASSERT_EQ(drift.size(), 3u);
    for (std::size_t i = 1; i < drift.size(); ++i) {
        const double ratio = drift[i - 1] / drift[i];
        EXPECT_GE(ratio, 8.0);
        EXPECT_LE(ratio, 32.0);
    }
}

TEST_F(Cli, BenchVerletStaysBounded) {
    ASSERT_EQ(cli({"bench", "--config", s3(), "--out", out().string(), "--verlet", "0.01", "--tau-end", "1000"}).code, 0);
    const auto rows = read_csv(out() / "bench.csv");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_LT(rows[0][2], 1e-3);
    EXPECT_EQ(rows[0][3], 100000.0);
}

TEST_F(Cli, BenchRowsKeepGridOrder) {
    ASSERT_EQ(cli({"bench", "--config", s1(), "--out", out().string(), "--rk4", "0.1", "--adaptive", "1e-6,1e-8",
                   "--verlet", "0.05", "--jobs", "4"})
                  .code,
              0);
    std::ifstream in(out() / "bench.csv");
    std::string line;
    std::getline(in, line);
    std::vector<std::string> methods;
    while (std::getline(in, line)) methods.push_back(line.substr(0, line.find(',')));
    EXPECT_EQ(methods, (std::vector<std::string>{"rk4", "adaptive54", "adaptive54", "verlet"}));
}

TEST_F(Cli, BenchEmptyGrid) {
    EXPECT_EQ(cli({"bench", "--config", s1(), "--out", out().string()}).code, 2);
}

TEST_F(Cli, BadArguments) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"simulate"}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"simulate", "--config", (dir_ / "missing.cfg").string(), "--out", out().string()}).code, 2);
    EXPECT_EQ(cli({"simulate", "--config", s1(), "--out", out().string(), "--set", "integration.warp=9"}).code, 2);
    EXPECT_EQ(cli({"bench", "--config", s1(), "--out", out().string(), "--rk4", "0.1,abc"}).code, 2);
}

TEST_F(Cli, BinaryPropagatesExitCodes) {
    const std::string bin = ERMAKOV_CLI_PATH;
    auto status = [](const std::string& cmd) {
        const int raw = std::system((cmd + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    EXPECT_EQ(status(bin + " check --config " + s1() + " --out " + out().string()), 0);
    EXPECT_EQ(status(bin + " check --config " + s1() + " --out " + out().string() +
                     " --set integration.method=rk4 --set integration.dt=0.5 --set integration.output_stride=0.5"),
              1);
    EXPECT_EQ(status(bin + " simulate --config " + s1() + " --out " + out().string() + " --set coupling.F=4"), 2);
}
