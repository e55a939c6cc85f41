#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ermakov::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_drift_exceeded = 1,
    exit_config_error = 2,
    exit_singularity = 3,
    exit_integrator_failure = 4,
};

struct CommonOptions {
    std::filesystem::path config_path;
    std::filesystem::path out_dir = ".";
    std::vector<std::string> overrides;  // section.key=value
    double quad_tol = 1e-10;
};

struct CheckOptions : CommonOptions {
    double max_drift = 1e-6;
};

struct ConvertOptions {
    std::optional<std::string> V;
    std::optional<std::string> W;
    std::optional<std::string> F;
    std::optional<std::string> G;
    bool h_from_F = false;
    bool g_from_G = false;
};

struct BenchOptions : CommonOptions {
    std::vector<double> rk4_dts;
    std::vector<double> adaptive_tols;
    std::vector<double> verlet_dts;
    std::optional<double> tau_end;  // verlet rows; defaults to integration.t_end
    unsigned jobs = 0;              // 0: hardware concurrency
};

// Each command writes its data files into out_dir, plus manifest.json, and
// reports diagnostics on `err`.
int cmd_simulate(const CommonOptions& opt, std::ostream& err);
int cmd_check(const CheckOptions& opt, std::ostream& err);
int cmd_map(const CommonOptions& opt, std::ostream& err);
int cmd_convert(const ConvertOptions& opt, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& opt, std::ostream& err);

/// Command-line front end. Returns the process exit code.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// 17 significant digits.
std::string format_number(double v);

} // namespace ermakov::cli
