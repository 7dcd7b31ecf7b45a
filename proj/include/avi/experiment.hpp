#ifndef AVI_EXPERIMENT_HPP
#define AVI_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "avi/io.hpp"

namespace avi {

struct CoveringBallSpec {
  CoefficientCase coefficient_case = CoefficientCase::Lomax10;
  Index n = 1000;
  Index m = 10;
  Index s = 50;
  std::uint64_t seed = 1;
};

/// Minty VI on Ball(0, radius). The start point is drawn uniformly from the
/// sphere of that radius with `seed`; `composite` uses n = m blocks and a
/// Gaussian coupling matrix drawn from the same seed.
struct MintySpec {
  std::string op = "identity";  // identity | diag | holder | composite
  Index n = 10000;
  double radius = 1;
  std::uint64_t seed = 11;
  double nu = 0.5;    // holder only
  double L_nu = 1;    // holder only
};

using ProblemSpec = std::variant<CoveringBallSpec, MintySpec>;

struct ExperimentConfig {
  std::string name = "experiment";
  ProblemSpec problem = MintySpec{};
  std::vector<Method> solvers;
  std::vector<double> epsilon_grid;
  double delta = 0.01;
  double L0 = 1;
  double mu = 1;
  double omega = 1;
  std::int64_t max_iters = 1000;
  int max_backtracks = 60;
  std::filesystem::path output_dir = "avi-out";
  bool desk_scale = true;
  // Run the first solver with its own stopping rule, then every other solver
  // for exactly as many iterations, per epsilon.
  bool match_iterations = false;
  OutputMode output_mode = OutputMode::LastZ;
  bool record_points = false;

  void validate() const;
};

json to_json(const ExperimentConfig& c);
ExperimentConfig experiment_config_from_json(const json& j);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

struct RunSummary {
  std::string solver;
  double epsilon = 0;
  std::size_t epsilon_index = 0;
  bool ok = true;
  std::string error;
  std::string stop_rule;
  std::int64_t iterations = 0;
  std::int64_t operator_calls = 0;
  std::optional<double> final_norm_err;   // ||x_out - x*|| for minty problems
  std::optional<double> final_objective;  // psi(x_out) for covering-ball problems
  double elapsed_s = 0;
  std::filesystem::path trace_path;
  std::filesystem::path csv_path;
};

struct ExperimentResult {
  std::filesystem::path output_dir;
  std::vector<RunSummary> runs;
  std::vector<TraceFile> traces;  // same order as runs
};

/// AVI_OUTPUT_DIR when it is set and nonempty, otherwise `fallback`.
std::filesystem::path resolve_output_dir(const std::filesystem::path& fallback);

/// One trace per (solver, epsilon). Writes traces/<solver>_eps<i>.json,
/// csv/<solver>_eps<i>.csv, summary.csv, config.json and problem.json under
/// the output directory. Solver aborts become failed rows.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

enum class Scale { Desk, Full };

Scale scale_from_string(std::string_view s);
std::string_view to_string(Scale s);

const std::vector<std::string>& preset_names();

/// The experiment configurations behind a preset; fig_vi_identity yields one
/// per radius. Output directories are <base>/<preset>[/r<radius>].
std::vector<ExperimentConfig> preset_configs(std::string_view name, Scale scale, const std::filesystem::path& base);

std::vector<ExperimentResult> reproduce_preset(std::string_view name, Scale scale, const std::filesystem::path& base);

}  // namespace avi

#endif  // AVI_EXPERIMENT_HPP
