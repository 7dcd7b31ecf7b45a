#include <cmath>

#include "avi/experiment.hpp"

namespace avi {

namespace {

// Seeds: covering-ball case 1 uses 1, case 2 uses 2; minty start points use 11.
constexpr std::uint64_t kCase1Seed = 1;
constexpr std::uint64_t kCase2Seed = 2;
constexpr std::uint64_t kMintySeed = 11;

std::vector<double> epsilon_grid() {
  std::vector<double> g;
  for (int i = 1; i <= 8; ++i) g.push_back(std::pow(10.0, -3.0 * i));
  return g;
}

ExperimentConfig common(Scale scale) {
  ExperimentConfig c;
  c.epsilon_grid = epsilon_grid();
  c.delta = 0.01;
  c.L0 = 1;
  c.desk_scale = scale == Scale::Desk;
  c.max_iters = scale == Scale::Desk ? 1000 : 20000;
  c.record_points = false;
  return c;
}

ExperimentConfig covering(std::string_view name, Scale scale, CoefficientCase cc, std::uint64_t seed,
                          std::vector<Method> solvers, const std::filesystem::path& base) {
  ExperimentConfig c = common(scale);
  c.name = std::string(name);
  CoveringBallSpec cb;
  cb.coefficient_case = cc;
  cb.n = scale == Scale::Desk ? 1000 : 1000000;
  cb.m = 10;
  cb.s = 50;
  cb.seed = seed;
  c.problem = cb;
  c.mu = 2;
  c.solvers = std::move(solvers);
  c.output_dir = base / name;
  return c;
}

ExperimentConfig minty(std::string_view name, Scale scale, const std::string& op, double radius,
                       std::vector<Method> solvers, const std::filesystem::path& dir) {
  ExperimentConfig c = common(scale);
  c.name = std::string(name);
  MintySpec mp;
  mp.op = op;
  mp.n = scale == Scale::Desk ? 10000 : 1000000;
  mp.radius = radius;
  mp.seed = kMintySeed;
  c.problem = mp;
  c.mu = 1;
  c.solvers = std::move(solvers);
  c.match_iterations = true;
  c.output_dir = dir;
  return c;
}

}  // namespace

Scale scale_from_string(std::string_view s) {
  if (s == "desk") return Scale::Desk;
  if (s == "full") return Scale::Full;
  throw std::invalid_argument("unknown scale '" + std::string(s) + "'");
}

std::string_view to_string(Scale s) { return s == Scale::Desk ? "desk" : "full"; }

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1_case1", "fig2_case2", "fig_vi_identity", "fig_vi_diag"};
  return names;
}

std::vector<ExperimentConfig> preset_configs(std::string_view name, Scale scale, const std::filesystem::path& base) {
  using M = Method;
  if (name == "fig1_case1") {
    return {covering(name, scale, CoefficientCase::Lomax10, kCase1Seed,
                     {M::AdaptiveDelta, M::AdaptiveSmooth, M::AdaptiveScaledDelta}, base)};
  }
  if (name == "fig2_case2") {
    return {covering(name, scale, CoefficientCase::ChiSq3, kCase2Seed,
                     {M::Restarted, M::AdaptiveDelta, M::AdaptiveSmooth, M::AdaptiveScaledDelta}, base)};
  }
  if (name == "fig_vi_identity") {
    std::vector<ExperimentConfig> out;
    for (int r : {1, 2, 3}) {
      out.push_back(minty(name, scale, "identity", r,
                          {M::Restarted, M::AdaptiveDelta, M::AdaptiveSmooth, M::AdaptiveScaledDelta},
                          base / name / ("r" + std::to_string(r))));
    }
    return out;
  }
  if (name == "fig_vi_diag") {
    return {minty(name, scale, "diag", 1.0, {M::UniversalMirrorProx, M::AdaptiveDelta, M::AdaptiveScaledDelta},
                  base / name)};
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<ExperimentResult> reproduce_preset(std::string_view name, Scale scale, const std::filesystem::path& base) {
  std::vector<ExperimentResult> out;
  for (const auto& cfg : preset_configs(name, scale, base)) out.push_back(run_experiment(cfg));
  return out;
}

}  // namespace avi
