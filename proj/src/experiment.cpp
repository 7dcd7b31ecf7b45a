#include "avi/experiment.hpp"

#include <chrono>
#include <cstdlib>
#include <sstream>

#include "avi/random.hpp"

namespace avi {

namespace {

struct Instance {
  VIProblem<double> vi;
  Vector<double> x0;
  json description;
};

VIProblem<double> minty_problem(const MintySpec& mp, double mu) {
  if (mp.op == "identity") return identity_problem(mp.n, mp.radius);
  if (mp.op == "diag") return diag_problem(mp.n, mp.radius);
  if (mp.op == "holder") return holder_problem(mp.n, mp.radius, mu, mp.L_nu, mp.nu);
  if (mp.op == "composite") {
    SplitMix64 rng(mp.seed + 1);
    Matrix<double> A(mp.n, mp.n);
    for (Index i = 0; i < mp.n; ++i) {
      for (Index j = 0; j < mp.n; ++j) A(i, j) = sample_normal(rng);
    }
    return composite_problem(SaddleComposite<double>(std::move(A), 0.5, 0.5), mp.radius);
  }
  throw std::invalid_argument("unknown minty operator '" + mp.op + "'");
}

Instance build_instance(const ExperimentConfig& cfg) {
  if (const auto* cb = std::get_if<CoveringBallSpec>(&cfg.problem)) {
    const auto prob = gen_covering_ball(cb->seed, cb->n, cb->m, cb->s, cb->coefficient_case);
    return {covering_ball_vi(prob, cfg.mu), Vector<double>::Zero(prob.n() + prob.m()), covering_ball_to_json(prob)};
  }
  const auto& mp = std::get<MintySpec>(cfg.problem);
  Instance out{minty_problem(mp, cfg.mu), {}, {}};
  out.x0 = random_sphere_point(mp.seed, out.vi.dim(), mp.radius);
  out.description = {{"kind", "minty"},     {"operator", mp.op}, {"n", mp.n},        {"dim", out.vi.dim()},
                     {"radius", mp.radius}, {"seed", mp.seed},   {"nu", mp.nu},      {"L_nu", mp.L_nu},
                     {"x0", json::array()}};
  for (Index i = 0; i < out.x0.size(); ++i) out.description["x0"].push_back(out.x0[i]);
  return out;
}

SolverConfig<double> solver_config(const ExperimentConfig& cfg, double eps) {
  SolverConfig<double> sc;
  sc.epsilon = eps;
  sc.delta = cfg.delta;
  sc.L0 = cfg.L0;
  sc.mu = cfg.mu;
  sc.max_iters = cfg.max_iters;
  sc.max_backtracks = cfg.max_backtracks;
  sc.output_mode = cfg.output_mode;
  sc.record_points = cfg.record_points;
  return sc;
}

// Runs one solver; `fixed` replaces its own stopping rule.
Trace<double> run_solver(Method m, const Instance& inst, const ExperimentConfig& cfg, double eps,
                         std::optional<std::int64_t> fixed, std::string& stop_rule) {
  const auto sc = solver_config(cfg, eps);
  const ProxSetup<double> setup(inst.x0);
  if (m == Method::Restarted) {
    // The restart schedule is its own stopping rule; matching is applied
    // through the iteration cap.
    RestartConfig<double> rc;
    rc.omega = cfg.omega;
    rc.epsilon = eps;
    const double R0sq = inst.vi.known_solution ? bregman(setup, *inst.vi.known_solution, inst.x0)
                                               : max_bregman_radius(setup, inst.vi.set);
    rc.R0 = std::sqrt(std::max(R0sq, std::numeric_limits<double>::min()));
    auto capped = sc;
    if (fixed) capped.max_iters = std::max<std::int64_t>(1, std::min(*fixed, sc.max_iters));
    stop_rule = fixed ? "restart_schedule_capped" : "restart_schedule";
    return restarted_solve(inst.vi, capped, rc, inst.x0);
  }
  StopRule<double> stop;
  if (fixed) {
    stop = FixedIters{*fixed};
    stop_rule = "fixed_iters";
  } else if (m == Method::UniversalMirrorProx) {
    stop = BregmanBudget<double>{};
    stop_rule = "bregman_budget";
  } else {
    stop = BoundTarget<double>{eps};
    stop_rule = "bound_target";
  }
  switch (m) {
    case Method::UniversalMirrorProx: return ump_solve(inst.vi, setup, sc, stop);
    case Method::AdaptiveDelta: return adaptive_delta_solve(inst.vi, setup, sc, stop);
    case Method::AdaptiveSmooth: return adaptive_smooth_solve(inst.vi, setup, sc, stop);
    case Method::AdaptiveScaledDelta: return adaptive_scaled_delta_solve(inst.vi, setup, sc, stop);
    case Method::Restarted: break;
  }
  throw std::logic_error("run_solver: unreachable");
}

std::string summary_csv(const std::vector<RunSummary>& runs) {
  std::ostringstream os;
  os << "solver,epsilon,status,stop_rule,iterations,operator_calls,final_norm_err,final_objective,elapsed_s,error\n";
  for (const auto& r : runs) {
    os << r.solver << ',' << format_double(r.epsilon) << ',' << (r.ok ? "ok" : "failed") << ',' << r.stop_rule << ','
       << r.iterations << ',' << r.operator_calls << ',';
    if (r.final_norm_err) os << format_double(*r.final_norm_err);
    os << ',';
    if (r.final_objective) os << format_double(*r.final_objective);
    os << ',' << format_double(r.elapsed_s) << ',';
    std::string e = r.error;
    for (char& ch : e) {
      if (ch == ',' || ch == '\n') ch = ';';
    }
    os << e << '\n';
  }
  return os.str();
}

}  // namespace

void ExperimentConfig::validate() const {
  detail::require(!solvers.empty(), "ExperimentConfig: solver list is empty");
  detail::require(!epsilon_grid.empty(), "ExperimentConfig: epsilon grid is empty");
  for (double e : epsilon_grid) detail::require(e > 0.0, "ExperimentConfig: epsilon values must be positive");
  detail::require(delta >= 0.0, "ExperimentConfig: delta must be nonnegative");
  detail::require(L0 > 0.0 && mu > 0.0 && omega > 0.0, "ExperimentConfig: L0, mu and omega must be positive");
  detail::require(max_iters >= 1, "ExperimentConfig: max_iters must be >= 1");
  detail::require(max_backtracks >= 1, "ExperimentConfig: max_backtracks must be >= 1");
  if (const auto* cb = std::get_if<CoveringBallSpec>(&problem)) {
    detail::require(cb->n >= 1 && cb->m >= 1 && cb->s >= 1, "ExperimentConfig: covering-ball dimensions must be >= 1");
  } else {
    const auto& mp = std::get<MintySpec>(problem);
    detail::require(mp.n >= 1 && mp.radius > 0.0, "ExperimentConfig: minty needs n >= 1 and a positive radius");
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  if (const auto* cb = std::get_if<CoveringBallSpec>(&c.problem)) {
    j["problem"] = {{"type", "covering_ball"}, {"case", to_string(cb->coefficient_case)},
                    {"n", cb->n},              {"m", cb->m},
                    {"s", cb->s},              {"seed", cb->seed}};
  } else {
    const auto& mp = std::get<MintySpec>(c.problem);
    j["problem"] = {{"type", "minty"}, {"operator", mp.op}, {"n", mp.n},      {"radius", mp.radius},
                    {"seed", mp.seed}, {"nu", mp.nu},       {"L_nu", mp.L_nu}};
  }
  j["solvers"] = json::array();
  for (auto m : c.solvers) j["solvers"].push_back(std::string(to_string(m)));
  j["epsilon_grid"] = c.epsilon_grid;
  j["delta"] = c.delta;
  j["L0"] = c.L0;
  j["mu"] = c.mu;
  j["omega"] = c.omega;
  j["max_iters"] = c.max_iters;
  j["max_backtracks"] = c.max_backtracks;
  j["output_dir"] = c.output_dir.string();
  j["desk_scale"] = c.desk_scale;
  j["match_iterations"] = c.match_iterations;
  j["output_mode"] = std::string(to_string(c.output_mode));
  j["record_points"] = c.record_points;
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    const auto& p = j.at("problem");
    const auto type = p.at("type").get<std::string>();
    if (type == "covering_ball") {
      CoveringBallSpec cb;
      cb.coefficient_case = coefficient_case_from_string(p.value("case", std::string("lomax10")));
      cb.n = p.value("n", cb.n);
      cb.m = p.value("m", cb.m);
      cb.s = p.value("s", cb.s);
      cb.seed = p.value("seed", cb.seed);
      c.problem = cb;
    } else if (type == "minty") {
      MintySpec mp;
      mp.op = p.value("operator", mp.op);
      mp.n = p.value("n", mp.n);
      mp.radius = p.value("radius", mp.radius);
      mp.seed = p.value("seed", mp.seed);
      mp.nu = p.value("nu", mp.nu);
      mp.L_nu = p.value("L_nu", mp.L_nu);
      c.problem = mp;
    } else {
      throw std::invalid_argument("unknown problem type '" + type + "'");
    }
    for (const auto& s : j.at("solvers")) c.solvers.push_back(method_from_string(s.get<std::string>()));
    c.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    c.delta = j.value("delta", c.delta);
    c.L0 = j.value("L0", c.L0);
    c.mu = j.value("mu", c.mu);
    c.omega = j.value("omega", c.omega);
    c.max_iters = j.value("max_iters", c.max_iters);
    c.max_backtracks = j.value("max_backtracks", c.max_backtracks);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    c.desk_scale = j.value("desk_scale", c.desk_scale);
    c.match_iterations = j.value("match_iterations", c.match_iterations);
    c.output_mode = output_mode_from_string(j.value("output_mode", std::string("last_z")));
    c.record_points = j.value("record_points", c.record_points);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("ExperimentConfig: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return experiment_config_from_json(read_json_file(path));
}

std::filesystem::path resolve_output_dir(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("AVI_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  result.output_dir = cfg.output_dir;
  const auto& dir = result.output_dir;
  std::filesystem::create_directories(dir / "traces");
  std::filesystem::create_directories(dir / "csv");

  const Instance inst = build_instance(cfg);
  const json cfg_json = to_json(cfg);
  write_text_file(dir / "config.json", cfg_json.dump(1) + "\n");
  write_text_file(dir / "problem.json", inst.description.dump() + "\n");
  const bool minty = std::holds_alternative<MintySpec>(cfg.problem);
  const std::uint64_t seed = minty ? std::get<MintySpec>(cfg.problem).seed : std::get<CoveringBallSpec>(cfg.problem).seed;

  for (std::size_t e = 0; e < cfg.epsilon_grid.size(); ++e) {
    const double eps = cfg.epsilon_grid[e];
    std::optional<std::int64_t> matched;
    for (std::size_t si = 0; si < cfg.solvers.size(); ++si) {
      const Method m = cfg.solvers[si];
      RunSummary row;
      row.solver = std::string(to_string(m));
      row.epsilon = eps;
      row.epsilon_index = e;
      TraceFile file;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        file.trace = run_solver(m, inst, cfg, eps, si > 0 ? matched : std::nullopt, row.stop_rule);
      } catch (const std::exception& ex) {
        row.ok = false;
        row.error = ex.what();
        file.trace.method = row.solver;
      }
      row.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      const auto& t = file.trace;
      row.iterations = t.iterations();
      row.operator_calls = t.operator_calls;
      if (row.ok) {
        if (minty && inst.vi.known_solution) row.final_norm_err = (t.final - *inst.vi.known_solution).norm();
        if (inst.vi.objective) row.final_objective = inst.vi.objective(t.final);
      }
      if (cfg.match_iterations && si == 0 && row.ok) matched = row.iterations;

      file.header = {{"config", cfg_json},
                     {"solver", row.solver},
                     {"epsilon", eps},
                     {"seed", seed},
                     {"status", row.ok ? "ok" : "failed"},
                     {"error", row.error},
                     {"stop_rule", row.stop_rule},
                     {"library_version", kLibraryVersion},
                     {"eigen_version", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                           std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                           std::to_string(EIGEN_MINOR_VERSION)}};
      if (row.final_norm_err) file.header["final_norm_err"] = *row.final_norm_err;
      if (row.final_objective) file.header["final_objective"] = *row.final_objective;

      const std::string stem = row.solver + "_eps" + std::to_string(e);
      row.trace_path = dir / "traces" / (stem + ".json");
      row.csv_path = dir / "csv" / (stem + ".csv");
      save_trace_file(file, row.trace_path);
      export_trace(file.trace, TraceFormat::Csv, row.csv_path);
      result.runs.push_back(std::move(row));
      result.traces.push_back(std::move(file));
    }
  }
  write_text_file(dir / "summary.csv", summary_csv(result.runs));
  return result;
}

}  // namespace avi
