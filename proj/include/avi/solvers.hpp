#ifndef AVI_SOLVERS_HPP
#define AVI_SOLVERS_HPP

// Adaptive mirror-prox type methods for relatively strongly monotone VIs.
//
//   Method::UniversalMirrorProx   universal mirror prox, stops on S_N budget
//   Method::Restarted             restarts of the above with shrinking radius
//   Method::AdaptiveDelta         no-restart method, inexactness delta
//   Method::AdaptiveSmooth        no-restart method for smooth operators
//   Method::AdaptiveScaledDelta   no-restart method, inexactness L * delta
//
// All of them share one backtracking search over L = 2^(i-1) L_k and one
// iteration loop; they differ only in the z-update and the acceptance test.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "avi/estimates.hpp"
#include "avi/line_search.hpp"
#include "avi/operators.hpp"
#include "avi/prox.hpp"

namespace avi {

enum class Method { UniversalMirrorProx, Restarted, AdaptiveDelta, AdaptiveSmooth, AdaptiveScaledDelta };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::UniversalMirrorProx: return "alg1_ump";
    case Method::Restarted: return "alg2_restart";
    case Method::AdaptiveDelta: return "alg3_delta";
    case Method::AdaptiveSmooth: return "alg4_smooth";
    case Method::AdaptiveScaledDelta: return "alg5_scaled";
  }
  return "?";
}

inline Method method_from_string(std::string_view s) {
  for (auto m : {Method::UniversalMirrorProx, Method::Restarted, Method::AdaptiveDelta, Method::AdaptiveSmooth,
                 Method::AdaptiveScaledDelta}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown solver '" + std::string(s) + "'");
}

/// Name of the bound attached to each iteration record.
inline std::string_view bound_label(Method m) {
  switch (m) {
    case Method::UniversalMirrorProx: return "eq13";
    case Method::Restarted: return "thm2";
    case Method::AdaptiveDelta: return "eq19";
    case Method::AdaptiveSmooth: return "eq20";
    case Method::AdaptiveScaledDelta: return "eq23";
  }
  return "?";
}

enum class OutputMode { LastZ, LastW, WeightedAvgW };

inline std::string_view to_string(OutputMode m) {
  switch (m) {
    case OutputMode::LastZ: return "last_z";
    case OutputMode::LastW: return "last_w";
    case OutputMode::WeightedAvgW: return "weighted_avg_w";
  }
  return "?";
}

inline OutputMode output_mode_from_string(std::string_view s) {
  for (auto m : {OutputMode::LastZ, OutputMode::LastW, OutputMode::WeightedAvgW}) {
    if (to_string(m) == s) return m;
  }
  throw std::invalid_argument("unknown output mode '" + std::string(s) + "'");
}

template <typename Scalar>
struct SolverConfig {
  Scalar epsilon = Scalar(1e-3);
  Scalar delta = 0;
  Scalar L0 = 1;
  Scalar mu = 1;
  std::int64_t max_iters = 100000;
  int max_backtracks = 60;
  OutputMode output_mode = OutputMode::LastZ;
  bool record_points = true;  // store z_k and w_k in every record

  void validate() const {
    detail::require(epsilon > Scalar(0), "SolverConfig: epsilon must be positive");
    detail::require(delta >= Scalar(0), "SolverConfig: delta must be nonnegative");
    detail::require(L0 > Scalar(0), "SolverConfig: L0 must be positive");
    detail::require(mu > Scalar(0), "SolverConfig: mu must be positive");
    detail::require(max_iters >= 1, "SolverConfig: max_iters must be >= 1");
    detail::require(max_backtracks >= 1, "SolverConfig: max_backtracks must be >= 1");
  }
};

template <typename Scalar>
struct RestartConfig {
  Scalar omega = 1;  // d(x) <= omega / 2 on the unit ball; 1 for the Euclidean base
  Scalar R0 = 1;     // V(x*, x0) <= R0^2
  Scalar epsilon = Scalar(1e-3);

  void validate() const {
    detail::require(omega > Scalar(0), "RestartConfig: omega must be positive");
    detail::require(R0 > Scalar(0), "RestartConfig: R0 must be positive");
    detail::require(epsilon > Scalar(0), "RestartConfig: epsilon must be positive");
  }
};

/// Stop once S_N = sum 1/L_{k+1} reaches `target`; without a target the
/// universal method uses max_{x in X} V(x, z0) / epsilon.
template <typename Scalar>
struct BregmanBudget {
  std::optional<Scalar> target;
};

struct FixedIters {
  std::int64_t n;
};

/// Stop once the vanishing part of the attached bound, prod (1 + mu/L_i)^(-1) V0,
/// is at most epsilon. The delta-dependent floor is not part of the test.
template <typename Scalar>
struct BoundTarget {
  Scalar epsilon;
};

template <typename Scalar>
using StopRule = std::variant<BregmanBudget<Scalar>, FixedIters, BoundTarget<Scalar>>;

template <typename Scalar>
struct TraceRecord {
  std::int64_t iter = 0;  // k + 1: the record describes z_{k+1}
  int trials = 0;         // i_k
  Scalar L = 0;           // L_{k+1}
  Scalar S = 0;           // sum_{i <= k} 1 / L_{i+1}
  Vector<Scalar> z;       // z_{k+1}, empty unless points are recorded
  Vector<Scalar> w;       // w_k, empty unless points are recorded
  std::optional<Scalar> V_err;      // V(x*, z_{k+1})
  std::optional<Scalar> norm_err;   // ||z_{k+1} - x*||
  std::optional<Scalar> objective;  // problem objective at z_{k+1}
  std::optional<Scalar> bound;      // theoretical bound on V(x*, z_{k+1})
  double elapsed_s = 0;
};

template <typename Scalar>
struct RestartMarker {
  int stage = 0;                 // p
  std::int64_t iterations = 0;   // N_p
  Scalar R_sq = 0;               // R_p^2 used for the stage
  Scalar S_stage = 0;            // S_{N_p}
  std::int64_t first_iter = 0;   // global iteration index of the first record of the stage
};

enum class Termination { StopRule, IterationCap };

template <typename Scalar>
struct Trace {
  std::string method;
  std::string bound_eq;
  std::vector<TraceRecord<Scalar>> records;
  std::vector<RestartMarker<Scalar>> restart_markers;
  Vector<Scalar> z0;
  Vector<Scalar> final;
  std::optional<Scalar> V0;  // V(x*, z0) when x* is known, else a max-radius upper bound
  bool V0_exact = false;
  Scalar mu = 0;
  Scalar delta = 0;
  std::int64_t operator_calls = 0;
  Termination termination = Termination::StopRule;

  std::int64_t iterations() const { return static_cast<std::int64_t>(records.size()); }

  std::vector<Scalar> L_history() const {
    std::vector<Scalar> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(r.L);
    return out;
  }

  Scalar max_L() const {
    Scalar m = 0;
    for (const auto& r : records) m = std::max(m, r.L);
    return m;
  }
};

/// RHS - LHS of the acceptance test of `method` at (L, z, w, z_next), where
/// LHS = <g(z) - g(w), z_next - w> and RHS = L (V(w, z) + V(z_next, w)) + slack
/// with slack = delta (universal, restarted, AdaptiveDelta), 0 (AdaptiveSmooth)
/// or L * delta (AdaptiveScaledDelta). Acceptance means the result is >= 0.
template <typename Scalar>
Scalar step_condition_margin(Method method, const ProxSetup<Scalar>& setup, const Vector<Scalar>& g_z,
                             const Vector<Scalar>& g_w, const Vector<Scalar>& z, const Vector<Scalar>& w,
                             const Vector<Scalar>& z_next, Scalar L, Scalar delta) {
  const Scalar lhs = (g_z - g_w).dot(z_next - w);
  Scalar slack = 0;
  switch (method) {
    case Method::UniversalMirrorProx:
    case Method::Restarted:
    case Method::AdaptiveDelta: slack = delta; break;
    case Method::AdaptiveSmooth: slack = 0; break;
    case Method::AdaptiveScaledDelta: slack = L * delta; break;
  }
  const Scalar rhs = L * (bregman(setup, w, z) + bregman(setup, z_next, w)) + slack;
  return rhs - lhs;
}

namespace detail {

template <typename Scalar>
struct StepCandidate {
  Vector<Scalar> w;
  Vector<Scalar> g_w;
  Vector<Scalar> z_next;
};

template <typename Scalar>
struct StageResult {
  std::int64_t iterations = 0;
  Scalar S = 0;
  Vector<Scalar> last_z;
  Vector<Scalar> last_w;
  Vector<Scalar> avg_w;
  bool hit_cap = false;
};

// Shared iteration loop. A Runner owns the clock, the global iteration
// counter and the trace being filled; restarted runs call run_stage repeatedly.
template <typename Scalar>
class Runner {
 public:
  Runner(const VIProblem<Scalar>& prob, const SolverConfig<Scalar>& cfg, Trace<Scalar>& trace)
      : prob_(prob), cfg_(cfg), trace_(trace), start_(std::chrono::steady_clock::now()) {}

  std::int64_t iterations_done() const { return iters_; }

  // `bound(L, S_stage)` returns the bound attached to the record (or nullopt);
  // it is called once per accepted step, after the step.
  template <typename BoundFn, typename StopFn>
  StageResult<Scalar> run_stage(Method method, const ProxSetup<Scalar>& setup, Vector<Scalar> z,
                                std::optional<std::int64_t> fixed_iters, BoundFn&& bound, StopFn&& stop) {
    const Scalar delta = method == Method::AdaptiveSmooth ? Scalar(0) : cfg_.delta;
    const auto& set = prob_.set;
    const bool mirror_prox = method == Method::UniversalMirrorProx || method == Method::Restarted;

    StageResult<Scalar> res;
    res.avg_w = Vector<Scalar>::Zero(z.size());
    res.last_z = z;
    res.last_w = z;
    Scalar L = cfg_.L0;

    while (true) {
      if (fixed_iters && res.iterations >= *fixed_iters) break;
      if (iters_ >= cfg_.max_iters) {
        res.hit_cap = true;
        break;
      }
      const Vector<Scalar> g_z = prob_.op(z);
      ++trace_.operator_calls;

      auto build = [&](Scalar Lt) {
        StepCandidate<Scalar> c;
        c.w = prox_step(setup, set, z, g_z, Lt);
        c.g_w = prob_.op(c.w);
        ++trace_.operator_calls;
        c.z_next = mirror_prox ? prox_step(setup, set, z, c.g_w, Lt)
                               : mixed_prox_step(setup, set, z, c.w, c.g_w, Lt, cfg_.mu);
        return c;
      };
      auto accept = [&](Scalar Lt, const StepCandidate<Scalar>& c) {
        return step_condition_margin(method, setup, g_z, c.g_w, z, c.w, c.z_next, Lt, delta) >= Scalar(0);
      };
      auto step = line_search(L, build, accept, cfg_.max_backtracks);
      L = step.L;

      ++iters_;
      ++res.iterations;
      res.S += Scalar(1) / L;
      S_total_ += Scalar(1) / L;
      res.avg_w += step.candidate.w / L;

      TraceRecord<Scalar> rec;
      rec.iter = iters_;
      rec.trials = step.trials;
      rec.L = L;
      rec.S = S_total_;
      const Vector<Scalar>& z_next = step.candidate.z_next;
      if (prob_.known_solution) {
        const auto& xs = *prob_.known_solution;
        rec.V_err = bregman(setup, xs, z_next);
        rec.norm_err = (z_next - xs).norm();
      }
      if (prob_.objective) rec.objective = prob_.objective(z_next);
      rec.bound = bound(L, res.S);
      rec.elapsed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (cfg_.record_points) {
        rec.z = z_next;
        rec.w = step.candidate.w;
      }
      trace_.records.push_back(std::move(rec));

      res.last_w = std::move(step.candidate.w);
      z = z_next;
      res.last_z = z;
      if (!fixed_iters && stop(res)) break;
    }
    if (res.S > Scalar(0)) res.avg_w /= res.S;
    return res;
  }

 private:
  const VIProblem<Scalar>& prob_;
  const SolverConfig<Scalar>& cfg_;
  Trace<Scalar>& trace_;
  std::chrono::steady_clock::time_point start_;
  std::int64_t iters_ = 0;
  Scalar S_total_ = 0;
};

template <typename Scalar>
Vector<Scalar> select_output(const StageResult<Scalar>& r, OutputMode mode) {
  switch (mode) {
    case OutputMode::LastZ: return r.last_z;
    case OutputMode::LastW: return r.last_w;
    case OutputMode::WeightedAvgW: return r.iterations > 0 ? r.avg_w : r.last_z;
  }
  return r.last_z;
}

template <typename Scalar>
void init_trace(Trace<Scalar>& t, Method m, const VIProblem<Scalar>& prob, const SolverConfig<Scalar>& cfg) {
  t.method = std::string(to_string(m));
  t.bound_eq = std::string(bound_label(m));
  t.mu = cfg.mu;
  t.delta = m == Method::AdaptiveSmooth ? Scalar(0) : cfg.delta;
  detail::require(prob.op != nullptr, "solver: problem has no operator");
}

// V(x*, z0) if known, else an upper bound over the set when it is bounded.
template <typename Scalar>
void init_V0(Trace<Scalar>& t, const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup) {
  if (prob.known_solution) {
    t.V0 = bregman(setup, *prob.known_solution, t.z0);
    t.V0_exact = true;
  } else if (prob.set.bounded()) {
    t.V0 = max_bregman_radius(setup, prob.set);
  }
}

template <typename Scalar>
Trace<Scalar> adaptive_solve(Method method, const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup,
                             const SolverConfig<Scalar>& cfg,
                             const std::type_identity_t<StopRule<Scalar>>& stop) {
  cfg.validate();
  detail::require(setup.dim() == prob.dim(), "solver: prox setup dimension differs from the problem");
  detail::require(!std::holds_alternative<BregmanBudget<Scalar>>(stop),
                  "solver: Bregman-budget stopping applies to the universal method only");
  Trace<Scalar> t;
  init_trace(t, method, prob, cfg);
  t.z0 = project(prob.set, setup.center());
  init_V0(t, prob, setup);

  const BoundVariant variant = method == Method::AdaptiveDelta    ? BoundVariant::Eq19
                               : method == Method::AdaptiveSmooth ? BoundVariant::Eq20
                                                                  : BoundVariant::Eq23;
  std::optional<BoundTracker<Scalar>> tracker;
  if (t.V0) tracker.emplace(variant, cfg.mu, t.delta, *t.V0);

  std::optional<std::int64_t> fixed;
  std::optional<Scalar> target;
  if (const auto* f = std::get_if<FixedIters>(&stop)) {
    detail::require(f->n >= 0, "solver: fixed iteration count must be nonnegative");
    fixed = f->n;
  } else {
    target = std::get<BoundTarget<Scalar>>(stop).epsilon;
    detail::require(*target > Scalar(0), "solver: bound target must be positive");
    detail::require(tracker.has_value(), "solver: bound-target stopping needs a known solution or a bounded set");
    if (tracker->contraction() <= *target) fixed = 0;
  }

  Runner<Scalar> runner(prob, cfg, t);
  auto bound = [&](Scalar L, Scalar) -> std::optional<Scalar> {
    if (!tracker) return std::nullopt;
    return tracker->push(L);
  };
  auto stop_fn = [&](const StageResult<Scalar>&) { return target && tracker->contraction() <= *target; };
  auto res = runner.run_stage(method, setup, t.z0, fixed, bound, stop_fn);
  t.termination = res.hit_cap ? Termination::IterationCap : Termination::StopRule;
  t.final = select_output(res, cfg.output_mode);
  return t;
}

}  // namespace detail

/// Universal mirror prox. z0 = project(center); each iteration backtracks on
/// L, takes w = prox(z, g(z)/L), z_next = prox(z, g(w)/L) and stops when
/// S_N reaches the Bregman budget or after a fixed number of iterations.
/// Records carry the drift bound V(x*, z0) + delta * S_k.
template <typename Scalar>
Trace<Scalar> ump_solve(const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup, const SolverConfig<Scalar>& cfg,
                        const std::type_identity_t<StopRule<Scalar>>& stop = BregmanBudget<Scalar>{}) {
  cfg.validate();
  detail::require(setup.dim() == prob.dim(), "ump_solve: prox setup dimension differs from the problem");
  detail::require(!std::holds_alternative<BoundTarget<Scalar>>(stop), "ump_solve: bound-target stopping is not defined");
  Trace<Scalar> t;
  detail::init_trace(t, Method::UniversalMirrorProx, prob, cfg);
  t.z0 = project(prob.set, setup.center());
  detail::init_V0(t, prob, setup);

  std::optional<std::int64_t> fixed;
  Scalar target = 0;
  if (const auto* f = std::get_if<FixedIters>(&stop)) {
    fixed = f->n;
  } else {
    const auto& b = std::get<BregmanBudget<Scalar>>(stop);
    if (b.target) {
      target = *b.target;
    } else {
      detail::require(prob.set.bounded(), "ump_solve: default stopping needs a bounded feasible set");
      target = max_bregman_radius(setup, prob.set) / cfg.epsilon;
    }
  }

  detail::Runner<Scalar> runner(prob, cfg, t);
  auto bound = [&](Scalar, Scalar S) -> std::optional<Scalar> {
    if (!t.V0) return std::nullopt;
    return bound_lemma2_drift(*t.V0, t.delta, S);
  };
  auto stop_fn = [&](const detail::StageResult<Scalar>& r) { return r.S >= target; };
  auto res = runner.run_stage(Method::UniversalMirrorProx, setup, t.z0, fixed, bound, stop_fn);
  t.termination = res.hit_cap ? Termination::IterationCap : Termination::StopRule;
  t.final = detail::select_output(res, cfg.output_mode);
  return t;
}

/// Restarted universal mirror prox. Stage p runs the universal method from
/// x_p with prox center x_p and scale R_p until S_N >= omega / mu, then sets
/// R_{p+1}^2 = omega R0^2 / (2^(p+1) mu S_{N_p}). Stops once p > log2(2 R0^2 / eps)
/// or when cfg.max_iters total iterations are spent. The record bound depends
/// on what is handed to the next stage: last_z keeps the single drift chain
/// V0 + delta * S_total ("eq13"), weighted_avg_w uses
/// R_p^2 + delta / mu (p > 0) + delta * S_stage ("thm2"), last_w has none.
template <typename Scalar>
Trace<Scalar> restarted_solve(const VIProblem<Scalar>& prob, const SolverConfig<Scalar>& cfg,
                              const RestartConfig<Scalar>& rcfg, const Vector<Scalar>& x0) {
  cfg.validate();
  rcfg.validate();
  detail::require(x0.size() == prob.dim(), "restarted_solve: x0 has wrong dimension");
  detail::require(prob.set.contains(x0, Scalar(1e-12)), "restarted_solve: x0 must be feasible");
  Trace<Scalar> t;
  detail::init_trace(t, Method::Restarted, prob, cfg);
  if (cfg.output_mode == OutputMode::LastZ) t.bound_eq = "eq13";
  if (cfg.output_mode == OutputMode::LastW) t.bound_eq.clear();
  t.z0 = x0;
  const Scalar R0sq = rcfg.R0 * rcfg.R0;
  if (prob.known_solution) {
    t.V0 = Scalar(0.5) * (*prob.known_solution - x0).squaredNorm();
    t.V0_exact = true;
  } else {
    t.V0 = R0sq;
  }

  const int stages = restart_stage_count(R0sq, rcfg.epsilon);
  const Scalar budget = rcfg.omega / cfg.mu;
  detail::Runner<Scalar> runner(prob, cfg, t);
  Vector<Scalar> x = x0;
  Scalar R_sq = R0sq;
  Scalar S_total = 0;
  bool capped = false;
  for (int p = 0; p < stages && !capped; ++p) {
    ProxSetup<Scalar> setup(x, std::sqrt(R_sq));
    RestartMarker<Scalar> marker;
    marker.stage = p;
    marker.R_sq = R_sq;
    marker.first_iter = runner.iterations_done() + 1;
    const Scalar stage_R_sq = R_sq;
    const Scalar S_before = S_total;
    const bool first = p == 0;
    // Handing over the last z keeps one drift chain across stages. A weighted
    // average restarts it from the stage radius plus the inexactness floor.
    auto bound = [&](Scalar, Scalar S) -> std::optional<Scalar> {
      switch (cfg.output_mode) {
        case OutputMode::LastZ: return *t.V0 + t.delta * (S_before + S);
        case OutputMode::WeightedAvgW:
          return stage_R_sq + (first ? Scalar(0) : t.delta / cfg.mu) + t.delta * S;
        case OutputMode::LastW: return std::nullopt;
      }
      return std::nullopt;
    };
    auto stop_fn = [&](const detail::StageResult<Scalar>& r) { return r.S >= budget; };
    auto res = runner.run_stage(Method::Restarted, setup, project(prob.set, x), std::nullopt, bound, stop_fn);
    marker.iterations = res.iterations;
    marker.S_stage = res.S;
    S_total += res.S;
    t.restart_markers.push_back(marker);
    capped = res.hit_cap;
    if (res.iterations > 0) x = detail::select_output(res, cfg.output_mode);
    if (res.S > Scalar(0)) {
      R_sq = rcfg.omega * R0sq / (std::ldexp(Scalar(1), p + 1) * cfg.mu * res.S);
    }
  }
  t.termination = capped ? Termination::IterationCap : Termination::StopRule;
  t.final = x;
  return t;
}

/// No-restart method with additive inexactness delta in the acceptance test.
/// Records carry the recursion bound eq19.
template <typename Scalar>
Trace<Scalar> adaptive_delta_solve(const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup,
                                   const SolverConfig<Scalar>& cfg,
                             const std::type_identity_t<StopRule<Scalar>>& stop) {
  return detail::adaptive_solve(Method::AdaptiveDelta, prob, setup, cfg, stop);
}

/// No-restart method for smooth operators (delta ignored). Records carry the
/// product bound eq20. Exhausts the backtracking cap on operators that are
/// not smooth.
template <typename Scalar>
Trace<Scalar> adaptive_smooth_solve(const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup,
                                    const SolverConfig<Scalar>& cfg,
                             const std::type_identity_t<StopRule<Scalar>>& stop) {
  return detail::adaptive_solve(Method::AdaptiveSmooth, prob, setup, cfg, stop);
}

/// No-restart method whose acceptance slack is L * delta. Records carry eq23.
template <typename Scalar>
Trace<Scalar> adaptive_scaled_delta_solve(const VIProblem<Scalar>& prob, const ProxSetup<Scalar>& setup,
                                          const SolverConfig<Scalar>& cfg,
                             const std::type_identity_t<StopRule<Scalar>>& stop) {
  return detail::adaptive_solve(Method::AdaptiveScaledDelta, prob, setup, cfg, stop);
}

/// LHistory of a trace, for evaluating any bound variant against it.
template <typename Scalar>
LHistory<Scalar> history_of(const Trace<Scalar>& t) {
  LHistory<Scalar> h;
  h.L_values = t.L_history();
  h.mu = t.mu;
  h.delta = t.delta;
  h.V0 = t.V0.value_or(Scalar(0));
  return h;
}

}  // namespace avi

#endif  // AVI_SOLVERS_HPP
