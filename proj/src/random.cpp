#include "avi/random.hpp"

#include <cmath>

namespace avi {

double sample_normal(SplitMix64& rng) {
  // Polar method; the second variate is discarded so every draw consumes a
  // whole number of accepted pairs and streams stay easy to reason about.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_lomax(SplitMix64& rng, double shape, double scale) {
  detail::require(shape > 0.0 && scale > 0.0, "sample_lomax: shape and scale must be positive");
  const double u = rng.uniform();
  return scale * (std::pow(1.0 - u, -1.0 / shape) - 1.0);
}

double sample_chisq(SplitMix64& rng, int df) {
  detail::require(df >= 1, "sample_chisq: degrees of freedom must be >= 1");
  double acc = 0.0;
  for (int i = 0; i < df; ++i) {
    const double z = sample_normal(rng);
    acc += z * z;
  }
  return acc;
}

CoveringBallProblem<double> gen_covering_ball(std::uint64_t seed, Index n, Index m, Index s, CoefficientCase c,
                                              double dual_cap, double primal_radius) {
  detail::require(n >= 1 && m >= 1 && s >= 1, "gen_covering_ball: dimensions must be >= 1");
  SplitMix64 rng(seed);
  CoveringBallProblem<double> prob;
  prob.seed = seed;
  prob.coefficient_case = c;
  prob.dual_cap = dual_cap;
  prob.primal_radius = primal_radius;
  prob.alpha.resize(m, n);
  for (Index p = 0; p < m; ++p) {
    for (Index i = 0; i < n; ++i) {
      prob.alpha(p, i) = c == CoefficientCase::Lomax10 ? sample_lomax(rng, 10.0) : sample_chisq(rng, 3);
    }
  }
  prob.points.resize(s, n);
  for (Index k = 0; k < s; ++k) {
    for (Index i = 0; i < n; ++i) prob.points(k, i) = sample_normal(rng);
  }
  prob.validate();
  return prob;
}

Vector<double> random_sphere_point(std::uint64_t seed, Index n, double radius) {
  detail::require(n >= 1 && radius > 0.0, "random_sphere_point: need n >= 1 and positive radius");
  SplitMix64 rng(seed);
  Vector<double> v(n);
  do {
    for (Index i = 0; i < n; ++i) v[i] = sample_normal(rng);
  } while (v.norm() == 0.0);
  return radius * v.normalized();
}

}  // namespace avi
