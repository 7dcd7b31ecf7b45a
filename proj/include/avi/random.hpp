#ifndef AVI_RANDOM_HPP
#define AVI_RANDOM_HPP

#include <cstdint>
#include <limits>

#include "avi/operators.hpp"

namespace avi {

/// Counter-based SplitMix64: the i-th output is mix64(seed + (i + 1) * golden),
/// so a stream is fully determined by (seed, counter). Satisfies
/// UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed, std::uint64_t counter = 0) : seed_(seed), counter_(counter) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix(seed_ + (++counter_) * kGolden); }

  std::uint64_t counter() const { return counter_; }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t seed_;
  std::uint64_t counter_;
};

/// Lomax (Pareto II) draw by inverse CDF: scale * ((1 - U)^(-1/shape) - 1).
double sample_lomax(SplitMix64& rng, double shape, double scale = 1.0);

/// Chi-square draw as a sum of `df` squared standard normals.
double sample_chisq(SplitMix64& rng, int df);

/// Standard normal draw (polar Box-Muller, no cached spare).
double sample_normal(SplitMix64& rng);

/// alpha entries i.i.d. from the named distribution (row-major, drawn first),
/// then the s points with i.i.d. standard normal coordinates.
CoveringBallProblem<double> gen_covering_ball(std::uint64_t seed, Index n, Index m, Index s, CoefficientCase c,
                                              double dual_cap = 10.0, double primal_radius = 5.0);

/// Point drawn uniformly from the sphere of the given radius.
Vector<double> random_sphere_point(std::uint64_t seed, Index n, double radius);

}  // namespace avi

#endif  // AVI_RANDOM_HPP
