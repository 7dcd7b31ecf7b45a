#ifndef AVI_ESTIMATES_HPP
#define AVI_ESTIMATES_HPP

// Closed-form convergence bounds and iteration counts, evaluated from the
// accepted step-constant history of an actual run.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "avi/types.hpp"

namespace avi {

/// Accepted constants L_1 .. L_{k+1} of a run together with mu, delta and
/// V0 = V(z*, z0).
template <typename Scalar>
struct LHistory {
  std::vector<Scalar> L_values;
  Scalar mu = 1;
  Scalar delta = 0;
  Scalar V0 = 0;

  void validate() const {
    detail::require(!L_values.empty(), "LHistory: empty history");
    detail::require(mu > Scalar(0), "LHistory: mu must be positive");
    detail::require(delta >= Scalar(0), "LHistory: delta must be nonnegative");
    detail::require(V0 >= Scalar(0), "LHistory: V0 must be nonnegative");
    for (Scalar L : L_values) detail::require(L > Scalar(0), "LHistory: L values must be positive");
  }

  Scalar max_L() const { return *std::max_element(L_values.begin(), L_values.end()); }
};

enum class BoundVariant { Eq19, Eq20, Eq21, Eq23, Eq25, Remark6 };

inline std::string_view to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::Eq19: return "eq19";
    case BoundVariant::Eq20: return "eq20";
    case BoundVariant::Eq21: return "eq21";
    case BoundVariant::Eq23: return "eq23";
    case BoundVariant::Eq25: return "eq25";
    case BoundVariant::Remark6: return "remark6";
  }
  return "?";
}

inline BoundVariant bound_variant_from_string(std::string_view s) {
  for (auto v : {BoundVariant::Eq19, BoundVariant::Eq20, BoundVariant::Eq21, BoundVariant::Eq23, BoundVariant::Eq25,
                 BoundVariant::Remark6}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown bound variant '" + std::string(s) + "'");
}

/// Gap bound of the universal mirror prox: 2 L V0 / N.
template <typename Scalar>
Scalar bound_ump_gap(Scalar L, Scalar V0, std::int64_t N) {
  detail::require(N >= 1, "bound_ump_gap: N must be >= 1");
  return Scalar(2) * L * V0 / Scalar(N);
}

/// V(x*, z_N) <= V0 + delta * S_N.
template <typename Scalar>
Scalar bound_lemma2_drift(Scalar V0, Scalar delta, Scalar S_N) {
  detail::require(S_N >= Scalar(0), "bound_lemma2_drift: S_N must be nonnegative");
  return V0 + delta * S_N;
}

template <typename Scalar>
struct RestartBound {
  Scalar quality;       // eps + 2 Omega L delta / mu^2
  std::int64_t iters;   // ceil(2 L Omega / mu * log2(R0^2 / eps)), 0 when the log is nonpositive
};

template <typename Scalar>
RestartBound<Scalar> bound_restart(Scalar L, Scalar omega, Scalar mu, Scalar delta, Scalar R0sq, Scalar epsilon) {
  detail::require(L > Scalar(0) && omega > Scalar(0) && mu > Scalar(0), "bound_restart: L, omega, mu must be positive");
  detail::require(epsilon > Scalar(0) && R0sq > Scalar(0), "bound_restart: epsilon and R0^2 must be positive");
  RestartBound<Scalar> out;
  out.quality = epsilon + Scalar(2) * omega * L * delta / (mu * mu);
  const Scalar lg = std::log2(R0sq / epsilon);
  out.iters = lg <= Scalar(0) ? 0 : static_cast<std::int64_t>(std::ceil(Scalar(2) * L * omega / mu * lg));
  return out;
}

/// Number of restart stages: the smallest p with p > log2(2 R0^2 / eps).
template <typename Scalar>
int restart_stage_count(Scalar R0sq, Scalar epsilon) {
  const Scalar lg = std::log2(Scalar(2) * R0sq / epsilon);
  if (lg < Scalar(0)) return 1;  // the loop body runs once before the test
  return static_cast<int>(std::floor(lg)) + 1;
}

/// Direct evaluation of the selected bound on V(z*, z_{k+1}) from the full
/// history (k + 1 = L_values.size()). For eq21 and eq25 the single constant L
/// is max(L_values).
template <typename Scalar>
Scalar bound_adaptive(const LHistory<Scalar>& h, BoundVariant variant) {
  h.validate();
  const auto& L = h.L_values;
  const std::size_t K = L.size();  // k + 1
  const Scalar mu = h.mu;
  const Scalar delta = h.delta;

  // tail(j) = prod_{i=j+1}^{K} (1 + mu/L_i)^(-1), 1-based, tail(K) = 1.
  auto tail = [&](std::size_t j) {
    Scalar prod = 1;
    for (std::size_t i = j + 1; i <= K; ++i) prod /= (Scalar(1) + mu / L[i - 1]);
    return prod;
  };
  const Scalar contraction = tail(0) * h.V0;

  switch (variant) {
    case BoundVariant::Eq20:
      return contraction;
    case BoundVariant::Eq19: {
      Scalar acc = contraction + delta / (L[K - 1] + mu);
      for (std::size_t j = 1; j + 1 <= K; ++j) acc += delta / (L[j - 1] + mu) * tail(j);
      return acc;
    }
    case BoundVariant::Eq23: {
      Scalar sum = 1;
      for (std::size_t j = 1; j + 1 <= K; ++j) sum += tail(j);
      return contraction + delta * sum;
    }
    case BoundVariant::Remark6: {
      Scalar acc = contraction + L[K - 1] * delta / (L[K - 1] + mu);
      for (std::size_t j = 1; j + 1 <= K; ++j) acc += L[j - 1] * delta / (L[j - 1] + mu) * tail(j);
      return acc;
    }
    case BoundVariant::Eq21:
    case BoundVariant::Eq25: {
      const Scalar Lhat = h.max_L();
      const Scalar geo = std::pow(Scalar(1) + mu / (Scalar(2) * Lhat), -Scalar(K)) * h.V0;
      if (variant == BoundVariant::Eq21) return geo;
      return geo + delta * (Scalar(1) + Scalar(2) * Lhat / mu);
    }
  }
  throw std::invalid_argument("bound_adaptive: unknown variant");
}

/// The same bounds maintained by one-step recurrences, O(1) per appended L.
/// Solvers use this to attach a bound to every iteration.
template <typename Scalar>
class BoundTracker {
 public:
  BoundTracker(BoundVariant variant, Scalar mu, Scalar delta, Scalar V0)
      : variant_(variant), mu_(mu), delta_(delta), V0_(V0), value_(V0), contraction_(V0) {
    detail::require(mu > Scalar(0), "BoundTracker: mu must be positive");
  }

  /// Appends L_{k+1} and returns the bound on V(z*, z_{k+1}).
  Scalar push(Scalar L) {
    ++count_;
    max_L_ = std::max(max_L_, L);
    const Scalar q = Scalar(1) / (Scalar(1) + mu_ / L);
    contraction_ *= q;
    switch (variant_) {
      case BoundVariant::Eq20: value_ = contraction_; break;
      case BoundVariant::Eq19: value_ = value_ * q + delta_ / (L + mu_); break;
      case BoundVariant::Eq23: value_ = value_ * q + delta_; break;
      case BoundVariant::Remark6: value_ = value_ * q + L * delta_ / (L + mu_); break;
      case BoundVariant::Eq21:
      case BoundVariant::Eq25: {
        value_ = std::pow(Scalar(1) + mu_ / (Scalar(2) * max_L_), -Scalar(count_)) * V0_;
        if (variant_ == BoundVariant::Eq25) value_ += delta_ * (Scalar(1) + Scalar(2) * max_L_ / mu_);
        break;
      }
    }
    return value_;
  }

  Scalar value() const { return value_; }
  /// prod (1 + mu/L_i)^(-1) * V0, the part that vanishes as k grows.
  Scalar contraction() const { return contraction_; }
  BoundVariant variant() const { return variant_; }

 private:
  BoundVariant variant_;
  Scalar mu_;
  Scalar delta_;
  Scalar V0_;
  Scalar value_;
  Scalar contraction_;
  Scalar max_L_ = 0;
  std::int64_t count_ = 0;
};

/// Complexity estimate of the competing restart technique for Hoelder-smooth
/// saddle problems, minimized over a grid of nu. The factor
/// (1-nu)(2-nu)/(2-nu) inside L_nu is evaluated as written.
template <typename Scalar>
Scalar bound_external_comparison(Scalar L_xy, Scalar L_xx, Scalar mu, Scalar mu_y, Scalar D, Scalar omega,
                                 Scalar epsilon, Scalar R0sq, const std::vector<Scalar>& nu_grid) {
  detail::require(!nu_grid.empty(), "bound_external_comparison: empty nu grid");
  detail::require(mu > Scalar(0) && mu_y > Scalar(0) && epsilon > Scalar(0), "bound_external_comparison: bad constants");
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Scalar nu : nu_grid) {
    detail::require(nu >= Scalar(0) && nu <= Scalar(1), "bound_external_comparison: nu outside [0, 1]");
    const Scalar two_minus = Scalar(2) - nu;
    const Scalar Lt = L_xy * std::pow(Scalar(2) * L_xy / mu_y, nu / two_minus) +
                      L_xx * std::pow(D, (nu - nu * nu) / two_minus);
    const Scalar factor = (Scalar(1) - nu) * two_minus / two_minus;
    const Scalar L_nu =
        Lt * std::pow(Lt / (Scalar(2) * epsilon) * factor, (Scalar(1) - nu) * (Scalar(1) + nu) / two_minus);
    const Scalar p = Scalar(2) / (Scalar(1) + nu);
    const Scalar value = std::pow(L_nu / mu, p) * std::pow(Scalar(2), p) * omega /
                         std::pow(epsilon, (Scalar(1) - nu) / (Scalar(1) + nu)) *
                         std::log2(Scalar(2) * R0sq / epsilon);
    best = std::min(best, std::ceil(value));
  }
  return best;
}

}  // namespace avi

#endif  // AVI_ESTIMATES_HPP
