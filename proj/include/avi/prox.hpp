#ifndef AVI_PROX_HPP
#define AVI_PROX_HPP

// Euclidean-base prox geometry: prox-functions, Bregman divergences,
// Euclidean projections onto balls, boxes and their products, and the two
// closed-form prox subproblems used by every mirror-prox style method.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

#include "avi/types.hpp"

namespace avi {

/// Prox-function d(x) = R^2 * base((x - c) / R) with base = 0.5*||.||^2.
///
/// For the Euclidean base this collapses to 0.5*||x - c||^2, so the induced
/// Bregman divergence does not depend on (center, scale). The pair is still
/// carried around because restarted methods re-center and re-scale it.
template <typename Scalar>
class ProxSetup {
 public:
  explicit ProxSetup(Vector<Scalar> center, Scalar scale = Scalar(1))
      : center_(std::move(center)), scale_(scale) {
    detail::require(center_.size() >= 1, "ProxSetup: center must have dimension >= 1");
    detail::require(center_.allFinite(), "ProxSetup: center must be finite");
    detail::require(scale_ > Scalar(0) && std::isfinite(scale_), "ProxSetup: scale must be positive");
  }

  static ProxSetup origin(Index n) { return ProxSetup(Vector<Scalar>::Zero(n)); }

  const Vector<Scalar>& center() const { return center_; }
  Scalar scale() const { return scale_; }
  Index dim() const { return center_.size(); }

  Scalar value(const Vector<Scalar>& x) const {
    detail::require_same_dim(x, center_, "ProxSetup::value");
    const Vector<Scalar> u = (x - center_) / scale_;
    return scale_ * scale_ * Scalar(0.5) * u.squaredNorm();
  }

  Vector<Scalar> gradient(const Vector<Scalar>& x) const {
    detail::require_same_dim(x, center_, "ProxSetup::gradient");
    return scale_ * ((x - center_) / scale_);
  }

 private:
  Vector<Scalar> center_;
  Scalar scale_;
};

/// Closed convex feasible set: Euclidean ball, box (bounds may be infinite),
/// or a Cartesian product of such blocks laid out consecutively.
template <typename Scalar>
class FeasibleSet {
 public:
  struct Ball {
    Vector<Scalar> center;
    Scalar radius;
  };
  struct Box {
    Vector<Scalar> lower;
    Vector<Scalar> upper;
  };
  struct Product {
    std::vector<FeasibleSet> blocks;
  };
  using Variant = std::variant<Ball, Box, Product>;

  static FeasibleSet ball(Vector<Scalar> center, Scalar radius) {
    detail::require(center.size() >= 1, "FeasibleSet::ball: empty center");
    detail::require(center.allFinite(), "FeasibleSet::ball: center must be finite");
    detail::require(radius > Scalar(0) && !std::isnan(radius), "FeasibleSet::ball: radius must be positive");
    return FeasibleSet(Ball{std::move(center), radius});
  }

  static FeasibleSet ball(Index n, Scalar radius) { return ball(Vector<Scalar>::Zero(n), radius); }

  static FeasibleSet box(Vector<Scalar> lower, Vector<Scalar> upper) {
    detail::require(lower.size() >= 1 && lower.size() == upper.size(),
                    "FeasibleSet::box: bounds must have equal nonzero size");
    for (Index i = 0; i < lower.size(); ++i) {
      detail::require(!std::isnan(lower[i]) && !std::isnan(upper[i]), "FeasibleSet::box: NaN bound");
      detail::require(lower[i] <= upper[i], "FeasibleSet::box: lower > upper at coordinate " + std::to_string(i));
      detail::require(lower[i] < std::numeric_limits<Scalar>::infinity() &&
                          upper[i] > -std::numeric_limits<Scalar>::infinity(),
                      "FeasibleSet::box: empty coordinate range");
    }
    return FeasibleSet(Box{std::move(lower), std::move(upper)});
  }

  static FeasibleSet product(std::vector<FeasibleSet> blocks) {
    detail::require(!blocks.empty(), "FeasibleSet::product: no blocks");
    return FeasibleSet(Product{std::move(blocks)});
  }

  const Variant& variant() const { return v_; }

  Index dim() const {
    return std::visit(
        [](const auto& s) -> Index {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return s.center.size();
          } else if constexpr (std::is_same_v<T, Box>) {
            return s.lower.size();
          } else {
            Index n = 0;
            for (const auto& b : s.blocks) n += b.dim();
            return n;
          }
        },
        v_);
  }

  bool bounded() const {
    return std::visit(
        [](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return std::isfinite(s.radius);
          } else if constexpr (std::is_same_v<T, Box>) {
            return s.lower.allFinite() && s.upper.allFinite();
          } else {
            return std::all_of(s.blocks.begin(), s.blocks.end(), [](const auto& b) { return b.bounded(); });
          }
        },
        v_);
  }

  bool contains(const Vector<Scalar>& p, Scalar tol = Scalar(0)) const {
    detail::require(p.size() == dim(), "FeasibleSet::contains: dimension mismatch");
    return std::visit(
        [&](const auto& s) -> bool {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Ball>) {
            return (p - s.center).norm() <= s.radius * (Scalar(1) + tol) + tol;
          } else if constexpr (std::is_same_v<T, Box>) {
            return ((p - s.lower).array() >= -tol).all() && ((s.upper - p).array() >= -tol).all();
          } else {
            Index off = 0;
            for (const auto& b : s.blocks) {
              const Index n = b.dim();
              if (!b.contains(p.segment(off, n), tol)) return false;
              off += n;
            }
            return true;
          }
        },
        v_);
  }

 private:
  explicit FeasibleSet(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// V(y, x) = d(y) - d(x) - <grad d(x), y - x>; equals 0.5*||y - x||^2 for the
/// Euclidean base whatever the center and scale.
template <typename Scalar>
Scalar bregman(const ProxSetup<Scalar>& setup, const Vector<Scalar>& y, const Vector<Scalar>& x) {
  detail::require_same_dim(y, x, "bregman");
  detail::require(y.size() == setup.dim(), "bregman: dimension mismatch with prox setup");
  return Scalar(0.5) * (y - x).squaredNorm();
}

/// Euclidean projection onto `set`. Points already in the set come back
/// unchanged.
template <typename Scalar>
Vector<Scalar> project(const FeasibleSet<Scalar>& set, const Vector<Scalar>& p) {
  detail::require(p.size() == set.dim(), "project: dimension mismatch");
  using Set = FeasibleSet<Scalar>;
  return std::visit(
      [&](const auto& s) -> Vector<Scalar> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, typename Set::Ball>) {
          const Vector<Scalar> d = p - s.center;
          const Scalar r = d.norm();
          if (r <= s.radius) return p;
          // Rounding can leave the scaled point a few ulps outside; shrink until
          // it is a member so that projecting again is the identity.
          Scalar f = s.radius / r;
          Vector<Scalar> q = s.center + f * d;
          while ((q - s.center).norm() > s.radius) {
            f *= Scalar(1) - std::numeric_limits<Scalar>::epsilon();
            q = s.center + f * d;
          }
          return q;
        } else if constexpr (std::is_same_v<T, typename Set::Box>) {
          return p.cwiseMax(s.lower).cwiseMin(s.upper);
        } else {
          Vector<Scalar> out(p.size());
          Index off = 0;
          for (const auto& b : s.blocks) {
            const Index n = b.dim();
            out.segment(off, n) = project(b, Vector<Scalar>(p.segment(off, n)));
            off += n;
          }
          return out;
        }
      },
      set.variant());
}

/// argmin_{x in set} { <v, x> + coef * V(x, anchor) }.
template <typename Scalar>
Vector<Scalar> prox_step(const ProxSetup<Scalar>& setup, const FeasibleSet<Scalar>& set,
                         const Vector<Scalar>& anchor, const Vector<Scalar>& v, Scalar coef) {
  detail::require(coef > Scalar(0), "prox_step: coefficient must be positive");
  detail::require_same_dim(anchor, v, "prox_step");
  detail::require(anchor.size() == setup.dim(), "prox_step: dimension mismatch with prox setup");
  return project(set, Vector<Scalar>(anchor - v / coef));
}

/// argmin_{z in set} { <v / L, z> + V(z, z_anchor) + (mu / L) * V(z, w_anchor) }.
template <typename Scalar>
Vector<Scalar> mixed_prox_step(const ProxSetup<Scalar>& setup, const FeasibleSet<Scalar>& set,
                               const Vector<Scalar>& z_anchor, const Vector<Scalar>& w_anchor,
                               const Vector<Scalar>& v, Scalar L, Scalar mu) {
  detail::require(L > Scalar(0), "mixed_prox_step: L must be positive");
  detail::require(mu >= Scalar(0), "mixed_prox_step: mu must be nonnegative");
  detail::require_same_dim(z_anchor, w_anchor, "mixed_prox_step");
  detail::require_same_dim(z_anchor, v, "mixed_prox_step");
  detail::require(z_anchor.size() == setup.dim(), "mixed_prox_step: dimension mismatch with prox setup");
  if (mu == Scalar(0)) return project(set, Vector<Scalar>(z_anchor - v / L));
  return project(set, Vector<Scalar>((L * z_anchor + mu * w_anchor - v) / (L + mu)));
}

namespace detail {

// max over the set of 0.5*||x - z0||^2 with z0 already inside the set.
template <typename Scalar>
Scalar max_half_sq_distance(const FeasibleSet<Scalar>& set, const Vector<Scalar>& z0) {
  using Set = FeasibleSet<Scalar>;
  return std::visit(
      [&](const auto& s) -> Scalar {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, typename Set::Ball>) {
          const Scalar reach = s.radius + (z0 - s.center).norm();
          return Scalar(0.5) * reach * reach;
        } else if constexpr (std::is_same_v<T, typename Set::Box>) {
          const Vector<Scalar> far = (z0 - s.lower).cwiseAbs().cwiseMax((s.upper - z0).cwiseAbs());
          return Scalar(0.5) * far.squaredNorm();
        } else {
          Scalar total = 0;
          Index off = 0;
          for (const auto& b : s.blocks) {
            const Index n = b.dim();
            total += max_half_sq_distance(b, Vector<Scalar>(z0.segment(off, n)));
            off += n;
          }
          return total;
        }
      },
      set.variant());
}

}  // namespace detail

/// max_{x in set} V(x, z0) with z0 = argmin_{u in set} d(u).
template <typename Scalar>
Scalar max_bregman_radius(const ProxSetup<Scalar>& setup, const FeasibleSet<Scalar>& set) {
  detail::require(set.bounded(), "max_bregman_radius: feasible set is unbounded");
  detail::require(set.dim() == setup.dim(), "max_bregman_radius: dimension mismatch");
  const Vector<Scalar> z0 = project(set, setup.center());
  return detail::max_half_sq_distance(set, z0);
}

}  // namespace avi

#endif  // AVI_PROX_HPP
