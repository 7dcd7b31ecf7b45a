#ifndef AVI_OPERATORS_HPP
#define AVI_OPERATORS_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "avi/prox.hpp"
#include "avi/types.hpp"

namespace avi {

/// A variational inequality: find x* in `set` with <g(x), x* - x> <= 0 for all
/// x in `set`, where g is `op` and is mu-relatively strongly monotone.
template <typename Scalar>
struct VIProblem {
  using Operator = std::function<Vector<Scalar>(const Vector<Scalar>&)>;
  using Objective = std::function<Scalar(const Vector<Scalar>&)>;

  std::string name;
  Operator op;
  FeasibleSet<Scalar> set;
  Scalar mu = 1;
  std::optional<Scalar> known_L;
  std::optional<Scalar> known_delta;
  std::optional<Scalar> known_nu;
  std::optional<Vector<Scalar>> known_solution;
  Objective objective;  // optional, reported alongside the iterates

  Index dim() const { return set.dim(); }

  std::optional<Scalar> condition_number() const {
    if (!known_L) return std::nullopt;
    return *known_L / mu;
  }
};

// ---------------------------------------------------------------------------
// Minty test operators

template <typename Scalar>
Vector<Scalar> eval_identity(const Vector<Scalar>& x) {
  return x;
}

/// Coordinate i (1-based) scaled by i^2.
template <typename Scalar>
Vector<Scalar> eval_diag_squares(const Vector<Scalar>& x) {
  const Index n = x.size();
  Vector<Scalar> out(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar k = Scalar(i + 1);
    out[i] = k * k * x[i];
  }
  return out;
}

/// mu*x + L_nu*||x||^(nu-1)*x, the gradient of mu/2*||x||^2 + L_nu/(1+nu)*||x||^(1+nu).
template <typename Scalar>
Vector<Scalar> eval_holder(Scalar mu, Scalar L_nu, Scalar nu, const Vector<Scalar>& x) {
  detail::require(mu >= Scalar(0), "eval_holder: mu must be nonnegative");
  detail::require(L_nu > Scalar(0), "eval_holder: L_nu must be positive");
  detail::require(nu > Scalar(0) && nu <= Scalar(1), "eval_holder: nu must lie in (0, 1]");
  const Scalar r = x.norm();
  if (r == Scalar(0)) return Vector<Scalar>::Zero(x.size());
  return (mu + L_nu * std::pow(r, nu - Scalar(1))) * x;
}

template <typename Scalar>
VIProblem<Scalar> identity_problem(Index n, Scalar radius) {
  VIProblem<Scalar> p{"identity", [](const Vector<Scalar>& x) { return eval_identity(x); },
                      FeasibleSet<Scalar>::ball(n, radius)};
  p.mu = 1;
  p.known_L = Scalar(1);
  p.known_delta = Scalar(0);
  p.known_nu = Scalar(1);
  p.known_solution = Vector<Scalar>::Zero(n);
  return p;
}

template <typename Scalar>
VIProblem<Scalar> diag_problem(Index n, Scalar radius) {
  VIProblem<Scalar> p{"diag", [](const Vector<Scalar>& x) { return eval_diag_squares(x); },
                      FeasibleSet<Scalar>::ball(n, radius)};
  p.mu = 1;
  p.known_L = Scalar(n) * Scalar(n);
  p.known_delta = Scalar(0);
  p.known_nu = Scalar(1);
  p.known_solution = Vector<Scalar>::Zero(n);
  return p;
}

template <typename Scalar>
VIProblem<Scalar> holder_problem(Index n, Scalar radius, Scalar mu, Scalar L_nu, Scalar nu) {
  detail::require(mu > Scalar(0), "holder_problem: mu must be positive");
  VIProblem<Scalar> p{"holder",
                      [mu, L_nu, nu](const Vector<Scalar>& x) { return eval_holder(mu, L_nu, nu, x); },
                      FeasibleSet<Scalar>::ball(n, radius)};
  p.mu = mu;
  p.known_L = L_nu;
  p.known_nu = nu;
  p.known_solution = Vector<Scalar>::Zero(n);
  return p;
}

// ---------------------------------------------------------------------------
// Four-block composite saddle operator

/// min_x max_y x'Ay + 0.5||x||^2 - 0.5||y||^2 lifted to (x, y, a, b) with
/// omega = 0.5||.||^2. Requires 0 < mu_x, mu_y < 1 so the conjugates
/// alpha(a) = ||a||^2 / (2(1 - mu_x)) and beta(b) = ||b||^2 / (2(1 - mu_y)) exist.
template <typename Scalar>
struct SaddleComposite {
  Matrix<Scalar> A;  // n x m
  Scalar mu_x = Scalar(0.5);
  Scalar mu_y = Scalar(0.5);

  SaddleComposite(Matrix<Scalar> coupling, Scalar mux, Scalar muy)
      : A(std::move(coupling)), mu_x(mux), mu_y(muy) {
    detail::require(mu_x > Scalar(0) && mu_x < Scalar(1), "SaddleComposite: mu_x must lie in (0, 1)");
    detail::require(mu_y > Scalar(0) && mu_y < Scalar(1), "SaddleComposite: mu_y must lie in (0, 1)");
    detail::require(A.rows() >= 1 && A.cols() >= 1, "SaddleComposite: empty coupling matrix");
  }

  Index n() const { return A.rows(); }
  Index m() const { return A.cols(); }
  Index dim() const { return 2 * (n() + m()); }

  /// Diagonal of the companion prox Hessian, blocks (x, y, a, b).
  Vector<Scalar> prox_weights() const {
    Vector<Scalar> w(dim());
    w.segment(0, n()).setConstant(mu_x);
    w.segment(n(), m()).setConstant(mu_y);
    w.segment(n() + m(), n()).setConstant(Scalar(1) / (Scalar(1) - mu_x));
    w.segment(2 * n() + m(), m()).setConstant(Scalar(1) / (Scalar(1) - mu_y));
    return w;
  }

  /// d(x, y, a, b) = mu_x/2 ||x||^2 + mu_y/2 ||y||^2 + alpha(a) + beta(b).
  Scalar prox_value(const Vector<Scalar>& z) const {
    detail::require(z.size() == dim(), "SaddleComposite::prox_value: dimension mismatch");
    return Scalar(0.5) * (prox_weights().array() * z.array().square()).sum();
  }

  /// Bregman divergence of the companion prox-function.
  Scalar bregman(const Vector<Scalar>& y, const Vector<Scalar>& x) const {
    detail::require(y.size() == dim() && x.size() == dim(), "SaddleComposite::bregman: dimension mismatch");
    return Scalar(0.5) * (prox_weights().array() * (y - x).array().square()).sum();
  }
};

template <typename Scalar>
Vector<Scalar> eval_composite(const SaddleComposite<Scalar>& sc, const Vector<Scalar>& z) {
  detail::require(z.size() == sc.dim(), "eval_composite: block dimensions do not match");
  const Index n = sc.n();
  const Index m = sc.m();
  const auto x = z.segment(0, n);
  const auto y = z.segment(n, m);
  const auto a = z.segment(n + m, n);
  const auto b = z.segment(2 * n + m, m);
  Vector<Scalar> g(z.size());
  g.segment(0, n) = a + sc.mu_x * x + sc.A * y;
  g.segment(n, m) = -b + sc.mu_y * y - sc.A.transpose() * x;
  g.segment(n + m, n) = -x + a / (Scalar(1) - sc.mu_x);
  g.segment(2 * n + m, m) = y + b / (Scalar(1) - sc.mu_y);
  return g;
}

/// Generalized relative smoothness constant of the composite operator:
/// (2/delta)^((1-nu)/(1+nu)) * (Lxx^p/mu_x + Lxy^p/sqrt(mu_x mu_y) + Lyy^p/mu_y), p = 2/(1+nu).
template <typename Scalar>
Scalar ltilde(Scalar delta, Scalar nu, Scalar L_xx, Scalar L_xy, Scalar L_yy, Scalar mu_x, Scalar mu_y) {
  detail::require(nu >= Scalar(0) && nu <= Scalar(1), "ltilde: nu must lie in [0, 1]");
  detail::require(L_xx >= Scalar(0) && L_xy >= Scalar(0) && L_yy >= Scalar(0),
                  "ltilde: smoothness constants must be nonnegative");
  detail::require(mu_x > Scalar(0) && mu_y > Scalar(0), "ltilde: mu_x, mu_y must be positive");
  const Scalar p = Scalar(2) / (Scalar(1) + nu);
  const Scalar core = std::pow(L_xx, p) / mu_x + std::pow(L_xy, p) / std::sqrt(mu_x * mu_y) + std::pow(L_yy, p) / mu_y;
  if (nu == Scalar(1)) return core;
  detail::require(delta > Scalar(0), "ltilde: delta must be positive when nu < 1");
  return std::pow(Scalar(2) / delta, (Scalar(1) - nu) / (Scalar(1) + nu)) * core;
}

/// The composite VI written in coordinates u = D^(1/2) z where D is the
/// companion prox Hessian, so that the Euclidean prox on u reproduces the
/// companion Bregman divergence on z. The operator there is
/// D^(-1/2) g(D^(-1/2) u); it is 1-relatively strongly monotone with
/// solution 0, and ltilde(nu = 1) is recorded as its smoothness constant.
template <typename Scalar>
VIProblem<Scalar> composite_problem(const SaddleComposite<Scalar>& sc, Scalar radius) {
  const Vector<Scalar> inv_sqrt_w = sc.prox_weights().array().rsqrt();
  VIProblem<Scalar> p{"composite",
                      [sc, inv_sqrt_w](const Vector<Scalar>& u) {
                        const Vector<Scalar> z = inv_sqrt_w.cwiseProduct(u);
                        return Vector<Scalar>(inv_sqrt_w.cwiseProduct(eval_composite(sc, z)));
                      },
                      FeasibleSet<Scalar>::ball(sc.dim(), radius)};
  p.mu = 1;
  const Scalar norm_A = Eigen::JacobiSVD<Matrix<Scalar>>(sc.A).singularValues()(0);
  p.known_L = ltilde(Scalar(0), Scalar(1), Scalar(0), norm_A, Scalar(0), sc.mu_x, sc.mu_y);
  p.known_delta = Scalar(0);
  p.known_nu = Scalar(1);
  p.known_solution = Vector<Scalar>::Zero(sc.dim());
  return p;
}

/// Map between composite coordinates z and prox coordinates u = D^(1/2) z.
template <typename Scalar>
Vector<Scalar> composite_to_prox_coords(const SaddleComposite<Scalar>& sc, const Vector<Scalar>& z) {
  return sc.prox_weights().array().sqrt().matrix().cwiseProduct(z);
}

template <typename Scalar>
Vector<Scalar> composite_from_prox_coords(const SaddleComposite<Scalar>& sc, const Vector<Scalar>& u) {
  return sc.prox_weights().array().rsqrt().matrix().cwiseProduct(u);
}

// ---------------------------------------------------------------------------
// Covering-ball problem with quadratic functional constraints

enum class CoefficientCase { Lomax10, ChiSq3 };

inline const char* to_string(CoefficientCase c) {
  return c == CoefficientCase::Lomax10 ? "lomax10" : "chisq3";
}

inline CoefficientCase coefficient_case_from_string(const std::string& s) {
  if (s == "lomax10" || s == "case1" || s == "Lomax10") return CoefficientCase::Lomax10;
  if (s == "chisq3" || s == "case2" || s == "ChiSq3") return CoefficientCase::ChiSq3;
  throw std::invalid_argument("unknown coefficient case '" + s + "'");
}

/// min_x max_k ||x - A_k||^2 subject to sum_i alpha_pi x_i^2 - 5 <= 0, x in
/// Ball(0, primal_radius), with multipliers boxed in [0, dual_cap]^m.
template <typename Scalar>
struct CoveringBallProblem {
  Matrix<Scalar> points;  // s x n, row k is A_k
  Matrix<Scalar> alpha;   // m x n
  Scalar dual_cap = 10;
  Scalar primal_radius = 5;
  std::uint64_t seed = 0;
  CoefficientCase coefficient_case = CoefficientCase::Lomax10;

  Index n() const { return points.cols(); }
  Index m() const { return alpha.rows(); }
  Index s() const { return points.rows(); }

  void validate() const {
    detail::require(n() >= 1 && m() >= 1 && s() >= 1, "CoveringBallProblem: dimensions must be >= 1");
    detail::require(alpha.cols() == n(), "CoveringBallProblem: alpha must be m x n");
    detail::require((alpha.array() >= Scalar(0)).all(), "CoveringBallProblem: alpha must be nonnegative");
    detail::require(dual_cap > Scalar(0), "CoveringBallProblem: dual cap must be positive");
    detail::require(primal_radius > Scalar(0), "CoveringBallProblem: primal radius must be positive");
  }

  /// Index of the farthest point; the smallest index wins ties.
  Index farthest(const Vector<Scalar>& x) const {
    Index best = 0;
    Scalar best_d = -1;
    for (Index k = 0; k < s(); ++k) {
      const Scalar d = (x - points.row(k).transpose()).squaredNorm();
      if (d > best_d) {
        best_d = d;
        best = k;
      }
    }
    return best;
  }

  Scalar psi(const Vector<Scalar>& x) const {
    detail::require(x.size() == n(), "CoveringBallProblem::psi: dimension mismatch");
    return (x - points.row(farthest(x)).transpose()).squaredNorm();
  }

  /// phi_p(x) = sum_i alpha_pi x_i^2 - 5.
  Vector<Scalar> constraints(const Vector<Scalar>& x) const {
    return (alpha * x.cwiseAbs2()).array() - Scalar(5);
  }

  FeasibleSet<Scalar> feasible_set() const {
    return FeasibleSet<Scalar>::product(
        {FeasibleSet<Scalar>::ball(n(), primal_radius),
         FeasibleSet<Scalar>::box(Vector<Scalar>::Zero(m()), Vector<Scalar>::Constant(m(), dual_cap))});
  }
};

/// Lagrangian VI operator G(x, lam) = (dpsi(x) + sum_p lam_p grad phi_p(x), -phi(x)),
/// returned as one vector with the x-block first.
template <typename Scalar>
Vector<Scalar> eval_covering_ball(const CoveringBallProblem<Scalar>& prob, const Vector<Scalar>& x,
                                  const Vector<Scalar>& lam) {
  detail::require(x.size() == prob.n(), "eval_covering_ball: x has wrong dimension");
  detail::require(lam.size() == prob.m(), "eval_covering_ball: lambda has wrong dimension");
  detail::require((lam.array() >= Scalar(0)).all() && (lam.array() <= prob.dual_cap).all(),
                  "eval_covering_ball: multipliers outside [0, dual_cap]");
  const Index k = prob.farthest(x);
  Vector<Scalar> out(prob.n() + prob.m());
  out.head(prob.n()) = Scalar(2) * (x - prob.points.row(k).transpose()) +
                       Scalar(2) * (prob.alpha.transpose() * lam).cwiseProduct(x);
  out.tail(prob.m()) = -prob.constraints(x);
  return out;
}

template <typename Scalar>
Vector<Scalar> eval_covering_ball(const CoveringBallProblem<Scalar>& prob, const Vector<Scalar>& z) {
  detail::require(z.size() == prob.n() + prob.m(), "eval_covering_ball: dimension mismatch");
  return eval_covering_ball(prob, Vector<Scalar>(z.head(prob.n())), Vector<Scalar>(z.tail(prob.m())));
}

/// mu defaults to 2, the modulus of each ||x - A_k||^2 in x; the multiplier
/// block contributes nothing to strong monotonicity.
template <typename Scalar>
VIProblem<Scalar> covering_ball_vi(const CoveringBallProblem<Scalar>& prob, Scalar mu = Scalar(2)) {
  prob.validate();
  VIProblem<Scalar> p{"covering_ball",
                      [prob](const Vector<Scalar>& z) { return eval_covering_ball(prob, z); },
                      prob.feasible_set()};
  p.mu = mu;
  const Index n = prob.n();
  p.objective = [prob, n](const Vector<Scalar>& z) { return prob.psi(Vector<Scalar>(z.head(n))); };
  return p;
}

}  // namespace avi

#endif  // AVI_OPERATORS_HPP
