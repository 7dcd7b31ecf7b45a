#include <doctest.h>

#include "avi/operators.hpp"
#include "avi/random.hpp"
#include "oracles.hpp"

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace {

Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

avi::SaddleComposite<double> random_composite(std::uint64_t seed, Eigen::Index n, Eigen::Index m) {
  oracle::Gen g(seed);
  Mat A(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) A(i, j) = g.normal();
  }
  return {A, 0.5, 0.5};
}

}  // namespace

TEST_CASE("identity operator") {
  CHECK(avi::eval_identity(vec({1, 2})) == vec({1, 2}));
  CHECK(avi::eval_identity(Vec(Vec::Zero(3))) == Vec::Zero(3));
  const auto p = avi::identity_problem<double>(4, 1.0);
  CHECK(p.mu == 1.0);
  CHECK(*p.known_L == 1.0);
  CHECK(*p.known_solution == Vec::Zero(4));
}

TEST_CASE("diag operator") {
  CHECK(avi::eval_diag_squares(vec({1, 1, 1})) == vec({1, 4, 9}));
  CHECK(avi::eval_diag_squares(Vec(Vec::Zero(3))) == Vec::Zero(3));
  const auto p = avi::diag_problem<double>(2, 1.0);
  CHECK(*p.condition_number() == 4.0);
  CHECK(*avi::diag_problem<double>(100, 1.0).known_L == 1e4);
}

TEST_CASE("strong monotonicity of identity and diag") {
  oracle::Gen g(17);
  for (int t = 0; t < 1000; ++t) {
    const Eigen::Index n = g.integer(1, 8);
    const Vec u = g.vec(n), v = g.vec(n);
    const double d2 = (u - v).squaredNorm();
    const double id = (avi::eval_identity(u) - avi::eval_identity(v)).dot(u - v);
    const double dg = (avi::eval_diag_squares(u) - avi::eval_diag_squares(v)).dot(u - v);
    CHECK(id >= d2 * (1 - 1e-12));
    CHECK(dg >= d2 * (1 - 1e-12));
  }
}

TEST_CASE("known solutions satisfy the Minty inequality") {
  oracle::Gen g(23);
  const auto id = avi::identity_problem<double>(3, 2.0);
  const auto dg = avi::diag_problem<double>(3, 2.0);
  const auto ho = avi::holder_problem<double>(3, 2.0, 0.5, 1.0, 0.5);
  for (int t = 0; t < 200; ++t) {
    const Vec x = avi::project(id.set, Vec(g.vec(3, 2.0)));
    for (const auto* p : {&id, &dg, &ho}) CHECK(p->op(x).dot(*p->known_solution - x) <= 1e-8);
  }
}

TEST_CASE("covering-ball operator hand example") {
  avi::CoveringBallProblem<double> prob;
  prob.points = (Mat(2, 2) << 1, 0, 0, 2).finished();
  prob.alpha = (Mat(1, 2) << 1, 1).finished();
  prob.validate();
  const Vec g = avi::eval_covering_ball(prob, Vec(Vec::Zero(2)), Vec(Vec::Zero(1)));
  CHECK(g.isApprox(vec({0, -4, 5})));
  CHECK(prob.farthest(Vec::Zero(2)) == 1);
  CHECK(prob.psi(Vec::Zero(2)) == 4.0);

  // Away from ties with lambda = 0 the x-block is 2(x - A_k*).
  const Vec x = vec({0.5, -1});
  const Vec gx = avi::eval_covering_ball(prob, x, Vec(Vec::Zero(1)));
  CHECK(gx.head(2).isApprox(2.0 * (x - vec({0, 2}))));

  // Multiplier terms.
  const Vec gl = avi::eval_covering_ball(prob, x, vec({3}));
  CHECK(gl.head(2).isApprox(2.0 * (x - vec({0, 2})) + 2.0 * 3.0 * x));
  CHECK(gl[2] == doctest::Approx(5 - 1.25));

  CHECK_THROWS_AS(avi::eval_covering_ball(prob, x, vec({-0.1})), std::invalid_argument);
  CHECK_THROWS_AS(avi::eval_covering_ball(prob, x, vec({10.5})), std::invalid_argument);
}

TEST_CASE("covering-ball ties go to the smallest index") {
  avi::CoveringBallProblem<double> prob;
  prob.points = (Mat(3, 1) << -1, 1, 1).finished();
  prob.alpha = Mat::Ones(1, 1);
  CHECK(prob.farthest(Vec::Zero(1)) == 0);
}

TEST_CASE("covering-ball lambda block at the origin is 5") {
  const auto prob = avi::gen_covering_ball(9, 6, 4, 7, avi::CoefficientCase::ChiSq3);
  const Vec g = avi::eval_covering_ball(prob, Vec(Vec::Zero(10)));
  CHECK(g.tail(4).isApprox(Vec::Constant(4, 5.0)));
}

TEST_CASE("covering-ball x-block is a subgradient of psi") {
  oracle::Gen g(41);
  const auto prob = avi::gen_covering_ball(3, 5, 2, 9, avi::CoefficientCase::Lomax10);
  for (int t = 0; t < 500; ++t) {
    const Vec x = g.vec(5, 2.0), u = g.vec(5, 2.0);
    const Vec sub = avi::eval_covering_ball(prob, x, Vec(Vec::Zero(2))).head(5);
    CHECK(prob.psi(u) >= prob.psi(x) + sub.dot(u - x) - 1e-10);
  }
}

TEST_CASE("composite operator hand example") {
  const avi::SaddleComposite<double> sc(Mat::Ones(1, 1), 0.5, 0.5);
  CHECK(avi::eval_composite(sc, vec({1, 1, 0, 0})).isApprox(vec({1.5, -0.5, -1, 1})));
  CHECK(avi::eval_composite(sc, Vec(Vec::Zero(4))) == Vec::Zero(4));
  CHECK_THROWS_AS(avi::SaddleComposite<double>(Mat::Ones(1, 1), 0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(avi::SaddleComposite<double>(Mat::Ones(1, 1), 0.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(avi::eval_composite(sc, Vec(Vec::Zero(3))), std::invalid_argument);
}

TEST_CASE("composite companion prox") {
  const avi::SaddleComposite<double> sc(Mat::Ones(1, 1), 0.5, 0.25);
  // d = 0.25 x^2 + 0.125 y^2 + a^2 + b^2 / 1.5
  CHECK(sc.prox_value(vec({2, 2, 1, 3})) == doctest::Approx(1.0 + 0.5 + 1.0 + 6.0));
  oracle::Gen g(2);
  for (int t = 0; t < 50; ++t) {
    const Vec y = g.vec(4), x = g.vec(4);
    // Bregman divergence of d by its definition, with grad d = weights .* x.
    const Vec grad = sc.prox_weights().cwiseProduct(x);
    CHECK(sc.bregman(y, x) == doctest::Approx(sc.prox_value(y) - sc.prox_value(x) - grad.dot(y - x)));
  }
}

TEST_CASE("composite relative strong monotonicity and smoothness") {
  const auto sc = random_composite(77, 5, 5);
  const double norm_A = Eigen::JacobiSVD<Mat>(sc.A).singularValues()(0);
  const double Lt = avi::ltilde(0.0, 1.0, 0.0, norm_A, 0.0, sc.mu_x, sc.mu_y);
  oracle::Gen g(78);
  for (int t = 0; t < 1000; ++t) {
    const Vec u = g.vec(20), v = g.vec(20), w = g.vec(20);
    const double lhs = (avi::eval_composite(sc, u) - avi::eval_composite(sc, v)).dot(u - v);
    CHECK(lhs >= sc.bregman(u, v) + sc.bregman(v, u) - 1e-10);
    const double sm = (avi::eval_composite(sc, u) - avi::eval_composite(sc, w)).dot(u - v);
    CHECK(sm <= Lt * (sc.bregman(u, w) + sc.bregman(v, u)) + 1e-10);
  }
}

TEST_CASE("composite problem in prox coordinates") {
  const auto sc = random_composite(5, 3, 2);
  const auto p = avi::composite_problem(sc, 2.0);
  CHECK(p.dim() == 10);
  CHECK(p.mu == 1.0);
  oracle::Gen g(6);
  for (int t = 0; t < 100; ++t) {
    const Vec z = g.vec(10);
    const Vec u = avi::composite_to_prox_coords(sc, z);
    CHECK(avi::composite_from_prox_coords(sc, u).isApprox(z));
    // Euclidean divergence in u equals the companion divergence in z.
    const Vec z2 = g.vec(10);
    CHECK(0.5 * (u - avi::composite_to_prox_coords(sc, z2)).squaredNorm() ==
          doctest::Approx(sc.bregman(z, z2)));
    CHECK(p.op(Vec::Zero(10)).norm() == 0.0);
  }
}

TEST_CASE("ltilde examples") {
  CHECK(avi::ltilde(0.3, 1.0, 1.0, 2.0, 3.0, 1.0, 1.0) == doctest::Approx(6.0));
  CHECK(avi::ltilde(-1.0, 1.0, 1.0, 2.0, 3.0, 1.0, 1.0) == doctest::Approx(6.0));
  CHECK(avi::ltilde(2.0, 0.0, 1.0, 2.0, 3.0, 1.0, 1.0) == doctest::Approx(14.0));
  CHECK(avi::ltilde(0.5, 0.0, 1.0, 2.0, 3.0, 1.0, 1.0) == doctest::Approx(56.0));
  CHECK_THROWS_AS(avi::ltilde(0.0, 0.5, 1.0, 2.0, 3.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(avi::ltilde(-1.0, 0.0, 1.0, 2.0, 3.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("holder fixture") {
  CHECK(avi::eval_holder(0.5, 2.0, 1.0, vec({1, -2})).isApprox(2.5 * vec({1, -2})));
  CHECK(avi::eval_holder(0.0, 1.0, 0.5, vec({4, 0})).isApprox(vec({2, 0})));
  CHECK(avi::eval_holder(1.0, 1.0, 0.5, Vec(Vec::Zero(2))) == Vec::Zero(2));
  oracle::Gen g(9);
  const double mu = 0.3, Lnu = 1.5, diam = 2.0;
  for (double nu : {0.25, 0.5, 0.75}) {
    for (int t = 0; t < 300; ++t) {
      Vec x = g.vec(3), y = g.vec(3);
      if (x.norm() > 1) x /= x.norm();
      if (y.norm() > 1) y /= y.norm();
      const double lhs = (avi::eval_holder(mu, Lnu, nu, x) - avi::eval_holder(mu, Lnu, nu, y)).norm();
      CHECK(lhs <= (mu * diam + 3 * Lnu) * std::pow((x - y).norm(), nu) + 1e-12);
    }
  }
}
