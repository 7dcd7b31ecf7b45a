#include <doctest.h>

#include "avi/prox.hpp"
#include "oracles.hpp"

using avi::FeasibleSet;
using avi::ProxSetup;
using Vec = Eigen::VectorXd;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }

oracle::SimpleSet simple_ball(const Vec& c, double r) {
  oracle::SimpleSet s;
  s.is_ball = true;
  s.center = c;
  s.radius = r;
  return s;
}

}  // namespace

TEST_CASE("bregman examples") {
  const auto s = ProxSetup<double>::origin(2);
  CHECK(avi::bregman(s, v2(3, 4), v2(0, 0)) == doctest::Approx(12.5));
  CHECK(avi::bregman(s, v2(-1.5, 2), v2(-1.5, 2)) == 0.0);
  CHECK_THROWS_AS(avi::bregman(s, v2(1, 2), Vec(Vec::Zero(3))), std::invalid_argument);
}

TEST_CASE("bregman is symmetric, nonnegative and independent of center and scale") {
  oracle::Gen g(101);
  for (int t = 0; t < 100; ++t) {
    const Eigen::Index n = g.integer(1, 6);
    const Vec y = g.vec(n), x = g.vec(n);
    const ProxSetup<double> a(Vec::Zero(n));
    const ProxSetup<double> b(g.vec(n, 3.0), g.uniform(0.1, 10.0));
    const double vyx = avi::bregman(a, y, x);
    CHECK(vyx >= 0.0);
    CHECK(vyx == doctest::Approx(avi::bregman(a, x, y)).epsilon(1e-14));
    CHECK(vyx == doctest::Approx(avi::bregman(b, y, x)).epsilon(1e-14));
    // The defining formula d(y) - d(x) - <grad d(x), y - x> on the recentred, rescaled base.
    const double direct = b.value(y) - b.value(x) - b.gradient(x).dot(y - x);
    CHECK(direct == doctest::Approx(vyx).epsilon(1e-9).scale(1.0));
  }
}

TEST_CASE("prox setup rejects degenerate scale") {
  CHECK_THROWS_AS(ProxSetup<double>(v2(0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ProxSetup<double>(v2(0, 0), -1.0), std::invalid_argument);
}

TEST_CASE("projection examples") {
  CHECK(avi::project(FeasibleSet<double>::ball(2, 1.0), v2(3, 4)).isApprox(v2(0.6, 0.8), 1e-15));
  const auto half = FeasibleSet<double>::box(v2(0, 0), v2(INFINITY, INFINITY));
  CHECK(avi::project(half, v2(-1, 2)) == v2(0, 2));
  CHECK_FALSE(half.bounded());
}

TEST_CASE("projection is idempotent and leaves members unchanged") {
  oracle::Gen g(7);
  const auto ball = FeasibleSet<double>::ball(v2(1, -1), 2.0);
  const auto box = FeasibleSet<double>::box(v2(-1, 0), v2(1, 3));
  const auto prod = FeasibleSet<double>::product({ball, box});
  for (int t = 0; t < 100; ++t) {
    const Vec p = g.vec(4, 4.0);
    const Vec q = avi::project(prod, p);
    CHECK(prod.contains(q, 1e-12));
    CHECK(avi::project(prod, q) == q);
    const Vec inside = avi::project(box, Vec(g.vec(2, 5.0)));
    CHECK(avi::project(box, inside) == inside);
  }
}

TEST_CASE("product projection is blockwise") {
  const auto prod = FeasibleSet<double>::product(
      {FeasibleSet<double>::ball(2, 1.0), FeasibleSet<double>::box(Vec::Zero(1), Vec::Ones(1))});
  const Vec p = (Vec(3) << 3, 4, 7).finished();
  const Vec q = avi::project(prod, p);
  CHECK(q.isApprox((Vec(3) << 0.6, 0.8, 1).finished(), 1e-15));
  CHECK(prod.dim() == 3);
}

TEST_CASE("set construction errors") {
  CHECK_THROWS_AS(FeasibleSet<double>::ball(2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet<double>::ball(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet<double>::box(v2(1, 0), v2(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet<double>::box(v2(0, 0), Vec::Ones(3)), std::invalid_argument);
  CHECK_THROWS_AS(FeasibleSet<double>::product({}), std::invalid_argument);
  CHECK_THROWS_AS(avi::project(FeasibleSet<double>::ball(2, 1.0), Vec(Vec::Zero(3))), std::invalid_argument);
}

TEST_CASE("prox_step examples") {
  const auto s = ProxSetup<double>::origin(2);
  const auto huge = FeasibleSet<double>::ball(2, 1e6);
  const auto unit = FeasibleSet<double>::ball(2, 1.0);
  CHECK(avi::prox_step(s, huge, v2(1, 0), v2(2, 0), 1.0).isApprox(v2(-1, 0), 1e-15));
  CHECK(avi::prox_step(s, unit, v2(0, 0), v2(-2, 0), 1.0).isApprox(v2(1, 0), 1e-15));
  CHECK(avi::prox_step(s, unit, v2(3, 4), v2(0, 0), 5.0).isApprox(v2(0.6, 0.8), 1e-15));
  CHECK_THROWS_AS(avi::prox_step(s, unit, v2(0, 0), v2(0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(avi::prox_step(s, unit, v2(0, 0), v2(0, 0), -1.0), std::invalid_argument);

  // Oracle agreement on the two derived examples.
  const Vec w1 = oracle::prox_min(simple_ball(v2(0, 0), 1e6), v2(1, 0), v2(2, 0), 1.0);
  CHECK((w1 - v2(-1, 0)).norm() < 1e-8);
  const Vec w2 = oracle::prox_min(simple_ball(v2(0, 0), 1.0), v2(0, 0), v2(-2, 0), 1.0);
  CHECK((w2 - v2(1, 0)).norm() < 1e-8);
}

TEST_CASE("mixed_prox_step examples") {
  const auto s = ProxSetup<double>::origin(2);
  const auto ball2 = FeasibleSet<double>::ball(2, 2.0);
  CHECK(avi::mixed_prox_step(s, ball2, v2(1, 0), v2(0, 0), v2(0, 0), 1.0, 1.0).isApprox(v2(0.5, 0), 1e-15));
  CHECK(avi::mixed_prox_step(s, ball2, v2(1, 0), v2(-1, 1), v2(0.3, 2), 2.0, 0.0) ==
        avi::prox_step(s, ball2, v2(1, 0), v2(0.3, 2), 2.0));
  CHECK(avi::mixed_prox_step(s, ball2, v2(3, 0), v2(3, 0), v2(0, 0), 1.0, 0.7).isApprox(v2(2, 0), 1e-15));
  CHECK_THROWS_AS(avi::mixed_prox_step(s, ball2, v2(1, 0), v2(0, 0), v2(0, 0), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(avi::mixed_prox_step(s, ball2, v2(1, 0), v2(0, 0), v2(0, 0), 1.0, -1.0), std::invalid_argument);

  const Vec z = oracle::mixed_prox_min(simple_ball(v2(0, 0), 2.0), v2(1, 0), v2(0, 0), v2(0, 0), 1.0, 1.0);
  CHECK((z - v2(0.5, 0)).norm() < 1e-8);
}

TEST_CASE("prox optimality certificate at sampled feasible points") {
  oracle::Gen g(33);
  for (int t = 0; t < 30; ++t) {
    const Eigen::Index n = g.integer(2, 5);
    const auto set = t % 2 == 0 ? FeasibleSet<double>::ball(g.vec(n), g.uniform(0.5, 2.0))
                                : FeasibleSet<double>::box(-g.vec_uniform(n, 0.1, 2), g.vec_uniform(n, 0.1, 2));
    const ProxSetup<double> s(Vec::Zero(n));
    const Vec anchor = avi::project(set, g.vec(n, 2.0));
    const Vec v = g.vec(n, 3.0);
    const double coef = g.uniform(0.2, 5.0);
    const Vec w = avi::prox_step(s, set, anchor, v, coef);
    for (int k = 0; k < 100; ++k) {
      const Vec u = avi::project(set, Vec(g.vec(n, 3.0)));
      CHECK((v + coef * (w - anchor)).dot(u - w) >= -1e-9);
      // Three-point form of the same certificate.
      CHECK((v / coef).dot(w - u) <=
            avi::bregman(s, u, anchor) - avi::bregman(s, u, w) - avi::bregman(s, w, anchor) + 1e-9);
    }
  }
}

TEST_CASE("prox steps do not depend on center and scale") {
  oracle::Gen g(5);
  const auto set = FeasibleSet<double>::ball(3, 1.5);
  for (int t = 0; t < 20; ++t) {
    const ProxSetup<double> a = ProxSetup<double>::origin(3);
    const ProxSetup<double> b(g.vec(3), g.uniform(0.01, 100.0));
    const Vec z = avi::project(set, Vec(g.vec(3)));
    const Vec w = avi::project(set, Vec(g.vec(3)));
    const Vec v = g.vec(3);
    CHECK(avi::prox_step(a, set, z, v, 1.7) == avi::prox_step(b, set, z, v, 1.7));
    CHECK(avi::mixed_prox_step(a, set, z, w, v, 1.7, 0.4) == avi::mixed_prox_step(b, set, z, w, v, 1.7, 0.4));
  }
}

TEST_CASE("max_bregman_radius") {
  CHECK(avi::max_bregman_radius(ProxSetup<double>::origin(2), FeasibleSet<double>::ball(2, 2.0)) ==
        doctest::Approx(2.0));
  CHECK(avi::max_bregman_radius(ProxSetup<double>::origin(2), FeasibleSet<double>::box(v2(0, 0), v2(1, 1))) ==
        doctest::Approx(1.0));
  // Prox center outside the ball: z0 lands on the boundary, the antipode is farthest.
  const auto ball = FeasibleSet<double>::ball(v2(1, 1), 0.5);
  const ProxSetup<double> far(v2(10, -3));
  const double r = avi::max_bregman_radius(far, ball);
  CHECK(r == doctest::Approx(0.5 * 1.0 * 1.0));
  const Vec z0 = avi::project(ball, far.center());
  double sampled = 0;
  for (int k = 0; k < 20000; ++k) {
    const double th = 2.0 * M_PI * k / 20000.0;
    const Vec x = v2(1 + 0.5 * std::cos(th), 1 + 0.5 * std::sin(th));
    sampled = std::max(sampled, 0.5 * (x - z0).squaredNorm());
  }
  CHECK(sampled == doctest::Approx(r).epsilon(1e-6));
  CHECK(sampled <= r + 1e-12);

  const auto half = FeasibleSet<double>::box(v2(0, 0), v2(INFINITY, 1));
  CHECK_THROWS_AS(avi::max_bregman_radius(ProxSetup<double>::origin(2), half), std::invalid_argument);
}
