#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "fiberbody/curved.hpp"
#include "fiberbody/slicer.hpp"
#include "fiberbody/sphere.hpp"

using namespace fiber;

namespace {
const auto kSplit = ProjectionSplit::coordinate(1, 2);
const Body kBall = Body::ball(1.0, 3);
}  // namespace

TEST_CASE("curvature check") {
  auto ball = curvature_validate(kBall);
  CHECK(ball.curved);
  CHECK(ball.min_eigenvalue == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(curvature_validate(Body::schneider(-0.3)).curved);
  // equator of S_{-0.4} has zero meridian curvature
  auto s = curvature_validate(Body::schneider(-0.4));
  CHECK(!s.curved);
  CHECK(s.weakly_curved);
  CHECK(!curvature_validate(Body::cube()).weakly_curved);
  CHECK(!curvature_validate(Body::elliptope()).weakly_curved);
  auto dice = curvature_validate(Body::dice());
  CHECK(!dice.smooth);
  CHECK(!dice.weakly_curved);
}

TEST_CASE("non-curved bodies are refused") {
  CHECK_THROWS_AS(CurvedIntegrand(Body::cube(), kSplit, make_vec({1, 0})), NotCurvedError);
  CHECK_THROWS_AS(CurvedIntegrand(Body::elliptope(), kSplit, make_vec({1, 0})), NotCurvedError);
  CHECK_THROWS_AS(CurvedIntegrand(Body::dice(), kSplit, make_vec({1, 0})), NotCurvedError);
  CHECK_THROWS_AS(CurvedIntegrand(kBall, kSplit, make_vec({2, 0})), DomainError);
}

TEST_CASE("psi") {
  CurvedIntegrand ball(kBall, kSplit, make_vec({1, 0}));
  CHECK(psi(ball, make_vec({0}))(0) == doctest::Approx(0.0));
  for (double t : {-3.0, -0.5, 0.25, 2.0})
    CHECK(psi(ball, make_vec({t}))(0) == doctest::Approx(t / std::sqrt(1 + t * t)).epsilon(1e-9));
  CurvedIntegrand s(Body::schneider(-0.25), kSplit, make_vec({1, 0}));
  CHECK(std::abs(psi(s, make_vec({0}))(0)) < 1e-9);
}

TEST_CASE("ball fiber body is a disc of radius pi/2") {
  CurvedIntegrand ci(kBall, kSplit, make_vec({1, 0}));
  for (const auto& u : circle_directions(7, 0.3)) {
    auto c = ci.with_direction(u);
    CHECK(curved_fiber_support(c).value == doctest::Approx(kPi / 2).epsilon(1e-4));
  }
  auto g = curved_fiber_gradient(ci);
  CHECK(g.gradient(0) == doctest::Approx(kPi / 2).epsilon(1e-4));
  CHECK(std::abs(g.gradient(1)) < 1e-6);
  CHECK(!g.ill_conditioned);
}

TEST_CASE("curved route agrees with the slicer on Schneider's body") {
  Body s = Body::schneider(-0.25);
  CurvedIntegrand ci(s, kSplit, make_vec({1, 0}));
  for (const auto& u : circle_directions(6, 0.15)) {
    auto c = ci.with_direction(u);
    double curved = curved_fiber_support(c).value;
    double slicer = fiber_support_numeric(s, kSplit, u, QuadratureRule::gauss(64));
    CHECK(curved == doctest::Approx(slicer).epsilon(1e-3));
    CHECK(curved_fiber_support(ci.with_direction(-u)).value == doctest::Approx(curved).epsilon(1e-9));
  }
}

TEST_CASE("curved gradient") {
  Body s = Body::schneider(-0.3);
  CurvedIntegrand ci(s, kSplit, make_vec({1, 0}));
  auto g = curved_fiber_gradient(ci);
  CHECK(g.value == doctest::Approx(curved_fiber_support(ci).value).epsilon(1e-6));
  Vec u = make_vec({0.6, -0.8});
  auto plus = curved_fiber_gradient(ci.with_direction(u));
  auto minus = curved_fiber_gradient(ci.with_direction(-u));
  CHECK((plus.gradient + minus.gradient).norm() < 1e-6);
  // tangential component against a finite difference of the support along the circle
  const double e = 1e-4;
  Vec t = make_vec({0.8, 0.6});
  double hp = curved_fiber_support(ci.with_direction((u + e * t).normalized())).value * (u + e * t).norm();
  double hm = curved_fiber_support(ci.with_direction((u - e * t).normalized())).value * (u - e * t).norm();
  CHECK(plus.gradient.dot(t) == doctest::Approx((hp - hm) / (2 * e)).epsilon(1e-4));
}

TEST_CASE("printed Schneider polynomial") {
  CHECK(schneider_fiber_closed(-0.25, make_vec({1, 0})) == doctest::Approx(-0.8836).epsilon(1e-4));
  CHECK(schneider_fiber_closed(-0.25, make_vec({0, 1})) == doctest::Approx(kPi / 64 * 26.4375).epsilon(1e-14));
  Vec u = make_vec({0.3, -1.2});
  CHECK(schneider_fiber_closed(-0.1, u) == schneider_fiber_closed(-0.1, Vec(-u)));
  CHECK_THROWS_AS(schneider_fiber_closed(-0.25, make_vec({0, 0})), DomainError);
}

TEST_CASE("quartic fit recovers a known form") {
  std::vector<Vec> dirs = circle_directions(16, 0.1);
  std::vector<double> vals;
  for (const auto& u : dirs) vals.push_back(2 * std::pow(u[0], 4) - u[0] * u[0] * u[1] * u[1] + 0.5 * std::pow(u[1], 4));
  auto fit = fit_quartic_on_circle(dirs, vals);
  CHECK(fit.max_residual < 1e-12);
  CHECK(fit.coefficients[0] == doctest::Approx(2.0));
  CHECK(std::abs(fit.coefficients[1]) < 1e-10);
  CHECK(fit.coefficients[2] == doctest::Approx(-1.0));
  CHECK(fit.coefficients[4] == doctest::Approx(0.5));
}

TEST_CASE("Schneider fiber body is a quartic on the circle") {
  const double a = -0.25;
  auto r = schneider_report(a);
  CHECK(r.max_route_gap < 1e-3);
  CHECK(r.fit.max_residual < 1e-6);
  const double c = kPi / 64;
  // the u3^4 and mixed coefficients agree with the printed form; u2^4 carries (a-2)^2
  CHECK(r.fit.coefficients[0] == doctest::Approx(c * 8 * (a - 2) * (a - 2)).epsilon(1e-4));
  CHECK(std::abs(r.fit.coefficients[1]) < 1e-6);
  CHECK(r.fit.coefficients[2] == doctest::Approx(-c * 8 * (a * a + 2 * a - 8)).epsilon(1e-4));
  CHECK(std::abs(r.fit.coefficients[3]) < 1e-6);
  CHECK(r.fit.coefficients[4] == doctest::Approx(c * (-25 * a * a + 16 * a + 32)).epsilon(1e-4));
  CHECK(!r.diagnosis.empty());
}
