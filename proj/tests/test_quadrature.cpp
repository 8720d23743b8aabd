#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "fiberbody/parallel.hpp"
#include "fiberbody/quadrature.hpp"
#include "fiberbody/sphere.hpp"

using namespace fiber;

TEST_CASE("gauss-legendre tabulated rules") {
  auto r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));

  auto r3 = gauss_legendre(3);
  CHECK(std::abs(r3.nodes[1]) < 1e-15);
  CHECK(r3.nodes[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));
  CHECK(r3.weights[1] == doctest::Approx(8.0 / 9).epsilon(1e-15));
  CHECK(r3.weights[0] == doctest::Approx(5.0 / 9).epsilon(1e-15));

  auto r1 = gauss_legendre(1);
  CHECK(r1.nodes.size() == 1);
  CHECK(r1.weights[0] == 2.0);
}

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  for (int n : {4, 9, 16, 64}) {
    auto r = gauss_legendre(n);
    double wsum = 0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    for (int i = 0; i + 1 < n; ++i) CHECK(r.nodes[i] < r.nodes[i + 1]);
    for (int i = 0; i < n; ++i) CHECK(r.nodes[i] == doctest::Approx(-r.nodes[n - 1 - i]).epsilon(1e-14));
    const int deg = 2 * n - 1;
    // int_0^2 x^deg = 2^(deg+1)/(deg+1)
    double got = integrate_gauss(r, 0.0, 2.0, [&](double x) { return std::pow(x, deg); });
    CHECK(got == doctest::Approx(std::pow(2.0, deg + 1) / (deg + 1)).epsilon(1e-12));
  }
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate_adaptive([](double x) { return std::sin(x); }, 0, kPi) == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate_adaptive([](double x) { return std::sqrt(1 - x * x); }, -1, 1) ==
        doctest::Approx(kPi / 2).epsilon(1e-8));
  CHECK(integrate_adaptive([](double x) { return std::exp(-x * x); }, -8, 8) ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("sphere samples") {
  auto four = sphere_sample(2, 4);
  REQUIRE(four.size() == 4);
  CHECK((four[0] - make_vec({1, 0})).norm() < 1e-15);
  CHECK((four[1] - make_vec({0, 1})).norm() < 1e-15);
  CHECK((four[2] - make_vec({-1, 0})).norm() < 1e-15);
  CHECK((four[3] - make_vec({0, -1})).norm() < 1e-15);

  auto six = sphere_sample(3, 6);
  REQUIRE(six.size() == 6);
  for (int k = 0; k < 3; ++k) {
    int hits = 0;
    for (const auto& v : six) hits += (v - unit(3, k)).norm() < 1e-15 || (v + unit(3, k)).norm() < 1e-15;
    CHECK(hits == 2);
  }

  for (auto mode : {SphereMode::UniformGrid, SphereMode::Fibonacci, SphereMode::SeededRandom})
    for (int dim : {1, 2, 3, 5})
      for (const auto& v : sphere_sample(dim, 37, mode, 11)) CHECK(std::abs(v.norm() - 1.0) < 1e-12);

  CHECK(sphere_sample(4, 20, SphereMode::SeededRandom, 5)[13] == sphere_sample(4, 20, SphereMode::SeededRandom, 5)[13]);
  CHECK(parse_sphere_mode("fibonacci") == SphereMode::Fibonacci);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; }, 7);
  for (auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(50, [](std::size_t i) { if (i == 31) throw std::runtime_error("x"); }, 4),
                  std::runtime_error);
}
