// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fiberbody/curved.hpp"
#include "fiberbody/puffed.hpp"
#include "fiberbody/quadrature.hpp"
#include "fiberbody/routes.hpp"
#include "fiberbody/slicer.hpp"
#include "fiberbody/sphere.hpp"
#include "fiberbody/zonoids.hpp"

using namespace fiber;

namespace {

const auto kSplit = ProjectionSplit::coordinate(1, 2);

struct Outcome {
  bool ok = true;
  std::string detail;
  void need(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Vec gaussian(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> g;
  Vec v(d);
  for (int i = 0; i < d; ++i) v(i) = g(rng);
  return v;
}

std::vector<Vec> random_zonotope(std::mt19937_64& rng, int count) {
  std::vector<Vec> z;
  for (int i = 0; i < count; ++i) z.push_back(gaussian(rng, 3));
  return z;
}

Outcome elliptope_fiber() {
  Outcome o;
  const auto rule = QuadratureRule::gauss(64);
  double worst = 0;
  for (const auto& u : circle_directions(64, 0.01)) {
    double h = fiber_support_numeric(Body::elliptope(), kSplit, u, rule);
    worst = std::max(worst, std::abs(h - elliptope_fiber_closed(u)) / elliptope_fiber_closed(u));
  }
  o.need(worst <= 1e-3, "relative error too large");
  double h11 = fiber_support_numeric(Body::elliptope(), kSplit, make_vec({1, 1}), rule);
  double h01 = fiber_support_numeric(Body::elliptope(), kSplit, make_vec({0, 1}), rule);
  o.need(std::abs(h11 - 8.0 / 3.0) <= 1e-3 * 8.0 / 3.0, "h(1,1)");
  o.need(std::abs(h01 - 2.0) <= 1e-3 * 2.0, "h(0,1)");
  o.detail = fmt("max rel err %.2e, h(1,1)=%.7f, h(0,1)=%.7f", worst, h11, h01) +
             (o.detail.empty() ? "" : " [" + o.detail + "]");
  return o;
}

Outcome fiber_cube() {
  Outcome o;
  auto g = fiber_zonotope({2 * unit(3, 0), 2 * unit(3, 1), 2 * unit(3, 2)}, kSplit);
  o.need(g.size() == 2 && (g[0] - make_vec({4, 0})).norm() == 0 && (g[1] - make_vec({0, 4})).norm() == 0,
         "generators differ from {(4,0),(0,4)}");
  double worst = 0;
  for (const auto& u : circle_directions(64, 0.3))
    worst = std::max(worst, std::abs(zonotope_support(g, u) - 2 * (std::abs(u[0]) + std::abs(u[1]))));
  o.need(worst <= 1e-12, "support of the square");
  o.detail = fmt("generators (4,0),(0,4); max support err %.1e", worst) + (o.detail.empty() ? "" : " [" + o.detail + "]");
  return o;
}

Outcome sandwich() {
  Outcome o;
  const auto rule = QuadratureRule::gauss(64);
  auto cube = fiber_zonotope({2 * unit(3, 0), 2 * unit(3, 1), 2 * unit(3, 2)}, kSplit);
  double slack = 1e9;
  for (const auto& u : circle_directions(64, 0.02)) {
    double t = fiber_support_numeric(Body::tetrahedron(), kSplit, u, rule);
    double e = fiber_support_numeric(Body::elliptope(), kSplit, u, rule);
    double c = zonotope_support(cube, u);
    slack = std::min({slack, e - t, c - e});
  }
  o.need(slack >= -1e-3, "inclusion violated");
  o.detail = fmt("min slack %.3e", slack);
  return o;
}

Outcome dice_routes() {
  Outcome o;
  auto dirs = circle_directions(16);
  auto mc = fiber_zonoid_mc_batch(zonoid_model(Body::dice()), kSplit, dirs, 1000000, 7);
  const auto rule = QuadratureRule::gauss(64);
  double worst_se = 0, worst_slicer = 0, worst_ratio = 0, max_se = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    double closed = dice_fiber_closed(dirs[k]);
    worst_se = std::max(worst_se, std::abs(mc[k].value - closed) / mc[k].std_error);
    max_se = std::max(max_se, mc[k].std_error);
    double sl = fiber_support_numeric(Body::dice(), kSplit, dirs[k], rule);
    worst_slicer = std::max(worst_slicer, std::abs(sl - closed));
    worst_ratio = std::max(worst_ratio, std::abs(closed / dice_fiber_printed(dirs[k]) - 4.0));
  }
  o.need(worst_se <= 3.0, "MC outside 3 SE");
  o.need(worst_slicer <= 1e-2, "slicer off");
  // the printed expression is a quarter of the fiber body
  o.need(worst_ratio <= 1e-12, "printed ratio");
  double printed = dice_fiber_printed(make_vec({1, 0}));
  o.need(std::abs(printed - (1 + kPi / 8 + 0.5)) <= 1e-12, "printed h(1,0)");
  o.detail = fmt("MC max %.2f SE (SE<=%.1e), slicer max err %.1e", worst_se, max_se, worst_slicer) +
             fmt("; h(1,0)=%.5f = 4 x %.5f", dice_fiber_closed(make_vec({1, 0})), printed);
  return o;
}

Outcome mixed_fiber() {
  Outcome o;
  auto disc = [](int i) { return RandomVectorModel::scaled(kPi, RandomVectorModel::disc_uniform(unit(3, i))); };
  auto dirs = circle_directions(8, 0.05);
  auto m12 = mixed_fiber_mc_batch({disc(0), disc(1)}, kSplit, dirs, 1000000, 11);
  auto m23 = mixed_fiber_mc_batch({disc(1), disc(2)}, kSplit, dirs, 1000000, 12);
  double w12 = 0, w23 = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    // with the disc normalisation D = pi K0(sigma): M(D1,D2) = D1, M(D2,D3) = Lambda
    w12 = std::max(w12, std::abs(m12[k].value - dirs[k].norm()) / m12[k].std_error);
    w23 = std::max(w23, std::abs(m23[k].value - lambda_support(dirs[k][0], dirs[k][1])) / m23[k].std_error);
  }
  o.need(w12 <= 3, "M(D1,D2)");
  o.need(w23 <= 3, "M(D2,D3)");

  std::mt19937_64 rng(2718);
  auto z = random_zonotope(rng, 4);
  auto model = zonoid_model(Body::zonotope(z));
  auto fz = fiber_zonotope(z, kSplit);
  auto mkk = mixed_fiber_mc_batch({model, model}, kSplit, dirs, 1000000, 13);
  double wkk = 0;
  for (std::size_t k = 0; k < dirs.size(); ++k)
    wkk = std::max(wkk, std::abs(mkk[k].value - zonotope_support(fz, dirs[k])) / mkk[k].std_error);
  o.need(wkk <= 3, "M(K,K)");
  o.detail = fmt("max |dev|/SE: (D1,D2) %.2f, (D2,D3) %.2f, (K,K) %.2f", w12, w23, wkk);
  return o;
}

Outcome shadow() {
  Outcome o;
  std::mt19937_64 rng(314);
  double worst = 0;
  for (int t = 0; t < 5; ++t) {
    auto z = random_zonotope(rng, 3 + t);
    auto fz = fiber_zonotope(z, kSplit);
    for (const auto& u : circle_directions(16, 0.2))
      worst = std::max(worst, std::abs(shadow_fiber_support(z, kSplit, u) - zonotope_support(fz, u)));
  }
  o.need(worst <= 1e-9, "shadow route differs");
  o.detail = fmt("max err %.1e", worst);
  return o;
}

Outcome invariants() {
  Outcome o;
  RouteOptions opts;
  opts.seed = 17;
  std::vector<std::pair<std::string, Body>> bodies{
      {"elliptope", Body::elliptope()}, {"dice", Body::dice()}, {"cube", Body::cube()}, {"schneider(-0.3)", Body::schneider(-0.3)}};
  int checks = 0;
  for (const auto& [name, body] : bodies)
    for (Suite s : {Suite::Homogeneity, Suite::Symmetry, Suite::Equivariance}) {
      auto r = run_verify(body, kSplit, s, opts, 16);
      for (const auto& c : r.checks) {
        ++checks;
        o.need(c.passed, name + " " + c.name + fmt(" %.2e > %.2e", c.residual, c.tolerance));
      }
    }
  o.detail = std::to_string(checks) + " checks" + (o.detail.empty() ? "" : " [" + o.detail + "]");
  return o;
}

Outcome schneider() {
  Outcome o;
  std::string line;
  for (double a : {-0.4, -0.3, -0.25}) {
    auto r = schneider_report(a, 16, 64);
    o.need(r.max_route_gap <= 1e-3, fmt("alpha %.2f route gap %.1e", a, r.max_route_gap));
    o.need(r.fit.max_residual <= 1e-6, fmt("alpha %.2f fit residual %.1e", a, r.fit.max_residual));
    o.need(!r.diagnosis.empty(), "no diagnosis");
    line += fmt("a=%.2f gap %.1e fit %.1e; ", a, r.max_route_gap, r.fit.max_residual);
  }
  line += fmt("printed form at (1,0): %.4f", schneider_fiber_closed(-0.25, make_vec({1, 0})));
  o.detail = line + (o.detail.empty() ? "" : " [" + o.detail + "]");
  return o;
}

double sextic(double x, double y) {
  double x2 = x * x, y2 = y * y;
  return 2 * x2 * x2 * x2 + 7 * x2 * x2 * y2 + 7 * x2 * y2 * y2 + 2 * y2 * y2 * y2 - 88 * x2 * x2 - 193 * x2 * y2 -
         88 * y2 * y2 + 918 * x2 + 918 * y2 - 2592;
}

Outcome puffed() {
  Outcome o;
  FacetSystem square({{make_vec({1, 0}), 1}, {make_vec({-1, 0}), 1}, {make_vec({0, 1}), 1}, {make_vec({0, -1}), 1}}, 1);
  double r_err = 0;
  for (const auto& d : circle_directions(16, 0.1)) r_err = std::max(r_err, std::abs(puffed_radial(square, d) - std::sqrt(2.0)));
  std::vector<Facet> oct;
  for (double s : {1.0, -1.0}) {
    oct.push_back({make_vec({s, 0}), 2});
    oct.push_back({make_vec({0, s}), 2});
    oct.push_back({make_vec({s, s}), 3});
    oct.push_back({make_vec({s, -s}), 3});
  }
  FacetSystem octagon(oct, 1);
  FacetSystem tetra({{make_vec({1, 1, -1}), 1}, {make_vec({1, -1, 1}), 1}, {make_vec({-1, 1, 1}), 1}, {make_vec({-1, -1, -1}), 1}}, 1);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-3, 3);
  double oct_err = 0, tet_err = 0;
  for (int t = 0; t < 20; ++t) {
    double x = U(rng), y = U(rng);
    double s = -4 * sextic(x, y);
    oct_err = std::max(oct_err, std::abs(puffed_eval(octagon, make_vec({x, y})) - s) / std::abs(s));
    Vec p = make_vec({U(rng), U(rng), U(rng)});
    // sign: the first puffed tetrahedron is positive inside, -4 (x^2+y^2+z^2-2xyz-1)
    double q = -4 * (p.squaredNorm() - 2 * p[0] * p[1] * p[2] - 1);
    tet_err = std::max(tet_err, std::abs(puffed_eval(tetra, p) - q) / std::max(1.0, std::abs(q)));
  }
  o.need(r_err <= 1e-9, "square radial");
  o.need(oct_err <= 1e-9, "octagon");
  o.need(tet_err <= 1e-9, "tetrahedron");
  o.detail = fmt("radial err %.1e, octagon rel err %.1e, tetrahedron rel err %.1e", r_err, oct_err, tet_err);
  return o;
}

Outcome strictness() {
  Outcome o;
  using S = Strictness;
  struct Row {
    int i, m;
    bool simple;
    S expect;
  };
  const Row table[] = {{1, 2, false, S::Strict},   {1, 3, false, S::NotStrict}, {1, 4, true, S::NotStrict},
                       {2, 2, false, S::Strict},   {2, 3, false, S::Strict},    {2, 4, false, S::NotStrict},
                       {3, 4, true, S::Strict},    {3, 5, true, S::NotStrict},  {3, 4, false, S::Unknown}};
  int bad = 0;
  for (const auto& r : table) bad += puffed_strict_convexity(r.i, r.m, r.simple) != r.expect;
  o.need(bad == 0, std::to_string(bad) + " truth-table rows wrong");
  const auto rule = QuadratureRule::gauss(64);
  auto e = fiber_face_strictness(Body::elliptope(), kSplit, make_vec({1, 0}), rule);
  auto c = fiber_face_strictness(Body::cube(), kSplit, make_vec({1, 0}), rule);
  o.need(e.strict && e.face_width < 1e-4, "elliptope not strict");
  o.need(!c.strict && std::abs(c.face_width - 4.0) <= 0.05, "cube width");
  o.detail = fmt("9 rows; elliptope width %.1e, cube width %.4f", e.face_width, c.face_width);
  return o;
}

Outcome f_pi_algebra() {
  Outcome o;
  std::mt19937_64 rng(1234);
  double skew = 0, lin = 0;
  for (int n : {1, 2}) {
    auto sp = ProjectionSplit::coordinate(n, 2);
    for (int t = 0; t < 100; ++t) {
      std::vector<Vec> pts;
      for (int i = 0; i <= n; ++i) pts.push_back(gaussian(rng, n + 2));
      Vec base = f_pi(sp, pts);
      for (int i = 0; i < n; ++i) {
        auto sw = pts;
        std::swap(sw[i], sw[i + 1]);
        skew = std::max(skew, (f_pi(sp, sw) + base).norm());
      }
      const int slot = t % (n + 1);
      Vec q = gaussian(rng, n + 2);
      double a = gaussian(rng, 1)(0), b = gaussian(rng, 1)(0);
      auto mixed = pts, other = pts;
      mixed[slot] = a * pts[slot] + b * q;
      other[slot] = q;
      lin = std::max(lin, (f_pi(sp, mixed) - a * base - b * f_pi(sp, other)).norm());
    }
  }
  o.need(skew <= 1e-12, "skew-symmetry");
  o.need(lin <= 1e-12, "multilinearity");
  o.need(elliptic_E(0) == kPi / 2, "E(0)");
  o.need(elliptic_E(1) == 1.0, "E(1)");
  double oracle = integrate_adaptive([](double t) { return std::sqrt(1 - 0.25 * std::sin(t) * std::sin(t)); }, 0, kPi / 2, 1e-14);
  double e05 = std::abs(elliptic_E(0.5) - oracle);
  o.need(e05 <= 1e-10, "E(0.5)");
  o.detail = fmt("skew %.1e, linear %.1e, |E(0.5) - quad| %.1e", skew, lin, e05);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"elliptope fiber body", elliptope_fiber},
      {"fiber cube", fiber_cube},
      {"sandwich", sandwich},
      {"dice routes", dice_routes},
      {"mixed fiber bodies", mixed_fiber},
      {"shadow volume", shadow},
      {"homogeneity/symmetry/equivariance", invariants},
      {"schneider curved route", schneider},
      {"puffed polynomials", puffed},
      {"strict convexity", strictness},
      {"F_pi algebra", f_pi_algebra},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[k].second();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s (%.2fs)\n", out.ok ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
    failed += !out.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
