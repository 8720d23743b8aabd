#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fiberbody/io.hpp"
#include "fiberbody/puffed.hpp"
#include "fiberbody/routes.hpp"
#include "fiberbody/sphere.hpp"
#include "fiberbody/zonoids.hpp"

using namespace fiber;

namespace {
const auto kSplit = ProjectionSplit::coordinate(1, 2);

RunManifest manifest() {
  RunManifest m;
  m.command = "fiber";
  m.split = "coordinate 1+2";
  m.rule = "slicer nodes=64";
  m.seed = 5;
  return m;
}

std::string csv(const SampledSupport& s) {
  std::ostringstream os;
  write_support_csv(os, s, manifest());
  return os.str();
}
}  // namespace

TEST_CASE("body files") {
  auto e = parse_body_spec(R"({"body":{"type":"elliptope"},"split":{"n":1,"m":2}})");
  CHECK(e.body.type_name() == "elliptope");
  CHECK(e.split.is_coordinate());
  CHECK(e.split.n() == 1);

  auto d = parse_body_spec(R"({"body":{"type":"discotope","axes":[[1,0,0],[0,1,0],[0,0,1]]}})");
  for (const auto& u : sphere_sample(3, 30, SphereMode::Fibonacci))
    CHECK(support(d.body, u) == doctest::Approx(support(Body::dice(), u)).epsilon(1e-14));
  CHECK(d.split.m() == 2);

  auto nested = parse_body_spec(R"({"body":{"type":"sum","terms":[
      {"type":"scaled","lambda":2,"inner":{"type":"tetrahedron"}},
      {"type":"linear_image","matrix":[[1,0,0],[0,2,0],[0,0,1]],"inner":{"type":"schneider","alpha":-0.3}}]}})");
  Vec u = make_vec({0.1, 0.5, -0.7});
  CHECK(support(nested.body, u) ==
        doctest::Approx(2 * support(Body::tetrahedron(), u) + support(Body::schneider(-0.3), make_vec({0.1, 1.0, -0.7}))));

  auto puffed = parse_body_spec(R"({"body":{"type":"puffed","vertices":[[1,1,1],[1,-1,-1],[-1,1,-1],[-1,-1,1]],"order":1}})");
  CHECK(support(puffed.body, make_vec({0, 0, 1})) == doctest::Approx(1.0).epsilon(1e-6));

  // different text, different hash
  CHECK(e.hash != d.hash);
  CHECK(e.hash == parse_body_spec(R"({"body":{"type":"elliptope"},"split":{"n":1,"m":2}})").hash);
}

TEST_CASE("body file errors") {
  CHECK_THROWS_AS(parse_body_spec(R"({"body":{"type":"discotope","axes":[[1,0,0],[2,0,0]]}})"), ValidationError);
  CHECK_THROWS_AS(parse_body_spec(R"({"body":{"type":"elliptope"},"split":{"n":1,"m":3}})"), ValidationError);
  CHECK_THROWS_AS(parse_body_spec(R"({"body":{"type":"sphere"}})"), ParseError);
  CHECK_THROWS_AS(parse_body_spec("{\"body\": {\"type\": \"elliptope\",}"), ParseError);
  try {
    parse_body_spec("{\n  \"body\": {\n    \"type\": \"schneider\",\n    \"alpha\": -0.2,\n    \"colour\": 3\n  }\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    std::string msg = e.what();
    CHECK(msg.find("colour") != std::string::npos);
    CHECK(e.line == 5);
    CHECK(e.field == "/body/colour");
  }
  CHECK_THROWS_AS(parse_body_spec(R"({"body":{"type":"schneider","alpha":"x"}})"), ParseError);
  CHECK_THROWS_AS(read_body_file("/nonexistent/body.json"), InputError);
}

TEST_CASE("CSV round trip is bit-exact") {
  SampledSupport s;
  s.dim = 2;
  for (const auto& u : circle_directions(7, 0.123)) {
    s.directions.push_back(u);
    s.values.push_back(elliptope_fiber_closed(u) * (1 + 1e-13));
  }
  s.std_errors = std::vector<double>(7, 1.0 / 3.0);
  std::string text = csv(s);
  CHECK(text.rfind("# command: fiber", 0) == 0);
  CHECK(text.find("u_1,u_2,h,stderr") != std::string::npos);
  std::istringstream is(text);
  auto back = read_support_csv(is);
  REQUIRE(back.directions.size() == 7);
  for (int k = 0; k < 7; ++k) {
    CHECK(back.values[k] == s.values[k]);
    CHECK((back.directions[k] - s.directions[k]).norm() == 0.0);
    CHECK(back.std_errors[k] == s.std_errors[k]);
  }
  CHECK(csv(back) == text);
  std::istringstream bad("u_1,u_2,h,stderr\n1,0\n");
  CHECK_THROWS_AS(read_support_csv(bad), ParseError);
}

TEST_CASE("fiber output is deterministic") {
  RouteOptions mc;
  mc.method = Method::ZonoidMc;
  mc.samples = 20000;
  mc.seed = 9;
  auto dirs = circle_directions(6);
  CHECK(csv(fiber_route(Body::dice(), kSplit, dirs, mc)) == csv(fiber_route(Body::dice(), kSplit, dirs, mc)));
  RouteOptions sl;
  sl.method = Method::Slicer;
  CHECK(csv(fiber_route(Body::elliptope(), kSplit, dirs, sl)) == csv(fiber_route(Body::elliptope(), kSplit, dirs, sl)));
}

TEST_CASE("manifest") {
  auto m = manifest();
  auto lines = m.lines();
  CHECK(lines.size() >= 6);
  bool version = false, wall = false;
  for (const auto& l : lines) {
    version |= l.find(kToolVersion) != std::string::npos;
    wall |= l.find("wall") != std::string::npos;
  }
  CHECK(version);
  CHECK(!wall);
  m.wall_seconds = 0.5;
  bool wall2 = false;
  for (const auto& l : m.lines()) wall2 |= l.find("wall") != std::string::npos;
  CHECK(wall2);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("routes") {
  CHECK(parse_method("zonoid-mc") == Method::ZonoidMc);
  CHECK(method_name(Method::ClosedForm) == "closed-form");
  CHECK_THROWS_AS(parse_method("fast"), InputError);
  CHECK(resolve_method(Body::cube(), kSplit, Method::Auto) == Method::ZonoidExact);
  CHECK(resolve_method(Body::dice(), kSplit, Method::Auto) == Method::ZonoidMc);
  CHECK(resolve_method(Body::schneider(-0.3), kSplit, Method::Auto) == Method::Curved);
  CHECK(resolve_method(Body::elliptope(), kSplit, Method::Auto) == Method::Slicer);
  try {
    resolve_method(Body::elliptope(), kSplit, Method::Curved);
    FAIL("expected MethodError");
  } catch (const MethodError& e) {
    CHECK(std::string(e.what()).find("slicer") != std::string::npos);
  }

  RouteOptions exact;
  exact.method = Method::ZonoidExact;
  auto sq = fiber_route(Body::cube(), kSplit, {make_vec({1, 0}), make_vec({1, 1}), make_vec({-0.6, 0.8})}, exact);
  CHECK(sq.values[0] == doctest::Approx(2.0));
  CHECK(sq.values[1] == doctest::Approx(4.0));
  CHECK(sq.values[2] == doctest::Approx(2.8));

  RouteOptions mc;
  mc.method = Method::ZonoidMc;
  mc.samples = 400000;
  auto dice = fiber_route(Body::dice(), kSplit, {make_vec({1, 0})}, mc);
  CHECK(std::abs(dice.values[0] - dice_fiber_closed(make_vec({1, 0}))) <= 3 * dice.std_errors[0]);

  RouteOptions curved;
  curved.method = Method::Curved;
  auto ball = fiber_route(Body::ball(1, 3), kSplit, {make_vec({0, 3})}, curved);
  CHECK(ball.values[0] == doctest::Approx(1.5 * kPi).epsilon(1e-4));
}

TEST_CASE("verify suites") {
  RouteOptions opts;
  auto hom = run_verify(Body::elliptope(), kSplit, Suite::Homogeneity, opts, 8);
  CHECK(hom.passed());
  CHECK(!hom.checks.empty());
  for (Suite s : {Suite::Symmetry, Suite::Sandwich})
    CHECK(run_verify(Body::elliptope(), kSplit, s, opts, 8).passed());
  opts.samples = 200000;
  auto agree = run_verify(Body::dice(), kSplit, Suite::RouteAgreement, opts, 8);
  for (const auto& c : agree.checks) INFO(c.name << " " << c.residual << " / " << c.tolerance);
  CHECK(agree.passed());
  CHECK(run_verify(Body::schneider(-0.25), kSplit, Suite::Equivariance, RouteOptions{}, 8).passed());
  CHECK(run_verify(Body::cube(), kSplit, Suite::Subadditivity, RouteOptions{}, 8).passed());
  CHECK(parse_suite("route-agreement") == Suite::RouteAgreement);
  CHECK(all_suites().size() == 6);
}

TEST_CASE("comparison and polygons") {
  RouteOptions exact;
  exact.method = Method::ZonoidExact;
  auto dirs = circle_directions(256);
  auto cube = fiber_route(Body::cube(), kSplit, dirs, exact);
  auto poly = polygon_from_support(cube);
  for (const auto& v : poly) CHECK(v.lpNorm<Eigen::Infinity>() == doctest::Approx(2.0).epsilon(1e-9));

  RouteOptions closed;
  closed.method = Method::ClosedForm;
  RouteOptions slicer;
  slicer.method = Method::Slicer;
  auto ec = fiber_route(Body::elliptope(), kSplit, dirs, closed);
  auto es = fiber_route(Body::elliptope(), kSplit, dirs, slicer);
  CHECK(hausdorff_distance(ec, es) <= 1e-3);
  // the fiber elliptope touches the parabola arcs at (0,+-2), (+-2,0)
  auto ep = polygon_from_support(ec);
  for (const Vec& t : {make_vec({0, 2}), make_vec({2, 0}), make_vec({0, -2}), make_vec({-2, 0})}) {
    double best = 1e9;
    for (std::size_t k = 0; k < ep.size(); ++k) {
      const Vec& a = ep[k];
      const Vec& b = ep[(k + 1) % ep.size()];
      double s = std::clamp((t - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
      best = std::min(best, (a + s * (b - a) - t).norm());
    }
    CHECK(best < 1e-2);
  }
}

TEST_CASE("SVG output") {
  std::ostringstream os;
  write_svg(os, {{"square", {make_vec({-2, -2}), make_vec({2, -2}), make_vec({2, 2}), make_vec({-2, 2})}},
                 {"segment", {make_vec({0, -1}), make_vec({0, 1})}}},
            manifest());
  std::string s = os.str();
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("viewBox=\"-2.2") != std::string::npos);
  CHECK(s.find("seed: 5") != std::string::npos);
  std::size_t paths = 0;
  for (auto p = s.find("<path"); p != std::string::npos; p = s.find("<path", p + 1)) ++paths;
  CHECK(paths == 2);
}

TEST_CASE("point clouds") {
  auto ball = boundary_point_cloud(Body::ball(1, 3), 100);
  REQUIRE(ball.points.size() == 100);
  for (const auto& p : ball.points) CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ball.nonsmooth == 0);

  auto dice = boundary_point_cloud(Body::dice(), 10000);
  for (const auto& p : dice.points) CHECK(p.lpNorm<Eigen::Infinity>() <= 2 + 1e-9);

  auto ell = boundary_point_cloud(Body::elliptope(), 10000);
  int bad = 0;
  for (const auto& p : ell.points) {
    double q = p.squaredNorm() - 2 * p[0] * p[1] * p[2];
    bool on_cube = p.lpNorm<Eigen::Infinity>() >= 1 - 1e-6;
    if (!(q <= 1 + 1e-6 || on_cube)) ++bad;
  }
  CHECK(bad == 0);

  std::ostringstream obj, ply;
  write_point_cloud(obj, ball, CloudFormat::Obj, manifest());
  write_point_cloud(ply, ball, CloudFormat::Ply, manifest());
  CHECK(obj.str().find("\nv ") != std::string::npos);
  CHECK(ply.str().rfind("ply\n", 0) == 0);
  CHECK(ply.str().find("element vertex 100") != std::string::npos);
  CHECK_THROWS_AS(boundary_point_cloud(Body::ball(1, 2), 10), DimensionError);
}
