#include "fiberbody/routes.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fiberbody/curved.hpp"
#include "fiberbody/parallel.hpp"
#include "fiberbody/slicer.hpp"
#include "fiberbody/sphere.hpp"
#include "fiberbody/zonoids.hpp"

namespace fiber {

std::string method_name(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Slicer: return "slicer";
    case Method::Curved: return "curved";
    case Method::ZonoidExact: return "zonoid-exact";
    case Method::ZonoidMc: return "zonoid-mc";
    case Method::ClosedForm: return "closed-form";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : {Method::Auto, Method::Slicer, Method::Curved, Method::ZonoidExact, Method::ZonoidMc,
                   Method::ClosedForm})
    if (method_name(m) == name) return m;
  throw InputError("unknown method '" + name + "'");
}

namespace {

double unit_ball_volume(int d) { return std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d + 1.0); }

bool is_dice(const Body& body) {
  const auto* d = std::get_if<Body::Discotope>(&body.variant());
  if (!d || d->discs.size() != 3) return false;
  bool seen[3] = {false, false, false};
  for (const auto& disc : d->discs) {
    for (int k = 0; k < 3; ++k)
      if ((disc.axis - unit(3, k)).norm() == 0.0) seen[k] = true;
  }
  return seen[0] && seen[1] && seen[2];
}

bool coordinate_1_2(const ProjectionSplit& split) {
  return split.n() == 1 && split.m() == 2 && split.is_coordinate();
}

bool has_zonoid_model(const Body& body) {
  try {
    zonoid_model(body);
    return true;
  } catch (const MethodError&) {
    return false;
  }
}

bool is_curved(const Body& body) {
  if (body.dim() < 2) return false;
  return curvature_validate(body).weakly_curved;
}

std::string list_methods(const std::vector<Method>& ms) {
  std::string s;
  for (Method m : ms) s += (s.empty() ? "" : ", ") + method_name(m);
  return s.empty() ? "none" : s;
}

}  // namespace

std::optional<std::function<double(const Vec&)>> closed_form(const Body& body, const ProjectionSplit& split) {
  if (std::holds_alternative<Body::Elliptope>(body.variant()) && coordinate_1_2(split))
    return [](const Vec& u) { return u.norm() == 0.0 ? 0.0 : elliptope_fiber_closed(u); };
  if (is_dice(body) && coordinate_1_2(split)) return [](const Vec& u) { return dice_fiber_closed(u); };
  if (const auto* b = std::get_if<Body::Ball>(&body.variant())) {
    // every slice is a ball: int_{B^n} sqrt(r^2 - |x|^2)^{...} collapses to vol_{n+1}/2
    const double c = 0.5 * unit_ball_volume(split.n() + 1) * std::pow(b->radius, split.n() + 1);
    return [c](const Vec& u) { return c * u.norm(); };
  }
  return std::nullopt;
}

std::vector<Method> applicable_methods(const Body& body, const ProjectionSplit& split) {
  std::vector<Method> out;
  if (split.n() <= 2) out.push_back(Method::Slicer);
  if (split.n() <= 2 && is_curved(body)) out.push_back(Method::Curved);
  if (std::holds_alternative<Body::Zonotope>(body.variant())) out.push_back(Method::ZonoidExact);
  if (has_zonoid_model(body)) out.push_back(Method::ZonoidMc);
  if (closed_form(body, split)) out.push_back(Method::ClosedForm);
  return out;
}

Method resolve_method(const Body& body, const ProjectionSplit& split, Method requested) {
  if (body.dim() != split.ambient()) throw DimensionError("body and split dimensions differ");
  switch (requested) {
    case Method::Auto:
      if (std::holds_alternative<Body::Zonotope>(body.variant())) return Method::ZonoidExact;
      if (std::holds_alternative<Body::Discotope>(body.variant()) || std::holds_alternative<Body::Disc>(body.variant()))
        return Method::ZonoidMc;
      if (split.n() <= 2 && is_curved(body)) return Method::Curved;
      if (split.n() <= 2) return Method::Slicer;
      break;
    case Method::Slicer:
      if (split.n() <= 2) return requested;
      break;
    case Method::Curved:
      if (split.n() <= 2 && is_curved(body)) return requested;
      break;
    case Method::ZonoidExact:
      if (std::holds_alternative<Body::Zonotope>(body.variant())) return requested;
      break;
    case Method::ZonoidMc:
      if (has_zonoid_model(body)) return requested;
      break;
    case Method::ClosedForm:
      if (closed_form(body, split)) return requested;
      break;
  }
  throw MethodError("method " + method_name(requested) + " does not apply to this " + body.type_name() +
                    " body; applicable: " + list_methods(applicable_methods(body, split)));
}

SampledSupport fiber_route(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& directions,
                           const RouteOptions& opts) {
  const Method m = resolve_method(body, split, opts.method);
  for (const auto& u : directions)
    if (u.size() != split.m()) throw DimensionError("directions must live in W");

  SampledSupport out;
  switch (m) {
    case Method::Slicer:
      out = fiber_body_sampled(body, split, directions, QuadratureRule::gauss(opts.nodes));
      break;
    case Method::Curved: {
      out.directions = directions;
      out.values.assign(directions.size(), 0.0);
      if (!directions.empty()) {
        CurvedIntegrand base(body, split, directions.front().normalized());
        parallel_for(directions.size(), [&](std::size_t i) {
          const double r = directions[i].norm();
          if (r == 0.0) return;
          out.values[i] = r * curved_fiber_support(base.with_direction(directions[i] / r), opts.nodes).value;
        });
      }
      out.nodes = opts.nodes;
      break;
    }
    case Method::ZonoidExact: {
      const auto gens = fiber_zonotope(std::get<Body::Zonotope>(body.variant()).generators, split);
      out.directions = directions;
      for (const auto& u : directions) out.values.push_back(zonotope_support(gens, u));
      break;
    }
    case Method::ZonoidMc: {
      const auto est = fiber_zonoid_mc_batch(zonoid_model(body), split, directions, opts.samples, opts.seed,
                                             opts.workers);
      out.directions = directions;
      for (const auto& e : est) {
        out.values.push_back(e.value);
        out.std_errors.push_back(e.std_error);
      }
      out.samples = opts.samples;
      out.seed = opts.seed;
      break;
    }
    case Method::ClosedForm: {
      auto f = *closed_form(body, split);
      out.directions = directions;
      for (const auto& u : directions) out.values.push_back(f(u));
      break;
    }
    case Method::Auto:
      break;
  }
  out.dim = split.m();
  out.method = method_name(m);
  for (double v : out.values)
    if (!std::isfinite(v)) throw Error("fiber route " + out.method + " produced a non-finite value");
  return out;
}

std::string suite_name(Suite s) {
  switch (s) {
    case Suite::Homogeneity: return "homogeneity";
    case Suite::Symmetry: return "symmetry";
    case Suite::Equivariance: return "equivariance";
    case Suite::Subadditivity: return "subadditivity";
    case Suite::Sandwich: return "sandwich";
    case Suite::RouteAgreement: return "route-agreement";
  }
  return "?";
}

std::vector<Suite> all_suites() {
  return {Suite::Homogeneity, Suite::Symmetry, Suite::Equivariance, Suite::Subadditivity, Suite::Sandwich,
          Suite::RouteAgreement};
}

Suite parse_suite(const std::string& name) {
  for (Suite s : all_suites())
    if (suite_name(s) == name) return s;
  throw InputError("unknown verify suite '" + name + "'");
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

// Relative accuracy we expect of a route at default settings.
double route_tolerance(Method m) {
  switch (m) {
    case Method::ZonoidExact:
    case Method::ClosedForm:
      return 1e-9;
    case Method::Curved:
      return 1e-3;
    default:
      return 4e-3;
  }
}

double err_at(const SampledSupport& s, std::size_t i) { return s.stochastic() ? s.std_errors[i] : 0.0; }

// Route for a derived body: the caller's method when it still applies, else auto.
RouteOptions derived_options(const Body& body, const ProjectionSplit& split, const RouteOptions& opts, Method used) {
  RouteOptions o = opts;
  try {
    o.method = resolve_method(body, split, used);
  } catch (const MethodError&) {
    o.method = resolve_method(body, split, Method::Auto);
  }
  return o;
}

Check homogeneity(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
                  const RouteOptions& opts, Method used) {
  const double lambda = 2.0;
  const double factor = std::pow(lambda, split.n() + 1);
  Body scaled = std::holds_alternative<Body::Zonotope>(body.variant())
                    ? [&] {
                        auto gens = std::get<Body::Zonotope>(body.variant()).generators;
                        for (auto& g : gens) g *= lambda;
                        return Body::zonotope(gens);
                      }()
                    : Body::scaled(lambda, body);
  RouteOptions o = opts;
  o.method = used;
  auto a = fiber_route(body, split, dirs, o);
  auto b = fiber_route(scaled, split, dirs, derived_options(scaled, split, opts, used));
  Check c{"homogeneity: Sigma(2K) = 2^(n+1) Sigma(K)", 0.0, route_tolerance(used), true, ""};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    if (std::abs(a.values[i]) < 1e-12) continue;
    double ratio = b.values[i] / a.values[i];
    c.residual = std::max(c.residual, std::abs(ratio - factor) / factor);
  }
  c.passed = c.residual <= c.tolerance;
  c.note = "route " + method_name(used) + ", factor " + std::to_string(static_cast<int>(factor));
  return c;
}

Check symmetry(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
               const RouteOptions& opts, Method used) {
  Check c{"symmetry: h(u) = h(-u)", 0.0, used == Method::ZonoidMc ? 0.0 : 1e-6, true, ""};
  double asym = 0.0, scale = 0.0;
  for (const auto& u : sphere_sample(body.dim(), 64, SphereMode::Fibonacci)) {
    asym = std::max(asym, std::abs(support(body, u) - support(body, -u)));
    scale = std::max(scale, std::abs(support(body, u)));
  }
  if (asym > 1e-9 * std::max(1.0, scale)) {
    c.note = "body is not centrally symmetric; nothing to check";
    return c;
  }
  std::vector<Vec> both = dirs;
  for (const auto& u : dirs) both.push_back(-u);
  RouteOptions o = opts;
  o.method = used;
  auto s = fiber_route(body, split, both, o);
  for (std::size_t i = 0; i < dirs.size(); ++i)
    c.residual = std::max(c.residual, std::abs(s.values[i] - s.values[i + dirs.size()]) /
                                          std::max(1.0, std::abs(s.values[i])));
  c.passed = c.residual <= c.tolerance;
  c.note = "route " + method_name(used);
  return c;
}

Mat random_near_identity(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 0.3);
  while (true) {
    Mat a = Mat::Identity(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) a(i, j) += g(rng);
    if (std::abs(a.determinant()) > 0.3) return a;
  }
}

Check equivariance(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
                   const RouteOptions& opts, Method used) {
  std::mt19937_64 rng(opts.seed ^ 0x9e3779b97f4a7c15ull);
  Mat g1 = random_near_identity(split.n(), rng);
  Mat g2 = random_near_identity(split.m(), rng);
  Mat g = split.basis_v() * g1 * split.basis_v().transpose() + split.basis_w() * g2 * split.basis_w().transpose();
  Body moved = [&] {
    if (const auto* z = std::get_if<Body::Zonotope>(&body.variant())) {
      auto gens = z->generators;
      for (auto& v : gens) v = g * v;
      return Body::zonotope(gens);
    }
    return Body::linear_image(g, body);
  }();
  std::vector<Vec> pulled;
  for (const auto& u : dirs) pulled.push_back((g2.transpose() * u).normalized());
  RouteOptions o = opts;
  o.method = used;
  auto ref = fiber_route(body, split, pulled, o);
  RouteOptions om = derived_options(moved, split, opts, used);
  auto got = fiber_route(moved, split, dirs, om);
  const double det = std::abs(g1.determinant());
  Check c{"equivariance: Sigma(g1+g2)K = |det g1| g2 Sigma K", 0.0, 1e-2, true, ""};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double expect = det * (g2.transpose() * dirs[i]).norm() * ref.values[i];
    double slack = 3.0 * (err_at(got, i) + det * (g2.transpose() * dirs[i]).norm() * err_at(ref, i));
    double r = std::max(0.0, std::abs(got.values[i] - expect) - slack) / std::max(1.0, std::abs(expect));
    c.residual = std::max(c.residual, r);
  }
  c.passed = c.residual <= c.tolerance;
  c.note = "routes " + method_name(used) + " / " + method_name(om.method) + ", |det g1| = " + std::to_string(det);
  return c;
}

Check subadditivity(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
                    const RouteOptions& opts, Method used) {
  // Sigma(K+L) = Sigma K + Sigma L + mixed terms, all containing the origin
  double reach = 0.0;
  for (int k = 0; k < body.dim(); ++k) reach = std::max(reach, support(body, unit(body.dim(), k)));
  Body ball = Body::ball(0.5 * std::max(reach, 1e-3), body.dim());
  Body both = Body::sum({body, ball});
  RouteOptions o = opts;
  o.method = used;
  auto a = fiber_route(body, split, dirs, o);
  auto b = fiber_route(ball, split, dirs, derived_options(ball, split, opts, Method::ClosedForm));
  RouteOptions os = derived_options(both, split, opts, used);
  auto s = fiber_route(both, split, dirs, os);
  Check c{"subadditivity: Sigma K + Sigma L inside Sigma(K+L)", 0.0, 1e-2, true, ""};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    double gap = a.values[i] + b.values[i] - s.values[i] - 3.0 * (err_at(a, i) + err_at(s, i));
    c.residual = std::max(c.residual, gap / std::max(1.0, std::abs(s.values[i])));
  }
  c.passed = c.residual <= c.tolerance;
  c.note = "L = ball of radius " + std::to_string(0.5 * reach) + ", sum via " + method_name(os.method);
  return c;
}

Check sandwich(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
               const RouteOptions& opts, Method used) {
  // outer: the centred box around K; inner: the tetrahedron when K is the elliptope
  const int d = body.dim();
  std::vector<Vec> gens;
  for (int k = 0; k < d; ++k) {
    Vec e = unit(d, k);
    gens.push_back(2.0 * std::max(support(body, e), support(body, -e)) * e);
  }
  Body box = Body::zonotope(gens);
  RouteOptions o = opts;
  o.method = used;
  auto mid = fiber_route(body, split, dirs, o);
  RouteOptions ob = opts;
  ob.method = Method::ZonoidExact;
  auto outer = fiber_route(box, split, dirs, ob);
  Check c{"sandwich: inner <= Sigma K <= Sigma(box)", 0.0, 1e-3, true, ""};
  auto slack = [&](double lo, double hi, double err) {
    return std::max(0.0, lo - hi - 3.0 * err) / std::max(1.0, std::abs(hi));
  };
  for (std::size_t i = 0; i < dirs.size(); ++i)
    c.residual = std::max(c.residual, slack(mid.values[i], outer.values[i], err_at(mid, i)));
  c.note = "outer box";
  if (std::holds_alternative<Body::Elliptope>(body.variant())) {
    RouteOptions oi = opts;
    oi.method = Method::Slicer;
    auto inner = fiber_route(Body::tetrahedron(), split, dirs, oi);
    for (std::size_t i = 0; i < dirs.size(); ++i)
      c.residual = std::max(c.residual, slack(inner.values[i], mid.values[i], err_at(mid, i)));
    c.note += ", inner tetrahedron";
  }
  c.passed = c.residual <= c.tolerance;
  return c;
}

std::vector<Check> route_agreement(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& dirs,
                                   const RouteOptions& opts) {
  std::vector<std::pair<Method, SampledSupport>> runs;
  for (Method m : applicable_methods(body, split)) {
    RouteOptions o = opts;
    o.method = m;
    runs.emplace_back(m, fiber_route(body, split, dirs, o));
  }
  std::vector<Check> out;
  if (runs.size() < 2) {
    out.push_back({"route-agreement", 0.0, 0.0, true, "only one route applies"});
    return out;
  }
  for (std::size_t p = 0; p < runs.size(); ++p)
    for (std::size_t q = p + 1; q < runs.size(); ++q) {
      const auto& [ma, a] = runs[p];
      const auto& [mb, b] = runs[q];
      const bool exact_a = ma == Method::ZonoidExact || ma == Method::ClosedForm;
      const bool exact_b = mb == Method::ZonoidExact || mb == Method::ClosedForm;
      double tol = exact_a && exact_b ? 1e-9 : (a.stochastic() || b.stochastic()) && (exact_a || exact_b) ? 0.0 : 1e-2;
      Check c{"route-agreement: " + method_name(ma) + " vs " + method_name(mb), 0.0, tol, true, ""};
      for (std::size_t i = 0; i < dirs.size(); ++i) {
        double diff = std::abs(a.values[i] - b.values[i]) - 3.0 * (err_at(a, i) + err_at(b, i));
        c.residual = std::max(c.residual, std::max(0.0, diff) / std::max(1.0, std::abs(a.values[i])));
      }
      c.passed = c.residual <= c.tolerance;
      if (a.stochastic() || b.stochastic()) c.note = "within 3 standard errors plus tolerance";
      out.push_back(c);
    }
  return out;
}

}  // namespace

VerifyReport run_verify(const Body& body, const ProjectionSplit& split, Suite suite, const RouteOptions& opts,
                        int directions) {
  if (directions < 1) throw DomainError("need at least one direction");
  const auto dirs = sphere_sample(split.m(), directions, SphereMode::UniformGrid, opts.seed);
  VerifyReport rep;
  if (suite == Suite::RouteAgreement) {
    rep.checks = route_agreement(body, split, dirs, opts);
    return rep;
  }
  const Method used = resolve_method(body, split, opts.method);
  switch (suite) {
    case Suite::Homogeneity: rep.checks.push_back(homogeneity(body, split, dirs, opts, used)); break;
    case Suite::Symmetry: rep.checks.push_back(symmetry(body, split, dirs, opts, used)); break;
    case Suite::Equivariance: rep.checks.push_back(equivariance(body, split, dirs, opts, used)); break;
    case Suite::Subadditivity: rep.checks.push_back(subadditivity(body, split, dirs, opts, used)); break;
    case Suite::Sandwich: rep.checks.push_back(sandwich(body, split, dirs, opts, used)); break;
    case Suite::RouteAgreement: break;
  }
  return rep;
}

}  // namespace fiber
