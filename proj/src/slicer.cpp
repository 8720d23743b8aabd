#include "fiberbody/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "fiberbody/parallel.hpp"
#include "fiberbody/quadrature.hpp"
#include "fiberbody/sphere.hpp"

namespace fiber {

void QuadratureRule::validate() const {
  if (nodes_per_axis < 2) throw ValidationError("quadrature needs at least 2 nodes per axis");
  if (!(shrink > 0.0 && shrink <= 1.0)) throw ValidationError("quadrature shrink must lie in (0, 1]");
}

QuadratureRule QuadratureRule::gauss(int nodes, double shrink) {
  QuadratureRule r;
  r.kind = Kind::GaussLegendre;
  r.nodes_per_axis = nodes;
  r.shrink = shrink;
  return r;
}

QuadratureRule QuadratureRule::monte_carlo(int samples_per_axis, std::uint64_t seed) {
  QuadratureRule r;
  r.kind = Kind::MonteCarlo;
  r.nodes_per_axis = samples_per_axis;
  r.seed = seed;
  return r;
}

namespace {

struct Minimum {
  double arg = 0.0;
  double value = 0.0;
  bool converged = true;
  int evaluations = 0;
};

// Minimizes a convex function on R: expand a bracket from 0 by doubling until
// the objective rises on both sides, then golden section.
template <class F>
Minimum minimize_convex(F&& f, double scale, double rel_tol, int max_iterations) {
  Minimum out;
  auto eval = [&](double v) {
    ++out.evaluations;
    return f(v);
  };
  const double s = scale > 0.0 ? scale : 1.0;
  double a = -s, b = 0.0, c = s;
  const double f_left = eval(a), f_mid = eval(b), f_right = eval(c);
  double fb = f_mid;
  constexpr int kMaxExpansions = 100;
  if (f_right < f_mid || f_left < f_mid) {
    const double dir = f_right <= f_left ? 1.0 : -1.0;
    double prev = 0.0;
    double cur = dir * s, f_cur = dir > 0 ? f_right : f_left;
    double step = s;
    for (int expansions = 0;; ++expansions) {
      if (expansions > kMaxExpansions || !std::isfinite(f_cur)) {
        out.arg = cur;
        out.value = f_cur;
        out.converged = false;
        return out;
      }
      step *= 2.0;
      const double next = cur + dir * step;
      const double f_next = eval(next);
      if (!(f_next < f_cur)) {
        a = std::min(prev, next);
        c = std::max(prev, next);
        b = cur;
        fb = f_cur;
        break;
      }
      prev = cur;
      cur = next;
      f_cur = f_next;
    }
  }
  // golden section on [a, c]
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double best_arg = b, best = fb;
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  double f1 = eval(x1), f2 = eval(x2);
  int iter = 0;
  while (c - a > rel_tol * std::max(1.0, std::abs(a) + std::abs(c))) {
    if (++iter > max_iterations) {
      out.converged = false;
      break;
    }
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = eval(x2);
    }
    if (f1 < best) {
      best = f1;
      best_arg = x1;
    }
    if (f2 < best) {
      best = f2;
      best_arg = x2;
    }
  }
  out.arg = best_arg;
  out.value = best;
  return out;
}

void require_split(const Body& body, const ProjectionSplit& split) {
  if (body.dim() != split.ambient())
    throw DimensionError("split ambient dimension " + std::to_string(split.ambient()) +
                         " does not match body dimension " + std::to_string(body.dim()));
}

// Interval of pi(K) along V-axis e_i: [-h(-e_i), h(e_i)].
std::pair<double, double> projected_interval(const Body& body, const ProjectionSplit& split, int i) {
  const Vec e = unit(split.n(), i);
  return {-project_support(body, split, Vec(-e)), project_support(body, split, e)};
}

// Interval of the x2-section of pi(K) (n = 2) over x1, via the same infimal
// projection applied to pi(K).
std::pair<double, double> section_interval(const Body& body, const ProjectionSplit& split, double x1) {
  auto upper = [&](double sign) {
    auto f = [&](double v) {
      return project_support(body, split, make_vec({v, sign})) - v * x1;
    };
    return minimize_convex(f, 1.0, 1e-12, 400).value;
  };
  return {-upper(-1.0), upper(1.0)};
}

void require_interior(double x, std::pair<double, double> range) {
  const double tol = 1e-14 * std::max(1.0, range.second - range.first);
  if (!(x > range.first + tol && x < range.second - tol))
    throw EmptySliceError("slice point lies outside or on the boundary of pi(K)");
}

}  // namespace

SliceResult slice_support(const Body& body, const ProjectionSplit& split, const SliceQuery& q) {
  require_split(body, split);
  if (q.x.size() != split.n()) throw DimensionError("slice_support: x must be a V-vector");
  if (q.u.size() != split.m()) throw DimensionError("slice_support: u must be a W-vector");
  if (!(q.tolerance > 0.0)) throw ValidationError("slice_support: tolerance must be positive");
  const Vec uw = split.basis_w() * q.u;
  const double scale = std::max(q.u.norm(), 1e-3);

  SliceResult out;
  if (split.n() == 1) {
    require_interior(q.x[0], projected_interval(body, split, 0));
    const Vec bv = split.basis_v().col(0);
    auto g = [&](double v) { return support(body, Vec(v * bv + uw)) - v * q.x[0]; };
    const auto m = minimize_convex(g, scale, q.tolerance, q.max_iterations);
    out.value = m.value;
    out.converged = m.converged;
    out.evaluations = m.evaluations;
    return out;
  }
  if (split.n() == 2) {
    const auto range1 = projected_interval(body, split, 0);
    require_interior(q.x[0], range1);
    require_interior(q.x[1], section_interval(body, split, q.x[0]));
    const Vec b1 = split.basis_v().col(0), b2 = split.basis_v().col(1);
    bool converged = true;
    int evaluations = 0;
    auto inner = [&](double v1) {
      auto g = [&](double v2) {
        return support(body, Vec(v1 * b1 + v2 * b2 + uw)) - v1 * q.x[0] - v2 * q.x[1];
      };
      const auto m = minimize_convex(g, scale, q.tolerance, q.max_iterations);
      converged &= m.converged;
      evaluations += m.evaluations;
      return m.value;
    };
    const auto m = minimize_convex(inner, scale, q.tolerance, q.max_iterations);
    out.value = m.value;
    out.converged = converged && m.converged;
    out.evaluations = evaluations;
    return out;
  }
  throw UnsupportedDimensionError("slice_support supports n = 1 and n = 2 only");
}

namespace {

// Gauss rule over shrink * [lo, hi] plus the two margins filled with the
// integrand at the shrunk endpoints.
template <class F>
double shrunk_gauss(const GaussRule& rule, double lo, double hi, double shrink, F&& f) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double inner = shrink * half;
  double sum = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k)
    sum += rule.weights[k] * f(center + inner * rule.nodes[k]);
  sum *= inner;
  const double margin = half - inner;
  if (margin > 0.0) sum += margin * (f(center - inner) + f(center + inner));
  return sum;
}

}  // namespace

FiberValue fiber_support_detail(const Body& body, const ProjectionSplit& split, const Vec& u,
                                const QuadratureRule& rule) {
  require_split(body, split);
  rule.validate();
  if (u.size() != split.m()) throw DimensionError("fiber support: u must be a W-vector");
  if (split.n() > 2) throw UnsupportedDimensionError("numeric fiber engine supports n = 1 and n = 2 only");

  FiberValue out;
  auto slice = [&](const Vec& x) {
    try {
      const auto r = slice_support(body, split, SliceQuery{x, u});
      out.converged &= r.converged;
      return r.value;
    } catch (const EmptySliceError&) {
      ++out.skipped_nodes;
      return 0.0;
    }
  };
  if (u.norm() == 0.0) return out;

  const auto range1 = projected_interval(body, split, 0);
  if (!(range1.second > range1.first)) return out;  // pi(K) lower dimensional

  if (rule.kind == QuadratureRule::Kind::MonteCarlo) {
    std::mt19937_64 rng(rule.seed);
    const long long count = split.n() == 1
                                ? rule.nodes_per_axis
                                : static_cast<long long>(rule.nodes_per_axis) * rule.nodes_per_axis;
    std::uniform_real_distribution<double> unif1(range1.first, range1.second);
    double box = range1.second - range1.first;
    std::pair<double, double> range2{0.0, 0.0};
    if (split.n() == 2) {
      range2 = projected_interval(body, split, 1);
      box *= range2.second - range2.first;
    }
    std::uniform_real_distribution<double> unif2(range2.first, range2.second);
    double mean = 0.0, m2 = 0.0;
    for (long long k = 0; k < count; ++k) {
      double value = 0.0;
      if (split.n() == 1) {
        value = slice(make_vec({unif1(rng)}));
      } else {
        const double x1 = unif1(rng), x2 = unif2(rng);
        const auto sec = section_interval(body, split, x1);
        if (x2 > sec.first && x2 < sec.second) value = slice(make_vec({x1, x2}));
      }
      const double delta = value - mean;
      mean += delta / static_cast<double>(k + 1);
      m2 += delta * (value - mean);
    }
    out.value = box * mean;
    out.std_error = count > 1 ? box * std::sqrt(m2 / static_cast<double>(count - 1) / count) : 0.0;
    return out;
  }

  const GaussRule gl = gauss_legendre(rule.nodes_per_axis);
  if (split.n() == 1) {
    out.value = shrunk_gauss(gl, range1.first, range1.second, rule.shrink,
                             [&](double x) { return slice(make_vec({x})); });
    return out;
  }
  out.value = shrunk_gauss(gl, range1.first, range1.second, rule.shrink, [&](double x1) {
    const auto sec = section_interval(body, split, x1);
    if (!(sec.second > sec.first)) return 0.0;
    return shrunk_gauss(gl, sec.first, sec.second, rule.shrink,
                        [&](double x2) { return slice(make_vec({x1, x2})); });
  });
  return out;
}

double fiber_support_numeric(const Body& body, const ProjectionSplit& split, const Vec& u,
                             const QuadratureRule& rule) {
  return fiber_support_detail(body, split, u, rule).value;
}

SampledSupport fiber_body_sampled(const Body& body, const ProjectionSplit& split,
                                  const std::vector<Vec>& directions, const QuadratureRule& rule) {
  SampledSupport out;
  out.dim = split.m();
  out.directions = directions;
  out.values.assign(directions.size(), 0.0);
  const bool stochastic = rule.kind == QuadratureRule::Kind::MonteCarlo;
  if (stochastic) out.std_errors.assign(directions.size(), 0.0);
  out.method = "slicer";
  out.nodes = rule.nodes_per_axis;
  out.seed = rule.seed;
  parallel_for(directions.size(), [&](std::size_t i) {
    const auto r = fiber_support_detail(body, split, directions[i], rule);
    out.values[i] = r.value;
    if (stochastic) out.std_errors[i] = r.std_error;
  });
  return out;
}

double face_fiber_support(const Body& body, const ProjectionSplit& split, const Vec& u,
                          const Vec& v, const QuadratureRule& rule, double rel_step) {
  require_split(body, split);
  rule.validate();
  if (u.size() != split.m() || v.size() != split.m())
    throw DimensionError("face_fiber_support: u and v must be W-vectors");
  if (u.norm() == 0.0) throw DomainError("face_fiber_support: u must be nonzero");
  if (split.n() != 1) throw UnsupportedDimensionError("face_fiber_support supports n = 1 only");

  const auto range = projected_interval(body, split, 0);
  const GaussRule gl = gauss_legendre(rule.nodes_per_axis);
  return shrunk_gauss(gl, range.first, range.second, rule.shrink, [&](double x) {
    const Vec xv = make_vec({x});
    const SupportFn h = [&](const Vec& w) { return slice_support(body, split, SliceQuery{xv, w}).value; };
    return one_sided_derivative(h, u, v, rel_step);
  });
}

StrictnessVerdict strict_convexity_direction(const SupportFn& h, const Vec& u, int w_samples,
                                             double tol, double rel_step) {
  if (u.norm() == 0.0) throw DomainError("strict_convexity_direction: u must be nonzero");
  StrictnessVerdict out;
  for (const auto& w : sphere_sample(static_cast<int>(u.size()), w_samples)) {
    const double width = one_sided_derivative(h, u, w, rel_step) +
                         one_sided_derivative(h, u, Vec(-w), rel_step);
    out.face_width = std::max(out.face_width, width);
  }
  out.strict = out.face_width < tol;
  return out;
}

StrictnessVerdict fiber_face_strictness(const Body& body, const ProjectionSplit& split, const Vec& u,
                                        const QuadratureRule& rule, int w_samples, double tol) {
  if (u.norm() == 0.0) throw DomainError("fiber_face_strictness: u must be nonzero");
  const auto ws = sphere_sample(split.m(), w_samples);
  std::vector<double> widths(ws.size(), 0.0);
  parallel_for(ws.size(), [&](std::size_t i) {
    widths[i] = face_fiber_support(body, split, u, ws[i], rule) + face_fiber_support(body, split, u, Vec(-ws[i]), rule);
  });
  StrictnessVerdict out;
  out.face_width = *std::max_element(widths.begin(), widths.end());
  out.strict = out.face_width < tol;
  return out;
}

double fiber_strict_convexity(const Body& body, const ProjectionSplit& split, const Vec& u,
                              int x_samples, double tol, double shrink) {
  require_split(body, split);
  if (split.n() != 1) throw UnsupportedDimensionError("fiber_strict_convexity supports n = 1 only");
  if (x_samples < 1) throw DomainError("fiber_strict_convexity: need at least one sample");
  const auto range = projected_interval(body, split, 0);
  // midpoints of equal cells, so the result is a fraction of the x-range
  const double lo = range.first, width = range.second - range.first;
  std::vector<int> strict(x_samples, 0);
  parallel_for(x_samples, [&](std::size_t k) {
    const double t = (static_cast<double>(k) + 0.5) / x_samples;
    const Vec xv = make_vec({lo + width * (0.5 + shrink * (t - 0.5))});
    const SupportFn h = [&](const Vec& w) { return slice_support(body, split, SliceQuery{xv, w}).value; };
    strict[k] = strict_convexity_direction(h, u, 16, tol).strict ? 1 : 0;
  });
  int count = 0;
  for (int s : strict) count += s;
  return static_cast<double>(count) / x_samples;
}

}  // namespace fiber
