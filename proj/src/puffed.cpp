#include "fiberbody/puffed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fiberbody/sphere.hpp"

namespace fiber {

FacetSystem::FacetSystem(std::vector<Facet> facets, int order)
    : facets_(std::move(facets)), order_(order) {
  if (facets_.empty()) throw ValidationError("facet system has no facets");
  const auto dim = facets_.front().normal.size();
  for (const auto& f : facets_) {
    if (f.normal.size() != dim) throw DimensionError("facet normals differ in dimension");
    if (!(f.offset > 0.0))
      throw ValidationError("facet offsets must be positive (origin strictly inside)");
  }
  if (order_ < 0 || order_ >= static_cast<int>(facets_.size()))
    throw ValidationError("derivative order must satisfy 0 <= order < number of facets");
}

double puffed_eval(const FacetSystem& fs, const Vec& point) {
  const int order = fs.order();
  if (point.size() != fs.dim()) throw DimensionError("puffed_eval: point dimension mismatch");
  // coef[k] = e_k of the factors (c_j + t a_j), i.e. the sum over k-subsets S
  // of prod_{S} a_j * prod_{not S} c_j.
  std::vector<double> coef(order + 1, 0.0);
  coef[0] = 1.0;
  for (const auto& f : fs.facets()) {
    const double c = f.normal.dot(point) - f.offset;
    for (int k = order; k >= 1; --k) coef[k] = coef[k] * c + coef[k - 1] * f.offset;
    coef[0] *= c;
  }
  double factorial = 1.0;
  for (int k = 2; k <= order; ++k) factorial *= k;
  return (order % 2 == 0 ? 1.0 : -1.0) * factorial * coef[order];
}

double polytope_radial(const FacetSystem& fs, const Vec& direction) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : fs.facets()) {
    const double s = f.normal.dot(direction);
    if (s > 0.0) best = std::min(best, f.offset / s);
  }
  return best;
}

namespace {

// puffed_eval(fs, t d) as a polynomial in t, ascending powers. The factors
// l_j(t d) - a_j w are homogeneous in (t, w), so the coefficient of t^k
// carries w^(F-k) and the i-th w-derivative at w = 1 is a falling factorial.
std::vector<double> ray_polynomial(const FacetSystem& fs, const Vec& d) {
  const int count = static_cast<int>(fs.facets().size());
  std::vector<double> p(count + 1, 0.0);
  p[0] = 1.0;
  int deg = 0;
  for (const auto& f : fs.facets()) {
    const double s = f.normal.dot(d);
    for (int k = deg + 1; k >= 1; --k) p[k] = p[k] * -f.offset + p[k - 1] * s;
    p[0] *= -f.offset;
    ++deg;
  }
  const int order = fs.order();
  for (int k = 0; k <= count; ++k) {
    double falling = 1.0;
    for (int r = 0; r < order; ++r) falling *= count - k - r;
    p[k] *= falling;  // zero once count - k < order
  }
  return p;
}

double horner(const std::vector<double>& p, double t) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
  return v;
}

double magnitude(const std::vector<double>& p, double t) {
  double v = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * std::abs(t) + std::abs(*it);
  return v;
}

// Real roots in [lo, hi], sorted. Between consecutive critical points the
// polynomial is monotone, so each sign change brackets exactly one root;
// a critical point where p vanishes to rounding is a touching root.
std::vector<double> real_roots(std::vector<double> p, double lo, double hi) {
  double top = 0.0;
  for (double c : p) top = std::max(top, std::abs(c));
  while (p.size() > 1 && std::abs(p.back()) <= 1e-14 * top) p.pop_back();
  std::vector<double> roots;
  if (p.size() <= 1) return roots;
  if (p.size() == 2) {
    const double r = -p[0] / p[1];
    if (r >= lo && r <= hi) roots.push_back(r);
    return roots;
  }
  std::vector<double> dp(p.size() - 1);
  for (std::size_t k = 1; k < p.size(); ++k) dp[k - 1] = static_cast<double>(k) * p[k];
  std::vector<double> knots{lo};
  for (double c : real_roots(dp, lo, hi))
    if (c > knots.back()) knots.push_back(c);
  if (hi > knots.back()) knots.push_back(hi);

  auto push = [&](double r) {
    if (roots.empty() || r > roots.back() * (1 + 1e-13) + 1e-300) roots.push_back(r);
  };
  for (std::size_t k = 0; k < knots.size(); ++k) {
    const double a = knots[k];
    const double fa = horner(p, a);
    if (std::abs(fa) <= 1e-11 * magnitude(p, a)) push(a);
    if (k + 1 == knots.size()) break;
    const double b = knots[k + 1];
    const double fb = horner(p, b);
    if ((fa < 0.0) == (fb < 0.0) || std::abs(fa) <= 1e-11 * magnitude(p, a) ||
        std::abs(fb) <= 1e-11 * magnitude(p, b))
      continue;
    double x = a, y = b;
    const bool a_negative = fa < 0.0;
    for (int it = 0; it < 200 && y - x > 1e-15 * std::max(1.0, std::abs(y)); ++it) {
      const double mid = 0.5 * (x + y);
      if ((horner(p, mid) < 0.0) == a_negative)
        x = mid;
      else
        y = mid;
    }
    push(0.5 * (x + y));
  }
  return roots;
}

}  // namespace

double puffed_radial(const FacetSystem& fs, const Vec& direction) {
  if (direction.size() != fs.dim()) throw DimensionError("puffed_radial: dimension mismatch");
  const Vec d = direction / direction.norm();
  const auto p = ray_polynomial(fs, d);
  // Cauchy bound on the roots
  std::size_t top = p.size() - 1;
  double big = 0.0;
  for (double c : p) big = std::max(big, std::abs(c));
  while (top > 0 && std::abs(p[top]) <= 1e-14 * big) --top;
  if (top == 0) throw UnboundedRayError("puffed_radial: polynomial is constant along the ray");
  double bound = 0.0;
  for (std::size_t k = 0; k < top; ++k) bound = std::max(bound, std::abs(p[k] / p[top]));
  for (double r : real_roots(p, 0.0, 1.0 + bound))
    if (r > 0.0) return r;
  throw UnboundedRayError("puffed_radial: no zero along the ray");
}

namespace {

std::vector<Vec> tangent_basis(const Vec& d) {
  const auto dim = d.size();
  std::vector<Vec> basis;
  for (Eigen::Index i = 0; i < dim && static_cast<Eigen::Index>(basis.size()) < dim - 1; ++i) {
    Vec v = unit(dim, i);
    v -= v.dot(d) * d;
    for (const auto& b : basis) v -= v.dot(b) * b;
    if (v.norm() > 1e-6) basis.push_back(v / v.norm());
  }
  return basis;
}

}  // namespace

double puffed_support(const FacetSystem& fs, const Vec& u, int boundary_samples) {
  if (u.size() != fs.dim()) throw DimensionError("puffed_support: dimension mismatch");
  if (u.norm() == 0.0) throw DomainError("puffed_support: u must be nonzero");
  const int dim = fs.dim();
  auto value = [&](const Vec& d) { return u.dot(d) * puffed_radial(fs, d); };

  std::vector<Vec> sample = dim == 2 ? circle_directions(boundary_samples)
                                     : sphere_sample(dim, boundary_samples, SphereMode::Fibonacci);
  Vec best = sample.front();
  double best_value = -std::numeric_limits<double>::infinity();
  for (const auto& d : sample) {
    if (u.dot(d) <= 0.0) continue;  // max is attained where <u, d> > 0
    const double v = value(d);
    if (v > best_value) {
      best_value = v;
      best = d;
    }
  }
  // compass search on the sphere
  double step = dim == 2 ? 2.0 * kPi / boundary_samples
                         : std::sqrt(4.0 * kPi / boundary_samples);
  while (step > 1e-10) {
    bool improved = false;
    for (const auto& t : tangent_basis(best)) {
      for (double sign : {1.0, -1.0}) {
        Vec candidate = best + sign * step * t;
        candidate /= candidate.norm();
        const double v = value(candidate);
        if (v > best_value) {
          best_value = v;
          best = candidate;
          improved = true;
        }
      }
    }
    if (!improved) step *= 0.5;
  }
  return best_value;
}

bool is_simple(const std::vector<Vec>& vertices, const FacetSystem& facets) {
  const int dim = facets.dim();
  bool simple = true;
  for (const auto& v : vertices) {
    if (v.size() != dim) throw DimensionError("is_simple: vertex dimension mismatch");
    int incident = 0;
    for (const auto& f : facets.facets()) {
      const double gap = f.normal.dot(v) - f.offset;
      const double tol = 1e-9 * std::max(1.0, std::abs(f.offset));
      if (gap > tol) throw InvalidPolytopeError("is_simple: vertex violates a facet inequality");
      if (std::abs(gap) <= tol) ++incident;
    }
    if (incident < dim) throw InvalidPolytopeError("is_simple: vertex lies on fewer than dim facets");
    if (incident > dim) simple = false;
  }
  return simple;
}

FacetSystem facets_from_vertices(const std::vector<Vec>& vertices, int order) {
  if (vertices.empty()) throw InvalidPolytopeError("no vertices");
  const auto dim = vertices.front().size();
  if (dim != 2 && dim != 3) throw UnsupportedDimensionError("hull conversion supports dimension 2 and 3 only");
  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, v.norm());
  const double tol = 1e-10 * std::max(1.0, scale);

  std::vector<Facet> facets;
  auto consider = [&](Vec normal, const Vec& on_plane) {
    const double n = normal.norm();
    if (n <= tol * tol) return;
    normal /= n;
    double offset = normal.dot(on_plane);
    if (std::abs(offset) <= tol) {
      // plane through the origin: either not a facet or origin not interior
      bool all_below = true, all_above = true;
      for (const auto& v : vertices) {
        all_below &= normal.dot(v) <= tol;
        all_above &= normal.dot(v) >= -tol;
      }
      if (all_below || all_above)
        throw InvalidPolytopeError("origin is not in the interior of the polytope");
      return;
    }
    if (offset < 0) {
      normal = -normal;
      offset = -offset;
    }
    for (const auto& v : vertices)
      if (normal.dot(v) > offset + tol) return;
    // polar form <l, x> <= 1; the puffed polynomial depends on this scaling
    normal /= offset;
    for (const auto& f : facets)
      if ((f.normal - normal).norm() <= 1e-9 * std::max(1.0, normal.norm())) return;
    facets.push_back({normal, 1.0});
  };
  const auto count = vertices.size();
  if (dim == 2) {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j) {
        const Vec e = vertices[j] - vertices[i];
        consider(make_vec({-e[1], e[0]}), vertices[i]);
      }
  } else {
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i + 1; j < count; ++j)
        for (std::size_t k = j + 1; k < count; ++k) {
          const Eigen::Vector3d a = vertices[j] - vertices[i];
          const Eigen::Vector3d b = vertices[k] - vertices[i];
          consider(Vec(a.cross(b)), vertices[i]);
        }
  }
  if (static_cast<Eigen::Index>(facets.size()) < dim + 1)
    throw InvalidPolytopeError("vertices do not span a full-dimensional polytope");
  return {std::move(facets), order};
}

Strictness puffed_strict_convexity(int order, int m, bool simple) {
  if (order < 1 || m < 2) throw DomainError("puffed_strict_convexity: need order >= 1 and m >= 2");
  if (order == 1) return m == 2 ? Strictness::Strict : Strictness::NotStrict;
  if (order == 2) return m <= 3 ? Strictness::Strict : Strictness::NotStrict;
  if (!simple) return Strictness::Unknown;
  return m <= order + 1 ? Strictness::Strict : Strictness::NotStrict;
}

double elliptope_slice_support(double x, const Vec& u) {
  if (u.size() != 2) throw DimensionError("elliptope_slice_support: u must be 2-dimensional");
  if (!(std::abs(x) < 1.0)) throw DomainError("elliptope_slice_support: need |x| < 1");
  return std::sqrt(std::max(0.0, u[0] * u[0] + u[1] * u[1] + 2.0 * x * u[0] * u[1]));
}

double elliptope_fiber_closed(const Vec& u) {
  if (u.size() != 2) throw DimensionError("elliptope_fiber_closed: u must be 2-dimensional");
  const double a = std::max(std::abs(u[0]), std::abs(u[1]));
  const double b = std::min(std::abs(u[0]), std::abs(u[1]));
  if (a == 0.0) throw DomainError("elliptope_fiber_closed: u must be nonzero");
  // (|u+v|^3 - |u-v|^3) / (3uv) rewritten without the removable singularity
  return 2.0 * a + 2.0 * b * b / (3.0 * a);
}

}  // namespace fiber
