#include "fiberbody/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiber {

void SampledSupport::validate() const {
  if (values.size() != directions.size())
    throw ValidationError("sampled support: one value per direction required");
  if (!std_errors.empty() && std_errors.size() != directions.size())
    throw ValidationError("sampled support: one standard error per direction required");
  for (const auto& d : directions) {
    if (d.size() != dim) throw ValidationError("sampled support: direction of wrong dimension");
    if (std::abs(d.norm() - 1.0) > 1e-12) throw ValidationError("sampled support: directions must be unit vectors");
  }
}

double hausdorff_distance(const SampledSupport& a, const SampledSupport& b) {
  if (a.size() != b.size() || a.dim != b.dim)
    throw InputError("hausdorff_distance: direction lists differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if ((a.directions[i] - b.directions[i]).norm() > 1e-9)
      throw InputError("hausdorff_distance: direction " + std::to_string(i) + " differs");
    worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  }
  return worst;
}

double min_width(const SampledSupport& s) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if ((s.directions[i] + s.directions[j]).norm() < 1e-9)
        best = std::min(best, s.values[i] + s.values[j]);
  return best;
}

namespace {

using Polygon = std::vector<Eigen::Vector2d>;

Polygon clip(const Polygon& poly, const Eigen::Vector2d& n, double h) {
  Polygon out;
  const auto count = poly.size();
  for (std::size_t i = 0; i < count; ++i) {
    const auto& p = poly[i];
    const auto& q = poly[(i + 1) % count];
    const double sp = n.dot(p) - h, sq = n.dot(q) - h;
    if (sp <= 0.0) out.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
  }
  return out;
}

Polygon intersect(const SampledSupport& s, double slack, double radius) {
  Polygon poly{{-radius, -radius}, {radius, -radius}, {radius, radius}, {-radius, radius}};
  for (std::size_t k = 0; k < s.size() && !poly.empty(); ++k)
    poly = clip(poly, Eigen::Vector2d(s.directions[k][0], s.directions[k][1]), s.values[k] + slack);
  return poly;
}

double area(const Polygon& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& v = p[i];
    const auto& w = p[(i + 1) % p.size()];
    a += v.x() * w.y() - v.y() * w.x();
  }
  return 0.5 * a;
}

}  // namespace

std::vector<Vec> polygon_from_support(const SampledSupport& s) {
  if (s.dim != 2) throw GeometryError("polygon_from_support needs planar (d = 2) data");
  if (s.size() < 3) throw GeometryError("polygon_from_support needs at least 3 directions");

  std::vector<double> angles;
  for (const auto& d : s.directions) angles.push_back(std::atan2(d[1], d[0]));
  std::sort(angles.begin(), angles.end());
  double gap = angles.front() + 2.0 * kPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
  if (gap >= kPi - 1e-12) throw GeometryError("directions do not surround the origin; polygon unbounded");

  double scale = 0.0;
  for (double h : s.values) scale = std::max(scale, std::abs(h));
  const double radius = 4.0 * (scale + 1.0) / std::cos(0.5 * gap);

  Polygon poly = intersect(s, 0.0, radius);
  if (poly.size() < 3 || std::abs(area(poly)) <= 1e-12 * (scale * scale + 1e-300)) {
    // zero-width body: retry with a small slack and collapse to a segment
    poly = intersect(s, 1e-9 * (scale + 1.0), radius);
    if (poly.empty()) throw GeometryError("support data are infeasible (not a support function)");
    std::size_t lo = 0, hi = 0;
    Eigen::Vector2d axis = poly.front() - poly.back();
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (std::size_t j = 0; j < poly.size(); ++j)
        if ((poly[i] - poly[j]).norm() > axis.norm()) axis = poly[i] - poly[j];
    for (std::size_t i = 0; i < poly.size(); ++i) {
      if (poly[i].dot(axis) < poly[lo].dot(axis)) lo = i;
      if (poly[i].dot(axis) > poly[hi].dot(axis)) hi = i;
    }
    return {Vec(poly[lo]), Vec(poly[hi])};
  }
  std::vector<Vec> out;
  for (const auto& p : poly) {
    if (!out.empty() && (Vec(p) - out.back()).norm() <= 1e-12 * (scale + 1.0)) continue;
    out.push_back(Vec(p));
  }
  if (out.size() > 1 && (out.front() - out.back()).norm() <= 1e-12 * (scale + 1.0)) out.pop_back();
  return out;
}

}  // namespace fiber
