#pragma once

#include <vector>

#include "fiberbody/core.hpp"

namespace fiber {

/// One facet {x : <normal, x> = offset} of a polytope containing the origin
/// in its interior, so offset > 0.
struct Facet {
  Vec normal;
  double offset;
};

/// Facet description of a polytope together with the derivative order used
/// to puff it.
class FacetSystem {
 public:
  FacetSystem(std::vector<Facet> facets, int order);

  const std::vector<Facet>& facets() const { return facets_; }
  int order() const { return order_; }
  int dim() const { return static_cast<int>(facets_.front().normal.size()); }
  FacetSystem with_order(int order) const { return {facets_, order}; }

 private:
  std::vector<Facet> facets_;
  int order_;
};

/// Value at `point` of the order-th w-derivative of prod_j (l_j(x) - a_j w),
/// taken at w = 1. Evaluated through the elementary symmetric sum over
/// order-subsets, never by expanding the polynomial.
double puffed_eval(const FacetSystem& fs, const Vec& point);

/// Radial function of the puffed body: the first zero of puffed_eval along
/// the ray t * direction, t > 0. Along the ray the polynomial is univariate;
/// its real roots are isolated between the roots of its derivative
/// (recursively) and refined by bisection, so close pairs of crossings near
/// a vertex and touching zeros are not skipped.
double puffed_radial(const FacetSystem& fs, const Vec& direction);

/// Radial function of the polytope itself, min over facets facing the ray.
double polytope_radial(const FacetSystem& fs, const Vec& direction);

/// Lower bound for the support function: max of <u, r(d) d> over a sphere
/// sample of `boundary_samples` directions, refined by compass search around
/// the best sample.
double puffed_support(const FacetSystem& fs, const Vec& u, int boundary_samples = 2000);

/// True iff every vertex lies on exactly dim facets. Throws
/// InvalidPolytopeError if some vertex lies on fewer than dim facets.
bool is_simple(const std::vector<Vec>& vertices, const FacetSystem& facets);

/// Facets of conv(vertices) for dimension 2 or 3 in polar form <l, x> <= 1
/// (offset 1), which is the scaling the puffed polynomial is defined with.
/// Requires the origin in the interior.
FacetSystem facets_from_vertices(const std::vector<Vec>& vertices, int order = 1);

enum class Strictness { Strict, NotStrict, Unknown };

/// Whether the fiber body of puff_order(P) is strictly convex for fiber
/// dimension m: order 1 iff m == 2, order 2 iff m <= 3, higher orders
/// iff m <= order + 1 for simple polytopes (unknown otherwise).
Strictness puffed_strict_convexity(int order, int m, bool simple);

/// Support function of the elliptope slice over x, an ellipse in the (y, z)
/// plane: sqrt(u^2 + v^2 + 2 x u v). Requires |x| < 1.
double elliptope_slice_support(double x, const Vec& u);

/// Closed-form fiber body support of the elliptope under (x,y,z) -> x:
/// (|u+v|^3 - |u-v|^3) / (3uv), extended continuously to uv = 0.
double elliptope_fiber_closed(const Vec& u);

}  // namespace fiber
