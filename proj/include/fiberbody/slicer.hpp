#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fiberbody/body.hpp"
#include "fiberbody/sampled.hpp"

namespace fiber {

/// Discretization of the integral over pi(K).
struct QuadratureRule {
  enum class Kind { GaussLegendre, TensorGauss, MonteCarlo };

  Kind kind = Kind::GaussLegendre;
  int nodes_per_axis = 64;
  /// Integration runs over shrink * pi(K) (about its center); the two
  /// margins are filled by the integrand at the shrunk endpoints.
  double shrink = 1.0 - 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
  static QuadratureRule gauss(int nodes, double shrink = 1.0 - 1e-4);
  static QuadratureRule monte_carlo(int samples_per_axis, std::uint64_t seed);
};

struct SliceQuery {
  Vec x;  // point of V, in V-coordinates
  Vec u;  // direction of W, in W-coordinates
  int max_iterations = 200;
  double tolerance = 1e-10;
};

struct SliceResult {
  double value = 0.0;
  /// False when the iteration budget ran out before the tolerance was met
  /// (the value is still the best upper bound found).
  bool converged = true;
  int evaluations = 0;
};

/// h_{K_x}(u) = inf_{v in V} [h_K(v + u) - <v, x>], minimized by golden
/// section after an expanding bracket (n = 1) or by nested 1-D minimizations
/// (n = 2; the inner minimum is again convex in the outer variable).
/// Throws EmptySliceError when x is not in the interior of pi(K).
SliceResult slice_support(const Body& body, const ProjectionSplit& split, const SliceQuery& q);

struct FiberValue {
  double value = 0.0;
  double std_error = 0.0;  // Monte-Carlo rule only
  int skipped_nodes = 0;
  bool converged = true;
};

/// Quadrature of x -> h_{K_x}(u) over pi(K). Supports n = 1 and n = 2.
FiberValue fiber_support_detail(const Body& body, const ProjectionSplit& split, const Vec& u,
                                const QuadratureRule& rule);
double fiber_support_numeric(const Body& body, const ProjectionSplit& split, const Vec& u,
                             const QuadratureRule& rule);

/// fiber_support_numeric over a direction list, evaluated concurrently.
SampledSupport fiber_body_sampled(const Body& body, const ProjectionSplit& split,
                                  const std::vector<Vec>& directions, const QuadratureRule& rule);

/// Support at v of the face (Sigma K)^u, integrating the face supports of the
/// slices (one-sided derivatives of the slice support at u).
double face_fiber_support(const Body& body, const ProjectionSplit& split, const Vec& u,
                          const Vec& v, const QuadratureRule& rule, double rel_step = 1e-5);

struct StrictnessVerdict {
  bool strict = false;
  double face_width = 0.0;
};

/// Largest width D+h(u; w) + D+h(u; -w) of the face in direction u over a
/// grid of w; strict iff that width is below tol.
StrictnessVerdict strict_convexity_direction(const SupportFn& h, const Vec& u, int w_samples = 16,
                                             double tol = 1e-4, double rel_step = 1e-6);

/// Largest width of the face (Sigma K)^u over sampled directions w of W,
/// from face_fiber_support in w and -w. n = 1.
StrictnessVerdict fiber_face_strictness(const Body& body, const ProjectionSplit& split, const Vec& u,
                                        const QuadratureRule& rule, int w_samples = 16, double tol = 1e-4);

/// Fraction of slices K_x strictly convex in direction u, x at the midpoints
/// of x_samples equal cells of shrink * pi(K). n = 1 only.
double fiber_strict_convexity(const Body& body, const ProjectionSplit& split, const Vec& u,
                              int x_samples = 50, double tol = 1e-4,
                              double shrink = 1.0 - 1e-4);

}  // namespace fiber
