#pragma once

#include <string>
#include <vector>

#include "fiberbody/body.hpp"

namespace fiber {

struct CurvatureReport {
  bool curved = false;
  /// Positive semidefinite everywhere and definite off a thin set of
  /// directions (at most 5% of the sample). Schneider's body at alpha = -0.4
  /// is like this: its meridian curvature radius vanishes on the equator.
  bool weakly_curved = false;
  /// Smallest eigenvalue of the tangential Hessian of h over the samples.
  double min_eigenvalue = 0.0;
  /// Share of sample directions whose restricted Hessian is not definite.
  double degenerate_fraction = 0.0;
  /// The Hessian estimate is stable under step refinement at every sample;
  /// false when h has a kink or a gradient jump (e.g. a flat face).
  bool smooth = true;
};

/// Finite-difference Hessian of h_K at sampled unit v, restricted to v^perp.
/// The body counts as curved when every restricted Hessian is positive
/// definite beyond tol * max h_K(v).
CurvatureReport curvature_validate(const Body& body, int sphere_samples = 200, double tol = 1e-4);

/// Body, split and unit W-direction u of the Jacobian integral
///   h(u) = int_V <u, grad h_K(u + xi)> J_psi(xi) dxi,  psi(xi) = pi grad h_K(u + xi).
/// Construction checks (weak) curvedness (NotCurvedError) unless told not to.
class CurvedIntegrand {
 public:
  CurvedIntegrand(Body body, ProjectionSplit split, Vec u, double fd_step = 1e-5,
                  bool validate = true);

  /// Same body and split, new direction; skips the curvature check.
  CurvedIntegrand with_direction(const Vec& u) const;

  const Body& body() const { return body_; }
  const ProjectionSplit& split() const { return split_; }
  const Vec& u() const { return u_; }
  double fd_step() const { return fd_step_; }

  /// grad h_K at an ambient point (analytic where available).
  Vec gradient(const Vec& p) const;

 private:
  Body body_;
  ProjectionSplit split_;
  Vec u_;
  double fd_step_;
};

/// V-part of grad h_K(u + xi); xi given in V-coordinates.
Vec psi(const CurvedIntegrand& ci, const Vec& xi);

struct CurvedValue {
  double value = 0.0;
  /// W-components of the integrated gradient (curved_fiber_gradient only).
  Vec gradient;
  /// The Jacobian changed sign across quadrature nodes.
  bool ill_conditioned = false;
};

/// Jacobian integral over V after xi_i = tan(theta_i), Gauss-Legendre in
/// theta. n = 1 or 2.
CurvedValue curved_fiber_support(const CurvedIntegrand& ci, int quad_nodes = 64);

/// W-part of int_V grad h_K(u + xi) J_psi(xi) dxi, i.e. the gradient of the
/// fiber body support at u; `value` holds <u, gradient>.
CurvedValue curved_fiber_gradient(const CurvedIntegrand& ci, int quad_nodes = 64);

/// The polynomial expression printed for the fiber body of Schneider's body
/// under (u1,u2,u3) -> u1, evaluated verbatim:
///   pi / (64 |u|^3) (8(a-2) u2^4 - 8(a^2+2a-8) u2^2 u3^2 + (-25a^2+16a+32) u3^4).
double schneider_fiber_closed(double alpha, const Vec& u);

/// Coefficients (of u2^4, u2^3 u3, u2^2 u3^2, u2 u3^3, u3^4) of the quartic
/// form that reproduces unit-circle support values, and the residual.
struct QuarticFit {
  std::vector<double> coefficients;
  double max_residual = 0.0;
};

QuarticFit fit_quartic_on_circle(const std::vector<Vec>& directions, const std::vector<double>& values);

/// Comparison between the two numeric routes for Schneider's body and the
/// printed closed form.
struct SchneiderReport {
  double alpha = 0.0;
  std::vector<Vec> directions;
  std::vector<double> curved;
  std::vector<double> slicer;
  std::vector<double> printed;
  double max_route_gap = 0.0;  // max |curved - slicer| / (1 + |h|)
  QuarticFit fit;              // fit of the curved route
  std::vector<double> printed_coefficients;
  std::string diagnosis;
};

SchneiderReport schneider_report(double alpha, int directions = 16, int quad_nodes = 64);

}  // namespace fiber
