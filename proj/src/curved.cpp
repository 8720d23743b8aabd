#include "fiberbody/curved.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fiberbody/quadrature.hpp"
#include "fiberbody/slicer.hpp"
#include "fiberbody/sphere.hpp"

namespace fiber {

namespace {

Vec grad_at(const Body& body, const Vec& p) {
  if (auto g = exact_gradient(body, p)) return *g;
  return support_gradient(body, p, 1e-6);
}

// Orthonormal basis of v^perp as columns.
Mat complement_basis(const Vec& v) {
  const int d = static_cast<int>(v.size());
  Mat full = Mat::Identity(d, d);
  Eigen::HouseholderQR<Mat> qr(v.normalized());
  Mat q = qr.householderQ() * full;
  return q.rightCols(d - 1);
}

}  // namespace

CurvatureReport curvature_validate(const Body& body, int sphere_samples, double tol) {
  const int d = body.dim();
  if (d < 2) throw DimensionError("curvature check needs dim >= 2");
  const bool analytic = exact_gradient(body, unit(d, 0)).has_value();
  const double delta = analytic ? 1e-5 : 1e-3;
  auto dirs = sphere_sample(d, sphere_samples, SphereMode::Fibonacci);

  double scale = 0.0;
  for (const auto& v : dirs) scale = std::max(scale, std::abs(support(body, v)));
  CurvatureReport rep;
  rep.min_eigenvalue = std::numeric_limits<double>::infinity();
  const double floor = tol * std::max(scale, 1e-300);
  int degenerate = 0;
  auto restricted = [&](const Vec& v, const Mat& q, double step) {
    Mat hq(d, d - 1);
    for (int j = 0; j < d - 1; ++j) {
      Vec e = q.col(j);
      hq.col(j) = (grad_at(body, v + step * e) - grad_at(body, v - step * e)) / (2 * step);
    }
    Mat t = q.transpose() * hq;
    return Mat(0.5 * (t + t.transpose()));
  };
  for (const auto& v : dirs) {
    Mat q = complement_basis(v);
    Mat t = restricted(v, q, delta);
    Mat fine = restricted(v, q, 0.25 * delta);
    // a gradient jump makes the difference quotient scale like 1/step
    if ((t - fine).norm() > 1e-2 * std::max(1.0, t.norm())) rep.smooth = false;
    Eigen::SelfAdjointEigenSolver<Mat> es(t, Eigen::EigenvaluesOnly);
    const double low = es.eigenvalues().minCoeff();
    rep.min_eigenvalue = std::min(rep.min_eigenvalue, low);
    if (low <= floor) ++degenerate;
  }
  rep.degenerate_fraction = static_cast<double>(degenerate) / dirs.size();
  rep.curved = rep.smooth && degenerate == 0;
  rep.weakly_curved =
      rep.curved || (rep.smooth && rep.min_eigenvalue > -floor && rep.degenerate_fraction <= 0.05);
  return rep;
}

CurvedIntegrand::CurvedIntegrand(Body body, ProjectionSplit split, Vec u, double fd_step,
                                 bool validate)
    : body_(std::move(body)), split_(std::move(split)), u_(std::move(u)), fd_step_(fd_step) {
  if (body_.dim() != split_.ambient()) throw DimensionError("body and split dimensions differ");
  if (u_.size() != split_.m()) throw DimensionError("direction must live in W");
  if (std::abs(u_.norm() - 1.0) > 1e-9) throw DomainError("direction must be a unit vector");
  if (split_.n() > 2) throw UnsupportedDimensionError("curved route handles dim V <= 2");
  if (!(fd_step_ > 0)) throw DomainError("fd_step must be positive");
  if (validate) {
    auto rep = curvature_validate(body_);
    if (!rep.weakly_curved) {
      std::ostringstream os;
      os << "body is not curved (" << (rep.smooth ? "" : "support function not C2, ")
         << "min tangential eigenvalue " << rep.min_eigenvalue << ", degenerate on "
         << 100 * rep.degenerate_fraction << "% of directions)";
      throw NotCurvedError(os.str());
    }
  }
}

CurvedIntegrand CurvedIntegrand::with_direction(const Vec& u) const {
  return CurvedIntegrand(body_, split_, u, fd_step_, false);
}

Vec CurvedIntegrand::gradient(const Vec& p) const { return grad_at(body_, p); }

Vec psi(const CurvedIntegrand& ci, const Vec& xi) {
  const auto& s = ci.split();
  Vec zero_w = Vec::Zero(s.m());
  Vec p = s.embed(xi, zero_w) + s.basis_w() * ci.u();
  return s.v_part(ci.gradient(p));
}

namespace {

double jacobian(const CurvedIntegrand& ci, const Vec& xi) {
  const int n = static_cast<int>(xi.size());
  const double step = ci.fd_step() * (1.0 + xi.norm());
  Mat j(n, n);
  for (int k = 0; k < n; ++k) {
    Vec e = Vec::Zero(n);
    e(k) = step;
    j.col(k) = (psi(ci, xi + e) - psi(ci, xi - e)) / (2 * step);
  }
  return j.determinant();
}

// Shared driver: accumulates int grad h(u + xi) J(xi) dxi over V in ambient coordinates.
CurvedValue integrate(const CurvedIntegrand& ci, int quad_nodes) {
  if (quad_nodes < 1) throw DomainError("need at least one quadrature node");
  const auto& s = ci.split();
  const int n = s.n();
  const GaussRule rule = gauss_legendre(quad_nodes);
  const double half = kPi / 2;
  const Vec base = s.basis_w() * ci.u();

  Vec acc = Vec::Zero(s.ambient());
  int pos = 0, neg = 0;
  auto node = [&](const Vec& xi, double weight) {
    double jac = jacobian(ci, xi);
    if (jac > 0) ++pos;
    if (jac < 0) ++neg;
    Vec p = base + s.basis_v() * xi;
    acc += weight * jac * ci.gradient(p);
  };

  const int q = static_cast<int>(rule.nodes.size());
  if (n == 1) {
    for (int i = 0; i < q; ++i) {
      double th = half * rule.nodes[i];
      double c = std::cos(th);
      Vec xi(1);
      xi(0) = std::tan(th);
      node(xi, half * rule.weights[i] / (c * c));
    }
  } else {
    for (int i = 0; i < q; ++i) {
      double t1 = half * rule.nodes[i], c1 = std::cos(t1);
      for (int k = 0; k < q; ++k) {
        double t2 = half * rule.nodes[k], c2 = std::cos(t2);
        Vec xi(2);
        xi << std::tan(t1), std::tan(t2);
        node(xi, half * half * rule.weights[i] * rule.weights[k] / (c1 * c1 * c2 * c2));
      }
    }
  }
  if (!acc.allFinite()) throw Error("curved integral produced a non-finite value");
  CurvedValue out;
  out.gradient = s.w_part(acc);
  out.value = ci.u().dot(out.gradient);
  out.ill_conditioned = pos > 0 && neg > 0;
  return out;
}

}  // namespace

CurvedValue curved_fiber_support(const CurvedIntegrand& ci, int quad_nodes) {
  CurvedValue v = integrate(ci, quad_nodes);
  v.gradient.resize(0);
  return v;
}

CurvedValue curved_fiber_gradient(const CurvedIntegrand& ci, int quad_nodes) {
  return integrate(ci, quad_nodes);
}

double schneider_fiber_closed(double alpha, const Vec& u) {
  if (u.size() != 2) throw DimensionError("fiber direction lives in R^2");
  double r = u.norm();
  if (r == 0) throw DomainError("direction must be nonzero");
  double a = alpha;
  double u2 = u(0), u3 = u(1);
  double poly = 8 * (a - 2) * std::pow(u2, 4) - 8 * (a * a + 2 * a - 8) * u2 * u2 * u3 * u3 +
                (-25 * a * a + 16 * a + 32) * std::pow(u3, 4);
  return kPi / (64 * r * r * r) * poly;
}

QuarticFit fit_quartic_on_circle(const std::vector<Vec>& directions,
                                 const std::vector<double>& values) {
  if (directions.size() != values.size()) throw InputError("directions and values differ in length");
  if (directions.size() < 5) throw InputError("need at least five directions for a quartic fit");
  const int rows = static_cast<int>(directions.size());
  Mat a(rows, 5);
  Vec b(rows);
  for (int i = 0; i < rows; ++i) {
    Vec d = directions[i].normalized();
    for (int k = 0; k < 5; ++k) a(i, k) = std::pow(d(0), 4 - k) * std::pow(d(1), k);
    b(i) = values[i];
  }
  Vec c = a.colPivHouseholderQr().solve(b);
  QuarticFit fit;
  fit.coefficients.assign(c.data(), c.data() + 5);
  fit.max_residual = (a * c - b).cwiseAbs().maxCoeff();
  return fit;
}

SchneiderReport schneider_report(double alpha, int directions, int quad_nodes) {
  Body body = Body::schneider(alpha);
  ProjectionSplit split = ProjectionSplit::coordinate(1, 2);
  CurvedIntegrand base(body, split, unit(2, 0));
  SchneiderReport rep;
  rep.alpha = alpha;
  rep.directions = circle_directions(directions, 0.1);
  for (const auto& u : rep.directions) {
    double c = curved_fiber_support(base.with_direction(u), quad_nodes).value;
    double s = fiber_support_numeric(body, split, u, QuadratureRule::gauss(quad_nodes));
    rep.curved.push_back(c);
    rep.slicer.push_back(s);
    rep.printed.push_back(schneider_fiber_closed(alpha, u));
    rep.max_route_gap = std::max(rep.max_route_gap, std::abs(c - s) / (1 + std::abs(c)));
  }
  rep.fit = fit_quartic_on_circle(rep.directions, rep.curved);
  const double a = alpha;
  const double f = kPi / 64;
  rep.printed_coefficients = {f * 8 * (a - 2), 0.0, -f * 8 * (a * a + 2 * a - 8), 0.0,
                              f * (-25 * a * a + 16 * a + 32)};

  double worst = 0.0;
  for (size_t i = 0; i < rep.curved.size(); ++i)
    worst = std::max(worst, std::abs(rep.curved[i] - rep.printed[i]));
  std::ostringstream os;
  os.precision(6);
  os << "max |numeric - printed| = " << worst;
  if (rep.printed_coefficients[0] < 0)
    os << "; printed form is negative at (1,0) (" << rep.printed_coefficients[0]
       << "), impossible for a body containing the origin";
  // the fit agrees with the printed u2^2 u3^2 and u3^4 terms; test whether the
  // u2^4 term lost a square
  const double squared = f * 8 * (a - 2) * (a - 2);
  const double worst_coef = [&] {
    double w = 0.0;
    for (int k = 1; k < 5; ++k) w = std::max(w, std::abs(rep.fit.coefficients[k] - rep.printed_coefficients[k]));
    return w;
  }();
  if (std::abs(rep.fit.coefficients[0] - squared) < 1e-6 && worst_coef < 1e-6)
    os << "; numeric u2^4 coefficient equals (pi/64) 8 (alpha-2)^2, the printed 8 (alpha-2) lacks the square;"
          " other coefficients agree";
  os << "; quartic fit residual " << rep.fit.max_residual;
  if (rep.fit.max_residual > 1e-6) os << " (numeric support is not a quartic form on the circle)";
  rep.diagnosis = os.str();
  return rep;
}

}  // namespace fiber
