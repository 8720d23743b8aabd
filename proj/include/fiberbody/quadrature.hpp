#pragma once

#include <functional>
#include <vector>

namespace fiber {

/// Gauss-Legendre nodes and weights on [-1, 1], nodes ascending.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussRule gauss_legendre(int count);

/// Integral of f over [a, b] with the rule mapped affinely; summation runs
/// in node order.
double integrate_gauss(const GaussRule& rule, double a, double b,
                       const std::function<double(double)>& f);

/// Adaptive Gauss-Kronrod (15 point) integration of a smooth integrand.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-13);

}  // namespace fiber
