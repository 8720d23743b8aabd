#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fiberbody/body.hpp"
#include "fiberbody/sampled.hpp"

namespace fiber {

enum class Method { Auto, Slicer, Curved, ZonoidExact, ZonoidMc, ClosedForm };

std::string method_name(Method m);
/// Throws InputError on an unknown name.
Method parse_method(const std::string& name);

struct RouteOptions {
  Method method = Method::Auto;
  int nodes = 64;
  long samples = 200000;
  std::uint64_t seed = 1;
  int workers = 0;
};

/// Closed-form fiber support when one is known for this body and split:
/// elliptope and dice under x -> x1, balls under any split.
std::optional<std::function<double(const Vec&)>> closed_form(const Body& body, const ProjectionSplit& split);

/// Every method that can evaluate the fiber body of `body`; runs the curvature
/// check, so it is not free.
std::vector<Method> applicable_methods(const Body& body, const ProjectionSplit& split);

/// Auto: zonotope -> exact, zonoid -> Monte-Carlo, curved -> curved, else slicer.
/// An explicit method that does not apply throws MethodError naming the ones that do.
Method resolve_method(const Body& body, const ProjectionSplit& split, Method requested);

SampledSupport fiber_route(const Body& body, const ProjectionSplit& split, const std::vector<Vec>& directions,
                           const RouteOptions& opts);

enum class Suite { Homogeneity, Symmetry, Equivariance, Subadditivity, Sandwich, RouteAgreement };

std::string suite_name(Suite s);
Suite parse_suite(const std::string& name);
std::vector<Suite> all_suites();

struct Check {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct VerifyReport {
  std::vector<Check> checks;
  bool passed() const;
};

VerifyReport run_verify(const Body& body, const ProjectionSplit& split, Suite suite, const RouteOptions& opts,
                        int directions = 16);

}  // namespace fiber
