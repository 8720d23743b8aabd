#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fiberbody/core.hpp"

namespace fiber {

/// Support function of a body sampled on a set of unit directions. This is
/// the common output of every fiber-body route.
struct SampledSupport {
  int dim = 0;
  std::vector<Vec> directions;
  std::vector<double> values;
  /// Standard errors for stochastic routes; empty for deterministic ones.
  std::vector<double> std_errors;

  std::string method;
  int nodes = 0;
  long long samples = 0;
  std::uint64_t seed = 0;

  std::size_t size() const { return directions.size(); }
  bool stochastic() const { return !std_errors.empty(); }
  /// Throws ValidationError unless directions are unit vectors of dimension
  /// `dim` and values/std_errors have matching lengths.
  void validate() const;
};

/// max |h_a - h_b| over the shared direction list. This is a lower bound for
/// the Hausdorff distance, limited by the sample resolution.
double hausdorff_distance(const SampledSupport& a, const SampledSupport& b);

/// Smallest width h(u) + h(-u) over antipodal pairs present in the sample
/// (+inf when there are none).
double min_width(const SampledSupport& s);

/// Circumscribed polygon {y : <u_k, y> <= h_k for all k} of planar support
/// data, counter-clockwise. Bodies of (near) zero width come back as two
/// points. Throws GeometryError on infeasible data or when the directions do
/// not surround the origin.
std::vector<Vec> polygon_from_support(const SampledSupport& s);

}  // namespace fiber
