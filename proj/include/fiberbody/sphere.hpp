#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "fiberbody/core.hpp"

namespace fiber {

enum class SphereMode { UniformGrid, Fibonacci, SeededRandom };

SphereMode parse_sphere_mode(std::string_view name);

/// Deterministic (or seeded) set of unit vectors in R^dim. When
/// count >= 2*dim the set contains all signed coordinate axes.
///
/// dim == 2, UniformGrid: the four axes plus the remaining points spread
/// evenly over the four quarter arcs, in counter-clockwise order starting at
/// e_1. For count divisible by 4 this is the equiangular grid.
/// dim == 1: alternates +1, -1.
std::vector<Vec> sphere_sample(int dim, int count,
                               SphereMode mode = SphereMode::UniformGrid,
                               std::uint64_t seed = 0);

/// Equiangular directions (cos(2 pi k / count), sin(2 pi k / count)).
std::vector<Vec> circle_directions(int count, double phase = 0.0);

}  // namespace fiber
