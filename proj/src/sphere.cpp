#include "fiberbody/sphere.hpp"

#include <cmath>
#include <random>

namespace fiber {

SphereMode parse_sphere_mode(std::string_view name) {
  if (name == "uniform-grid") return SphereMode::UniformGrid;
  if (name == "fibonacci") return SphereMode::Fibonacci;
  if (name == "seeded-random") return SphereMode::SeededRandom;
  throw InputError("unknown sphere sampling mode '" + std::string(name) + "'");
}

std::vector<Vec> circle_directions(int count, double phase) {
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = phase + 2.0 * kPi * k / count;
    out.push_back(make_vec({std::cos(t), std::sin(t)}));
  }
  return out;
}

namespace {

std::vector<Vec> circle_with_axes(int count) {
  if (count < 4) return circle_directions(count);
  std::vector<Vec> out;
  out.reserve(count);
  const int extra = count - 4;
  for (int arc = 0; arc < 4; ++arc) {
    const int inner = extra / 4 + (arc < extra % 4 ? 1 : 0);
    const double start = arc * kPi / 2.0;
    for (int j = 0; j <= inner; ++j) {
      const double t = start + (kPi / 2.0) * j / (inner + 1);
      Vec v = make_vec({std::cos(t), std::sin(t)});
      if (j == 0) {  // exact axes
        v.setZero();
        v[arc % 2] = arc < 2 ? 1.0 : -1.0;
      }
      out.push_back(v);
    }
  }
  return out;
}

std::vector<Vec> signed_axes(int dim) {
  std::vector<Vec> out;
  for (int i = 0; i < dim; ++i) {
    out.push_back(unit(dim, i));
    out.push_back(-unit(dim, i));
  }
  return out;
}

Vec fibonacci_point(int k, int total) {
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double z = 1.0 - (2.0 * k + 1.0) / total;
  const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
  const double t = golden * k;
  return make_vec({r * std::cos(t), r * std::sin(t), z});
}

Vec random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

}  // namespace

std::vector<Vec> sphere_sample(int dim, int count, SphereMode mode,
                               std::uint64_t seed) {
  if (dim < 1 || count < 1) throw DomainError("sphere_sample: dim and count must be >= 1");
  std::vector<Vec> out;
  if (dim == 1) {
    for (int k = 0; k < count; ++k) out.push_back(make_vec({k % 2 == 0 ? 1.0 : -1.0}));
    return out;
  }
  if (dim == 2 && mode != SphereMode::SeededRandom) return circle_with_axes(count);

  const bool with_axes = count >= 2 * dim;
  if (with_axes) out = signed_axes(dim);
  const int rest = count - static_cast<int>(out.size());
  if (mode == SphereMode::SeededRandom || dim > 3) {
    std::mt19937_64 rng(seed);
    for (int k = 0; k < rest; ++k) out.push_back(random_unit(dim, rng));
  } else {
    for (int k = 0; k < rest; ++k) out.push_back(fibonacci_point(k, rest));
  }
  for (auto& v : out) v /= v.norm();
  return out;
}

}  // namespace fiber
