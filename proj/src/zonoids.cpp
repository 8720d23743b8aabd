#include "fiberbody/zonoids.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/LU>

#include "fiberbody/parallel.hpp"
#include "fiberbody/quadrature.hpp"

namespace fiber {

namespace {

void check_weights(const std::vector<double>& w, std::size_t count) {
  if (w.size() != count) throw ValidationError("weights and components differ in number");
  if (count == 0) throw ValidationError("model needs at least one component");
  double total = 0.0;
  for (double x : w) {
    if (!(x >= 0.0)) throw ValidationError("weights must be nonnegative");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ValidationError("weights must sum to 1");
}

std::vector<double> cumulate(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  std::partial_sum(w.begin(), w.end(), c.begin());
  c.back() = 1.0;
  return c;
}

// enumerate k-subsets of {0..n-1} in lexicographic order
template <class F>
void for_each_subset(int n, int k, F&& f) {
  if (k > n || k < 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

RandomVectorModel RandomVectorModel::discrete(std::vector<Vec> atoms, std::vector<double> weights) {
  check_weights(weights, atoms.size());
  RandomVectorModel m;
  m.kind_ = Kind::Discrete;
  m.dim_ = static_cast<int>(atoms.front().size());
  for (const auto& a : atoms) {
    if (a.size() != m.dim_) throw DimensionError("atoms differ in dimension");
    if (!a.allFinite()) throw ValidationError("atoms must be finite");
  }
  m.atoms_ = std::move(atoms);
  m.cumulative_ = cumulate(weights);
  m.weights_ = std::move(weights);
  return m;
}

RandomVectorModel RandomVectorModel::disc_uniform(const Vec& axis) {
  Body d = Body::disc(axis);
  const auto& disc = std::get<Body::Disc>(d.variant());
  RandomVectorModel m;
  m.kind_ = Kind::DiscUniform;
  m.dim_ = 3;
  m.a_ = axis.norm() * disc.a;
  m.b_ = axis.norm() * disc.b;
  return m;
}

RandomVectorModel RandomVectorModel::mixture(std::vector<RandomVectorModel> models,
                                             std::vector<double> weights) {
  check_weights(weights, models.size());
  RandomVectorModel m;
  m.kind_ = Kind::Mixture;
  m.dim_ = models.front().dim();
  for (const auto& p : models)
    if (p.dim() != m.dim_) throw DimensionError("mixture components differ in dimension");
  m.parts_ = std::move(models);
  m.cumulative_ = cumulate(weights);
  m.weights_ = std::move(weights);
  return m;
}

RandomVectorModel RandomVectorModel::scaled(double c, RandomVectorModel model) {
  if (!std::isfinite(c)) throw ValidationError("scale must be finite");
  RandomVectorModel m;
  m.kind_ = Kind::Scaled;
  m.dim_ = model.dim();
  m.scale_ = c;
  m.parts_.push_back(std::move(model));
  return m;
}

RandomVectorModel RandomVectorModel::linear(const Mat& matrix, RandomVectorModel model) {
  if (matrix.cols() != model.dim()) throw DimensionError("matrix columns must match model dimension");
  RandomVectorModel m;
  m.kind_ = Kind::Linear;
  m.dim_ = static_cast<int>(matrix.rows());
  m.matrix_ = matrix;
  m.parts_.push_back(std::move(model));
  return m;
}

std::size_t RandomVectorModel::pick(std::mt19937_64& rng) const {
  double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
  return std::min<std::size_t>(it - cumulative_.begin(), cumulative_.size() - 1);
}

Vec RandomVectorModel::sample(std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::Discrete:
      return atoms_[pick(rng)];
    case Kind::DiscUniform: {
      double t = std::uniform_real_distribution<double>(0.0, 2 * kPi)(rng);
      return std::cos(t) * a_ + std::sin(t) * b_;
    }
    case Kind::Mixture:
      return parts_[pick(rng)].sample(rng);
    case Kind::Scaled:
      return scale_ * parts_.front().sample(rng);
    case Kind::Linear:
      return matrix_ * parts_.front().sample(rng);
  }
  return Vec();
}

double RandomVectorModel::support(const Vec& u) const {
  if (u.size() != dim_) throw DimensionError("direction dimension does not match model");
  switch (kind_) {
    case Kind::Discrete: {
      double s = 0.0;
      for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * std::abs(u.dot(atoms_[i]));
      return 0.5 * s;
    }
    case Kind::DiscUniform:
      // E|cos| = 2/pi
      return std::hypot(u.dot(a_), u.dot(b_)) / kPi;
    case Kind::Mixture: {
      double s = 0.0;
      for (std::size_t i = 0; i < parts_.size(); ++i) s += weights_[i] * parts_[i].support(u);
      return s;
    }
    case Kind::Scaled:
      return std::abs(scale_) * parts_.front().support(u);
    case Kind::Linear:
      return parts_.front().support(matrix_.transpose() * u);
  }
  return 0.0;
}

RandomVectorModel zonoid_model(const Body& body) {
  return std::visit(
      [&](const auto& node) -> RandomVectorModel {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Body::Zonotope>) {
          const double n = static_cast<double>(node.generators.size());
          std::vector<Vec> atoms;
          for (const auto& z : node.generators) atoms.push_back(n * z);
          return RandomVectorModel::discrete(std::move(atoms),
                                             std::vector<double>(node.generators.size(), 1.0 / n));
        } else if constexpr (std::is_same_v<T, Body::Disc>) {
          return RandomVectorModel::scaled(kPi, RandomVectorModel::disc_uniform(node.axis));
        } else if constexpr (std::is_same_v<T, Body::Discotope>) {
          const double n = static_cast<double>(node.discs.size());
          std::vector<RandomVectorModel> parts;
          for (const auto& d : node.discs) parts.push_back(RandomVectorModel::disc_uniform(d.axis));
          return RandomVectorModel::scaled(
              n * kPi, RandomVectorModel::mixture(std::move(parts),
                                                  std::vector<double>(node.discs.size(), 1.0 / n)));
        } else if constexpr (std::is_same_v<T, Body::Sum>) {
          const double n = static_cast<double>(node.terms.size());
          std::vector<RandomVectorModel> parts;
          for (const auto& t : node.terms) parts.push_back(zonoid_model(t));
          return RandomVectorModel::scaled(
              n, RandomVectorModel::mixture(std::move(parts),
                                            std::vector<double>(node.terms.size(), 1.0 / n)));
        } else if constexpr (std::is_same_v<T, Body::Scaled>) {
          return RandomVectorModel::scaled(node.lambda, zonoid_model(Body(node.inner)));
        } else if constexpr (std::is_same_v<T, Body::LinearImage>) {
          return RandomVectorModel::linear(node.matrix, zonoid_model(Body(node.inner)));
        } else {
          throw MethodError("no random-vector model for a " + body.type_name() + " body");
        }
      },
      body.variant());
}

Vec f_pi(const ProjectionSplit& split, const std::vector<Vec>& points) {
  const int n = split.n();
  if (static_cast<int>(points.size()) != n + 1)
    throw ArityError("F_pi takes " + std::to_string(n + 1) + " points, got " +
                     std::to_string(points.size()));
  Mat xs(n, n + 1);
  Mat ys(split.m(), n + 1);
  for (int i = 0; i <= n; ++i) {
    if (points[i].size() != split.ambient()) throw DimensionError("point outside the ambient space");
    xs.col(i) = split.v_part(points[i]);
    ys.col(i) = split.w_part(points[i]);
  }
  Vec out = Vec::Zero(split.m());
  Mat minor(n, n);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0, c = 0; j <= n; ++j)
      if (j != i) minor.col(c++) = xs.col(j);
    double det;
    if (n == 1) det = minor(0, 0);
    else if (n == 2) det = minor(0, 0) * minor(1, 1) - minor(0, 1) * minor(1, 0);
    else det = minor.determinant();
    // (-1)^{n+1-i} with 1-based i, i.e. (-1)^{n-i} here
    const double sign = ((n - i) % 2 == 0) ? 1.0 : -1.0;
    out += sign * det * ys.col(i);
  }
  return out / factorial(n + 1);
}

std::vector<Vec> fiber_zonotope(const std::vector<Vec>& gens, const ProjectionSplit& split) {
  const int n = split.n();
  std::vector<Vec> out;
  const double fact = factorial(n + 1);
  for_each_subset(static_cast<int>(gens.size()), n + 1, [&](const std::vector<int>& idx) {
    std::vector<Vec> pts;
    double scale = 1.0;
    for (int i : idx) {
      pts.push_back(gens[i]);
      scale *= gens[i].norm();
    }
    Vec g = fact * f_pi(split, pts);
    if (g.norm() > 1e-14 * scale) out.push_back(std::move(g));
  });
  return out;
}

double zonotope_support(const std::vector<Vec>& gens, const Vec& u) {
  double s = 0.0;
  for (const auto& g : gens) {
    if (g.size() != u.size()) throw DimensionError("generator and direction dimensions differ");
    s += std::abs(g.dot(u));
  }
  return 0.5 * s;
}

double zonotope_volume(const std::vector<Vec>& gens) {
  if (gens.empty()) return 0.0;
  const int d = static_cast<int>(gens.front().size());
  double vol = 0.0;
  Mat m(d, d);
  for_each_subset(static_cast<int>(gens.size()), d, [&](const std::vector<int>& idx) {
    for (int c = 0; c < d; ++c) m.col(c) = gens[idx[c]];
    vol += std::abs(m.determinant());
  });
  return vol;
}

double shadow_fiber_support(const std::vector<Vec>& gens, const ProjectionSplit& split, const Vec& u) {
  if (u.size() != split.m()) throw DimensionError("direction must live in W");
  std::vector<Vec> mapped;
  mapped.reserve(gens.size());
  for (const auto& z : gens) {
    Vec t(split.n() + 1);
    t.head(split.n()) = split.v_part(z);
    t(split.n()) = u.dot(split.w_part(z));
    mapped.push_back(std::move(t));
  }
  return 0.5 * zonotope_volume(mapped);
}

namespace {

struct Moments {
  long count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++count;
    double d = x - mean;
    mean += d / count;
    m2 += d * (x - mean);
  }
  void merge(const Moments& o) {
    if (o.count == 0) return;
    long n = count + o.count;
    double d = o.mean - mean;
    mean += d * o.count / n;
    m2 += o.m2 + d * d * static_cast<double>(count) * o.count / n;
    count = n;
  }
};

std::vector<McEstimate> mc_core(const std::vector<const RandomVectorModel*>& slots,
                                const ProjectionSplit& split, const std::vector<Vec>& directions,
                                long samples, std::uint64_t seed, int workers) {
  if (samples < 100) throw DomainError("Monte-Carlo needs at least 100 samples");
  for (const auto* m : slots)
    if (m->dim() != split.ambient()) throw DimensionError("model dimension does not match split");
  for (const auto& u : directions)
    if (u.size() != split.m()) throw DimensionError("direction must live in W");

  const unsigned w = workers > 0 ? static_cast<unsigned>(workers) : kDefaultWorkers;
  const std::size_t k = directions.size();
  std::vector<std::vector<Moments>> partial(w, std::vector<Moments>(k));

  parallel_for(w, [&](std::size_t worker) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(worker)};
    std::mt19937_64 rng(seq);
    const long share = samples / w + (static_cast<long>(worker) < samples % w ? 1 : 0);
    std::vector<Vec> pts(slots.size());
    auto& acc = partial[worker];
    for (long s = 0; s < share; ++s) {
      for (std::size_t i = 0; i < slots.size(); ++i) pts[i] = slots[i]->sample(rng);
      Vec y = f_pi(split, pts);
      for (std::size_t d = 0; d < k; ++d) acc[d].add(0.5 * std::abs(directions[d].dot(y)));
    }
  }, w);

  std::vector<McEstimate> out(k);
  for (std::size_t d = 0; d < k; ++d) {
    Moments total;
    for (unsigned i = 0; i < w; ++i) total.merge(partial[i][d]);
    out[d].value = total.mean;
    out[d].samples = total.count;
    out[d].std_error = total.count > 1 ? std::sqrt(total.m2 / (total.count - 1) / total.count) : 0.0;
  }
  return out;
}

}  // namespace

std::vector<McEstimate> fiber_zonoid_mc_batch(const RandomVectorModel& model, const ProjectionSplit& split,
                                              const std::vector<Vec>& directions, long samples,
                                              std::uint64_t seed, int workers) {
  std::vector<const RandomVectorModel*> slots(split.n() + 1, &model);
  return mc_core(slots, split, directions, samples, seed, workers);
}

McEstimate fiber_zonoid_mc(const RandomVectorModel& model, const ProjectionSplit& split, const Vec& u,
                           long samples, std::uint64_t seed, int workers) {
  return fiber_zonoid_mc_batch(model, split, {u}, samples, seed, workers).front();
}

std::vector<McEstimate> mixed_fiber_mc_batch(const std::vector<RandomVectorModel>& models,
                                             const ProjectionSplit& split, const std::vector<Vec>& directions,
                                             long samples, std::uint64_t seed, int workers) {
  if (static_cast<int>(models.size()) != split.n() + 1)
    throw ArityError("mixed fiber body takes " + std::to_string(split.n() + 1) + " bodies, got " +
                     std::to_string(models.size()));
  std::vector<const RandomVectorModel*> slots;
  for (const auto& m : models) slots.push_back(&m);
  return mc_core(slots, split, directions, samples, seed, workers);
}

McEstimate mixed_fiber_mc(const std::vector<RandomVectorModel>& models, const ProjectionSplit& split,
                          const Vec& u, long samples, std::uint64_t seed, int workers) {
  return mixed_fiber_mc_batch(models, split, {u}, samples, seed, workers).front();
}

double elliptic_E(double k) {
  if (!(k >= 0.0 && k <= 1.0)) throw DomainError("elliptic modulus must lie in [0,1]");
  if (k == 1.0) return 1.0;
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k)), c = k;
  double sum = 0.5 * c * c;  // 2^{-1} c_0^2
  double pow2 = 0.5;
  for (int i = 0; i < 64 && std::abs(c) > 1e-16 * a; ++i) {
    double an = 0.5 * (a + b);
    c = 0.5 * (a - b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  return kPi / (2.0 * a) * (1.0 - sum);
}

double lambda_support(double u2, double u3) {
  if (u2 == 0.0 && u3 == 0.0) return 0.0;
  const double p = u2 * u2, q = u3 * u3;
  return integrate_adaptive(
      [&](double t) {
        double c = std::cos(t), s = std::sin(t);
        return std::sqrt(c * c * p + s * s * q);
      },
      0.0, kPi / 2);
}

double lambda_support_elliptic(double u2, double u3) {
  if (u2 == 0.0 || std::abs(u3) > std::abs(u2))
    throw DomainError("elliptic form needs u2 != 0 and |u3| <= |u2|");
  const double r = u3 / u2;
  return std::abs(u2) * elliptic_E(std::sqrt(std::max(0.0, 1.0 - r * r)));
}

double dice_fiber_closed(const Vec& u) {
  if (u.size() != 2) throw DimensionError("dice fiber direction lives in R^2");
  return 4.0 * u.norm() + kPi / 2 * (std::abs(u(0)) + std::abs(u(1))) + 2.0 * lambda_support(u(0), u(1));
}

double dice_fiber_printed(const Vec& u) {
  if (u.size() != 2) throw DimensionError("dice fiber direction lives in R^2");
  return u.norm() + kPi / 8 * (std::abs(u(0)) + std::abs(u(1))) + 0.5 * lambda_support(u(0), u(1));
}

DiscotopeBoundary discotope_boundary(const std::vector<Vec>& axes) {
  if (axes.empty()) throw InvalidDiscotopeError("discotope needs at least one axis");
  Body body = [&] {
    try {
      return Body::discotope(axes);
    } catch (const ValidationError& e) {
      throw InvalidDiscotopeError(e.what());
    }
  }();
  const auto& discs = std::get<Body::Discotope>(body.variant()).discs;

  DiscotopeBoundary out;
  for (std::size_t i = 0; i < discs.size(); ++i) {
    Vec q = Vec::Zero(3);
    for (std::size_t j = 0; j < discs.size(); ++j) {
      if (j == i) continue;
      const auto& d = discs[j];
      const double pa = axes[i].dot(d.a), pb = axes[i].dot(d.b);
      q += d.axis.norm() * (pa * d.a + pb * d.b) / std::hypot(pa, pb);
    }
    out.discs.push_back({axes[i], q});
    out.discs.push_back({axes[i], -q});
  }
  if (discs.size() == 1) {
    out.degenerate = true;
    out.component_count = 2;
    return out;
  }
  Mat m(3, static_cast<int>(axes.size()));
  for (std::size_t i = 0; i < axes.size(); ++i) m.col(i) = axes[i] / axes[i].norm();
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-12);
  out.component_count = lu.rank() <= 2 ? 2 : 1;
  return out;
}

}  // namespace fiber
