#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "fiberbody/body.hpp"

namespace fiber {

/// A bounded random vector X; its Vitale zonoid K0(X) has h(u) = E|<u,X>| / 2.
class RandomVectorModel {
 public:
  enum class Kind { Discrete, DiscUniform, Mixture, Scaled, Linear };

  static RandomVectorModel discrete(std::vector<Vec> atoms, std::vector<double> weights);
  /// sigma(theta) = |v| (cos theta a + sin theta b), theta uniform; (a, b) is the
  /// frame Body::disc builds for v.
  static RandomVectorModel disc_uniform(const Vec& axis);
  static RandomVectorModel mixture(std::vector<RandomVectorModel> models, std::vector<double> weights);
  static RandomVectorModel scaled(double c, RandomVectorModel model);
  /// M X, so K0(M X) = M K0(X).
  static RandomVectorModel linear(const Mat& matrix, RandomVectorModel model);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }

  Vec sample(std::mt19937_64& rng) const;
  /// Exact support of K0(X).
  double support(const Vec& u) const;

 private:
  Kind kind_ = Kind::Discrete;
  int dim_ = 0;
  std::vector<Vec> atoms_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
  Vec a_, b_;  // disc frame scaled by |v|
  std::vector<RandomVectorModel> parts_;
  double scale_ = 1.0;
  Mat matrix_;

  std::size_t pick(std::mt19937_64& rng) const;
};

/// Model whose Vitale zonoid is the body: zonotopes, discs, discotopes,
/// their sums and scalings. Anything else throws MethodError.
RandomVectorModel zonoid_model(const Body& body);

/// The skew multilinear map F_pi on n+1 points of V (+) W.
Vec f_pi(const ProjectionSplit& split, const std::vector<Vec>& points);

/// Generators (n+1)! F_pi(z_I) of the fiber zonotope, one per (n+1)-subset.
std::vector<Vec> fiber_zonotope(const std::vector<Vec>& gens, const ProjectionSplit& split);

double zonotope_support(const std::vector<Vec>& gens, const Vec& u);
double zonotope_volume(const std::vector<Vec>& gens);

/// Half the volume of T_u(K), T_u = Id_V (+) <u, .>.
double shadow_fiber_support(const std::vector<Vec>& gens, const ProjectionSplit& split, const Vec& u);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

/// E|<u, F_pi(X_1..X_{n+1})>| / 2 with independent copies. Samples are split
/// over workers with seeds (seed, worker); the reduction order is fixed.
McEstimate fiber_zonoid_mc(const RandomVectorModel& model, const ProjectionSplit& split, const Vec& u,
                           long samples, std::uint64_t seed, int workers = 0);

/// Same draws shared by every direction.
std::vector<McEstimate> fiber_zonoid_mc_batch(const RandomVectorModel& model, const ProjectionSplit& split,
                                              const std::vector<Vec>& directions, long samples,
                                              std::uint64_t seed, int workers = 0);

/// One draw from each model per sample (n+1 models).
McEstimate mixed_fiber_mc(const std::vector<RandomVectorModel>& models, const ProjectionSplit& split,
                          const Vec& u, long samples, std::uint64_t seed, int workers = 0);

std::vector<McEstimate> mixed_fiber_mc_batch(const std::vector<RandomVectorModel>& models,
                                             const ProjectionSplit& split, const std::vector<Vec>& directions,
                                             long samples, std::uint64_t seed, int workers = 0);

/// Complete elliptic integral of the second kind, modulus k, by AGM.
double elliptic_E(double k);

/// h_Lambda(u2,u3) = int_0^{pi/2} sqrt(cos^2 u2^2 + sin^2 u3^2) dtheta.
double lambda_support(double u2, double u3);
/// |u2| E(sqrt(1 - (u3/u2)^2)); needs |u3| <= |u2|, u2 != 0.
double lambda_support_elliptic(double u2, double u3);

/// Fiber body of the dice D_e1 + D_e2 + D_e3 under x -> x1:
///   4|u| + (pi/2)(|u2| + |u3|) + 2 h_Lambda(u).
double dice_fiber_closed(const Vec& u);
/// |u| + (pi/8)(|u2| + |u3|) + h_Lambda(u)/2, the short form that drops the
/// disc normalisation; a quarter of the value above.
double dice_fiber_printed(const Vec& u);

struct BoundaryDisc {
  Vec axis;
  Vec center;
};

struct DiscotopeBoundary {
  std::vector<BoundaryDisc> discs;  // q_1^+, q_1^-, q_2^+, ...
  int component_count = 1;
  bool degenerate = false;  // single disc: flat body
};

DiscotopeBoundary discotope_boundary(const std::vector<Vec>& axes);

}  // namespace fiber
