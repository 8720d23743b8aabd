#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fiberbody/core.hpp"
#include "fiberbody/puffed.hpp"

namespace fiber {

struct BodyNode;

/// Immutable description tree of a centered convex body. Copies share the
/// tree; evaluation is a pure recursion over it.
class Body {
 public:
  struct Polytope {
    std::vector<Vec> vertices;
  };
  /// Sum of centered segments [-z/2, z/2].
  struct Zonotope {
    std::vector<Vec> generators;
  };
  /// Disc in axis^perp of radius |axis|, with a fixed in-plane frame (a, b).
  struct Disc {
    Vec axis;
    Vec a;
    Vec b;
  };
  struct Discotope {
    std::vector<Disc> discs;
  };
  struct Schneider {
    double alpha;
  };
  struct Elliptope {};
  struct Puffed {
    FacetSystem facets;
    int boundary_samples;
  };
  struct Ball {
    double radius;
    int dim;
  };
  struct Sum {
    std::vector<Body> terms;
  };
  struct Scaled {
    double lambda;
    std::shared_ptr<const BodyNode> inner;
  };
  struct LinearImage {
    Mat matrix;
    std::shared_ptr<const BodyNode> inner;
  };

  using Variant = std::variant<Polytope, Zonotope, Disc, Discotope, Schneider, Elliptope,
                               Puffed, Ball, Sum, Scaled, LinearImage>;

  static Body polytope(std::vector<Vec> vertices);
  static Body zonotope(std::vector<Vec> generators);
  static Body disc(const Vec& axis);
  static Body discotope(const std::vector<Vec>& axes);
  static Body schneider(double alpha);
  static Body elliptope();
  static Body puffed(FacetSystem facets, int boundary_samples = 2000);
  static Body ball(double radius, int dim);
  static Body sum(std::vector<Body> terms);
  static Body scaled(double lambda, const Body& inner);
  static Body linear_image(const Mat& matrix, const Body& inner);

  /// The unit dice D_{e1} + D_{e2} + D_{e3}.
  static Body dice();
  /// [-1,1]^3 as the zonotope with generators 2 e_i.
  static Body cube();
  /// conv{(1,1,1), (1,-1,-1), (-1,1,-1), (-1,-1,1)}.
  static Body tetrahedron();

  int dim() const;
  const Variant& variant() const;
  /// Short type name as used in body files ("zonotope", "sum", ...).
  std::string type_name() const;

  explicit Body(std::shared_ptr<const BodyNode> node) : node_(std::move(node)) {}
  const std::shared_ptr<const BodyNode>& node() const { return node_; }

 private:
  std::shared_ptr<const BodyNode> node_;
};

struct BodyNode {
  Body::Variant payload;
  int dim;
};

/// Orthogonal splitting R^{n+m} = V + W. Columns of basis_v / basis_w are
/// orthonormal and together form a basis of R^{n+m}.
class ProjectionSplit {
 public:
  ProjectionSplit(Mat basis_v, Mat basis_w);
  /// V = first n coordinates, W = last m coordinates.
  static ProjectionSplit coordinate(int n, int m);

  int n() const { return static_cast<int>(basis_v_.cols()); }
  int m() const { return static_cast<int>(basis_w_.cols()); }
  int ambient() const { return n() + m(); }
  const Mat& basis_v() const { return basis_v_; }
  const Mat& basis_w() const { return basis_w_; }
  bool is_coordinate() const;

  Vec v_part(const Vec& p) const { return basis_v_.transpose() * p; }
  Vec w_part(const Vec& p) const { return basis_w_.transpose() * p; }
  Vec embed(const Vec& x_v, const Vec& y_w) const { return basis_v_ * x_v + basis_w_ * y_w; }

 private:
  Mat basis_v_;
  Mat basis_w_;
};

using SupportFn = std::function<double(const Vec&)>;

/// h_K(u) = max <u, x> over K.
double support(const Body& body, const Vec& u);

/// Central-difference gradient with step h * |u|. Equals the exposed point
/// where h_K is differentiable.
Vec support_gradient(const Body& body, const Vec& u, double h = 1e-6);

/// Analytic gradient where the body tree has one at every node (polytopes and
/// zonotopes return a maximizing vertex at kinks); nullopt otherwise.
std::optional<Vec> exact_gradient(const Body& body, const Vec& u);

/// lim_{t->0+} (h(u + t w) - h(u)) / t, i.e. the support function of the face
/// K^u at w. Richardson extrapolation of the one-sided quotients at steps t
/// and t/2, with t = rel_step * |u| / |w|.
double one_sided_derivative(const SupportFn& h, const Vec& u, const Vec& w,
                            double rel_step = 1e-6);
double one_sided_derivative(const Body& body, const Vec& u, const Vec& w,
                            double rel_step = 1e-6);

/// Support of pi(K) at w given in V-coordinates.
double project_support(const Body& body, const ProjectionSplit& split, const Vec& w);

/// Support of the elliptope {x^2+y^2+z^2-2xyz <= 1} within [-1,1]^3, in
/// closed form: max over c in [-1,1] of u1 c + sqrt(u2^2 + u3^2 + 2 u2 u3 c).
double elliptope_support(const Vec& u);

}  // namespace fiber
