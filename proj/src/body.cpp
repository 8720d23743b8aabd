#include "fiberbody/body.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fiber {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Body make(Body::Variant payload, int dim) {
  return Body(std::make_shared<const BodyNode>(BodyNode{std::move(payload), dim}));
}

Body::Disc make_disc(const Vec& axis) {
  if (axis.size() != 3) throw DimensionError("disc axis must be a 3-vector");
  const double r = axis.norm();
  if (!(r > 0.0)) throw ValidationError("disc axis must be nonzero");
  const Vec n = axis / r;
  // pivot on the smallest coordinate of the axis, then Gram-Schmidt
  Eigen::Index pivot = 0;
  n.cwiseAbs().minCoeff(&pivot);
  Vec a = unit(3, pivot);
  a -= a.dot(n) * n;
  a /= a.norm();
  const Eigen::Vector3d b3 = Eigen::Vector3d(n).cross(Eigen::Vector3d(a));
  return {axis, a, Vec(b3)};
}

void require_dim(const Vec& v, int dim, const char* what) {
  if (v.size() != dim)
    throw DimensionError(std::string(what) + ": expected dimension " + std::to_string(dim) +
                         ", got " + std::to_string(v.size()));
}

}  // namespace

Body Body::polytope(std::vector<Vec> vertices) {
  if (vertices.empty()) throw ValidationError("polytope needs at least one vertex");
  const auto dim = vertices.front().size();
  for (const auto& v : vertices)
    if (v.size() != dim) throw ValidationError("polytope vertices differ in dimension");
  return make(Polytope{std::move(vertices)}, static_cast<int>(dim));
}

Body Body::zonotope(std::vector<Vec> generators) {
  if (generators.empty()) throw ValidationError("zonotope needs at least one generator");
  const auto dim = generators.front().size();
  for (const auto& z : generators) {
    if (z.size() != dim) throw ValidationError("zonotope generators differ in dimension");
    if (z.norm() == 0.0) throw ValidationError("zonotope generators must be nonzero");
  }
  return make(Zonotope{std::move(generators)}, static_cast<int>(dim));
}

Body Body::disc(const Vec& axis) { return make(make_disc(axis), 3); }

Body Body::discotope(const std::vector<Vec>& axes) {
  if (axes.empty()) throw ValidationError("discotope needs at least one axis");
  Discotope d;
  for (const auto& v : axes) d.discs.push_back(make_disc(v));
  for (std::size_t i = 0; i < axes.size(); ++i)
    for (std::size_t j = i + 1; j < axes.size(); ++j) {
      const Vec a = axes[i] / axes[i].norm();
      const Vec b = axes[j] / axes[j].norm();
      if ((a - b).norm() < 1e-12 || (a + b).norm() < 1e-12)
        throw ValidationError("discotope axes " + std::to_string(i) + " and " + std::to_string(j) +
                              " are parallel");
    }
  return make(std::move(d), 3);
}

Body Body::schneider(double alpha) {
  if (alpha < -8.0 / 20.0 - 1e-15 || alpha > -5.0 / 20.0 + 1e-15)
    throw ValidationError("schneider alpha must lie in [-8/20, -5/20]");
  return make(Schneider{alpha}, 3);
}

Body Body::elliptope() { return make(Elliptope{}, 3); }

Body Body::puffed(FacetSystem facets, int boundary_samples) {
  const int dim = facets.dim();
  return make(Puffed{std::move(facets), boundary_samples}, dim);
}

Body Body::ball(double radius, int dim) {
  if (!(radius >= 0.0)) throw ValidationError("ball radius must be nonnegative");
  if (dim < 1) throw ValidationError("ball dimension must be positive");
  return make(Ball{radius, dim}, dim);
}

Body Body::sum(std::vector<Body> terms) {
  if (terms.empty()) throw ValidationError("sum needs at least one term");
  const int dim = terms.front().dim();
  for (const auto& t : terms)
    if (t.dim() != dim) throw ValidationError("all terms of a sum must share one ambient dimension");
  return make(Sum{std::move(terms)}, dim);
}

Body Body::scaled(double lambda, const Body& inner) {
  if (!std::isfinite(lambda)) throw ValidationError("scale factor must be finite");
  return make(Scaled{lambda, inner.node()}, inner.dim());
}

Body Body::linear_image(const Mat& matrix, const Body& inner) {
  if (matrix.cols() != inner.dim())
    throw DimensionError("linear_image: matrix has " + std::to_string(matrix.cols()) +
                         " columns but the body lives in dimension " + std::to_string(inner.dim()));
  return make(LinearImage{matrix, inner.node()}, static_cast<int>(matrix.rows()));
}

Body Body::dice() { return discotope({unit(3, 0), unit(3, 1), unit(3, 2)}); }

Body Body::cube() { return zonotope({2.0 * unit(3, 0), 2.0 * unit(3, 1), 2.0 * unit(3, 2)}); }

Body Body::tetrahedron() {
  return polytope({make_vec({1, 1, 1}), make_vec({1, -1, -1}), make_vec({-1, 1, -1}),
                   make_vec({-1, -1, 1})});
}

int Body::dim() const { return node_->dim; }
const Body::Variant& Body::variant() const { return node_->payload; }

std::string Body::type_name() const {
  return std::visit(overloaded{
                        [](const Polytope&) { return "polytope"; },
                        [](const Zonotope&) { return "zonotope"; },
                        [](const Disc&) { return "disc"; },
                        [](const Discotope&) { return "discotope"; },
                        [](const Schneider&) { return "schneider"; },
                        [](const Elliptope&) { return "elliptope"; },
                        [](const Puffed&) { return "puffed"; },
                        [](const Ball&) { return "ball"; },
                        [](const Sum&) { return "sum"; },
                        [](const Scaled&) { return "scaled"; },
                        [](const LinearImage&) { return "linear_image"; },
                    },
                    variant());
}

// ---------------------------------------------------------------------------

ProjectionSplit::ProjectionSplit(Mat basis_v, Mat basis_w)
    : basis_v_(std::move(basis_v)), basis_w_(std::move(basis_w)) {
  if (basis_v_.cols() < 1 || basis_w_.cols() < 1)
    throw ValidationError("split needs n >= 1 and m >= 1");
  const auto d = basis_v_.rows();
  if (basis_w_.rows() != d || basis_v_.cols() + basis_w_.cols() != d)
    throw ValidationError("split bases must have n + m rows and n + m columns in total");
  Mat all(d, d);
  all << basis_v_, basis_w_;
  const double err = (all.transpose() * all - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
  if (err > 1e-12) throw ValidationError("split bases are not orthonormal");
}

ProjectionSplit ProjectionSplit::coordinate(int n, int m) {
  if (n < 1 || m < 1) throw ValidationError("split needs n >= 1 and m >= 1");
  const Mat id = Mat::Identity(n + m, n + m);
  return {id.leftCols(n), id.rightCols(m)};
}

bool ProjectionSplit::is_coordinate() const {
  const int d = ambient();
  const Mat id = Mat::Identity(d, d);
  return basis_v_ == id.leftCols(n()) && basis_w_ == id.rightCols(m());
}

// ---------------------------------------------------------------------------

double elliptope_support(const Vec& u) {
  require_dim(u, 3, "elliptope_support");
  const double A = u[1] * u[1] + u[2] * u[2];
  const double B = 2.0 * u[1] * u[2];
  auto f = [&](double c) { return u[0] * c + std::sqrt(std::max(0.0, A + B * c)); };
  double best = std::max(f(-1.0), f(1.0));
  // f is concave in c; its stationary point solves sqrt(A + Bc) = -B / (2 u1)
  if (u[0] != 0.0 && B != 0.0 && -B / u[0] >= 0.0) {
    const double root = -B / (2.0 * u[0]);
    const double c = (root * root - A) / B;
    if (c > -1.0 && c < 1.0) best = std::max(best, f(c));
  }
  return best;
}

namespace {

double support_node(const BodyNode& node, const Vec& u);

double disc_support(const Body::Disc& d, const Vec& u) {
  return d.axis.norm() * std::hypot(u.dot(d.a), u.dot(d.b));
}

Vec disc_gradient(const Body::Disc& d, const Vec& u) {
  const double pa = u.dot(d.a), pb = u.dot(d.b);
  const double r = std::hypot(pa, pb);
  if (r == 0.0) return Vec::Zero(3);
  return d.axis.norm() * (pa * d.a + pb * d.b) / r;
}

double schneider_support(double alpha, const Vec& u) {
  const double norm = u.norm();
  if (norm == 0.0) return 0.0;
  return norm * (1.0 + 0.5 * alpha * (3.0 * u[2] * u[2] / (norm * norm) - 1.0));
}

Vec schneider_gradient(double alpha, const Vec& u) {
  const double norm = u.norm();
  if (norm == 0.0) return Vec::Zero(3);
  // h = (1 - a/2)|u| + (3a/2) u3^2 / |u|
  Vec g = (1.0 - 0.5 * alpha) * u / norm - 1.5 * alpha * u[2] * u[2] * u / (norm * norm * norm);
  g[2] += 3.0 * alpha * u[2] / norm;
  return g;
}

double support_node(const BodyNode& node, const Vec& u) {
  return std::visit(
      overloaded{
          [&](const Body::Polytope& p) {
            double best = -std::numeric_limits<double>::infinity();
            for (const auto& v : p.vertices) best = std::max(best, u.dot(v));
            return best;
          },
          [&](const Body::Zonotope& z) {
            double s = 0.0;
            for (const auto& g : z.generators) s += std::abs(u.dot(g));
            return 0.5 * s;
          },
          [&](const Body::Disc& d) { return disc_support(d, u); },
          [&](const Body::Discotope& d) {
            double s = 0.0;
            for (const auto& disc : d.discs) s += disc_support(disc, u);
            return s;
          },
          [&](const Body::Schneider& s) { return schneider_support(s.alpha, u); },
          [&](const Body::Elliptope&) { return elliptope_support(u); },
          [&](const Body::Puffed& p) {
            if (u.norm() == 0.0) return 0.0;
            return puffed_support(p.facets, u, p.boundary_samples);
          },
          [&](const Body::Ball& b) { return b.radius * u.norm(); },
          [&](const Body::Sum& s) {
            double total = 0.0;
            for (const auto& t : s.terms) total += support_node(*t.node(), u);
            return total;
          },
          [&](const Body::Scaled& s) {
            if (s.lambda >= 0.0) return s.lambda * support_node(*s.inner, u);
            return -s.lambda * support_node(*s.inner, Vec(-u));
          },
          [&](const Body::LinearImage& l) {
            return support_node(*l.inner, Vec(l.matrix.transpose() * u));
          },
      },
      node.payload);
}

std::optional<Vec> gradient_node(const BodyNode& node, const Vec& u) {
  using R = std::optional<Vec>;
  return std::visit(
      overloaded{
          [&](const Body::Polytope& p) -> R {
            std::size_t arg = 0;
            for (std::size_t i = 1; i < p.vertices.size(); ++i)
              if (u.dot(p.vertices[i]) > u.dot(p.vertices[arg])) arg = i;
            return p.vertices[arg];
          },
          [&](const Body::Zonotope& z) -> R {
            Vec g = Vec::Zero(node.dim);
            for (const auto& gen : z.generators) {
              const double s = u.dot(gen);
              if (s > 0.0) g += 0.5 * gen;
              if (s < 0.0) g -= 0.5 * gen;
            }
            return g;
          },
          [&](const Body::Disc& d) -> R { return disc_gradient(d, u); },
          [&](const Body::Discotope& d) -> R {
            Vec g = Vec::Zero(3);
            for (const auto& disc : d.discs) g += disc_gradient(disc, u);
            return g;
          },
          [&](const Body::Schneider& s) -> R { return schneider_gradient(s.alpha, u); },
          [&](const Body::Elliptope&) -> R { return std::nullopt; },
          [&](const Body::Puffed&) -> R { return std::nullopt; },
          [&](const Body::Ball& b) -> R {
            const double n = u.norm();
            if (n == 0.0) return Vec::Zero(b.dim);
            return Vec(b.radius * u / n);
          },
          [&](const Body::Sum& s) -> R {
            Vec g = Vec::Zero(node.dim);
            for (const auto& t : s.terms) {
              auto part = gradient_node(*t.node(), u);
              if (!part) return std::nullopt;
              g += *part;
            }
            return g;
          },
          [&](const Body::Scaled& s) -> R {
            const Vec arg = s.lambda >= 0.0 ? u : Vec(-u);
            auto g = gradient_node(*s.inner, arg);
            if (!g) return std::nullopt;
            return Vec(s.lambda * *g);
          },
          [&](const Body::LinearImage& l) -> R {
            auto g = gradient_node(*l.inner, Vec(l.matrix.transpose() * u));
            if (!g) return std::nullopt;
            return Vec(l.matrix * *g);
          },
      },
      node.payload);
}

}  // namespace

double support(const Body& body, const Vec& u) {
  require_dim(u, body.dim(), "support");
  return support_node(*body.node(), u);
}

std::optional<Vec> exact_gradient(const Body& body, const Vec& u) {
  require_dim(u, body.dim(), "exact_gradient");
  return gradient_node(*body.node(), u);
}

Vec support_gradient(const Body& body, const Vec& u, double h) {
  require_dim(u, body.dim(), "support_gradient");
  const double step = h * u.norm();
  Vec g(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    Vec up = u, down = u;
    up[i] += step;
    down[i] -= step;
    g[i] = (support_node(*body.node(), up) - support_node(*body.node(), down)) / (2.0 * step);
  }
  return g;
}

double one_sided_derivative(const SupportFn& h, const Vec& u, const Vec& w, double rel_step) {
  const double wn = w.norm();
  if (wn == 0.0) return 0.0;
  const double t = rel_step * std::max(u.norm(), 1e-300) / wn;
  const double base = h(u);
  const double d1 = (h(Vec(u + t * w)) - base) / t;
  const double d2 = (h(Vec(u + 0.5 * t * w)) - base) / (0.5 * t);
  return 2.0 * d2 - d1;
}

double one_sided_derivative(const Body& body, const Vec& u, const Vec& w, double rel_step) {
  require_dim(u, body.dim(), "one_sided_derivative");
  require_dim(w, body.dim(), "one_sided_derivative");
  return one_sided_derivative([&](const Vec& v) { return support_node(*body.node(), v); }, u, w,
                              rel_step);
}

double project_support(const Body& body, const ProjectionSplit& split, const Vec& w) {
  if (body.dim() != split.ambient()) throw DimensionError("project_support: split does not match body");
  require_dim(w, split.n(), "project_support");
  return support_node(*body.node(), Vec(split.basis_v() * w));
}

}  // namespace fiber
