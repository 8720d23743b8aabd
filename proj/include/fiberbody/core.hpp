#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace fiber {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. Every error thrown by the library derives from Error so
// the CLI can map them onto exit codes in one place.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define FIBER_DEFINE_ERROR(Name) \
  struct Name : Error {          \
    using Error::Error;          \
  }

FIBER_DEFINE_ERROR(DimensionError);
FIBER_DEFINE_ERROR(DomainError);
FIBER_DEFINE_ERROR(EmptySliceError);
FIBER_DEFINE_ERROR(UnsupportedDimensionError);
FIBER_DEFINE_ERROR(NotCurvedError);
FIBER_DEFINE_ERROR(ArityError);
FIBER_DEFINE_ERROR(InvalidDiscotopeError);
FIBER_DEFINE_ERROR(UnboundedRayError);
FIBER_DEFINE_ERROR(InvalidPolytopeError);
FIBER_DEFINE_ERROR(ValidationError);
FIBER_DEFINE_ERROR(MethodError);
FIBER_DEFINE_ERROR(InputError);
FIBER_DEFINE_ERROR(GeometryError);

#undef FIBER_DEFINE_ERROR

// Schema or syntax problem in a body description file.
struct ParseError : Error {
  ParseError(const std::string& what, int line, std::string field)
      : Error(line > 0 ? what + " (line " + std::to_string(line) + ")" : what), line(line), field(std::move(field)) {}
  int line;           // 0 when unknown
  std::string field;  // JSON pointer of the offending field, may be empty
};

inline constexpr double kPi = 3.14159265358979323846;

inline Vec make_vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Vec unit(Eigen::Index dim, Eigen::Index axis) {
  Vec v = Vec::Zero(dim);
  v[axis] = 1.0;
  return v;
}

}  // namespace fiber
