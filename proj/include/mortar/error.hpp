#pragma once

#include <stdexcept>
#include <string>

namespace mortar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid run parameters (dimensions, orders, block shapes, over-constrained trace spaces).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class TopologyError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Matrix data violating a precondition (e.g. non-positive diagonal, Cholesky failure).
class DataError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A local saddle-point matrix could not be factored.
class SingularElementError : public Error {
 public:
  SingularElementError(int element, const std::string& what)
      : Error(what), element_(element) {}
  [[nodiscard]] int element() const { return element_; }

 private:
  int element_;
};

/// Raised by PCG on non-positive curvature or a negative preconditioned residual norm.
class IndefiniteOperatorError : public Error {
 public:
  using Error::Error;
};

}  // namespace mortar
