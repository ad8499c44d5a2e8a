#pragma once

#include <stdexcept>
#include <string>

namespace fcoord {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the operation's domain (bad grid, length mismatch, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A derivative or stencil order the implementation does not provide.
class UnsupportedOrderError : public Error {
 public:
  using Error::Error;
};

/// A kernel or coefficient produced a non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

/// Regularized inversion left nothing to invert.
class SingularTransformError : public Error {
 public:
  using Error::Error;
};

class MetricDegeneracyError : public Error {
 public:
  using Error::Error;
};

/// The Riccati integration for a tabulated kernel blew up.
class RiccatiSingularityError : public Error {
 public:
  RiccatiSingularityError(const std::string& what, double x, double y)
      : Error(what), x_(x), y_(y) {}
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  double x_;
  double y_;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// The supplied pair (u, v) does not satisfy L u = v.
class NotASolutionError : public Error {
 public:
  using Error::Error;
};

/// Reading or writing a file failed.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcoord
