#pragma once

#include <stdexcept>
#include <string>

namespace decaylab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested resolution, table size or window cannot support the computation.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Dimension outside the set the operation was built for.
class UnsupportedDimension : public Error {
 public:
  explicit UnsupportedDimension(int d)
      : Error("unsupported dimension d=" + std::to_string(d)), dimension_(d) {}
  int dimension() const noexcept { return dimension_; }

 private:
  int dimension_;
};

/// An integrand or evaluator produced a non-finite value.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, double where)
      : Error(what + " at r=" + std::to_string(where)), where_(where) {}
  double where() const noexcept { return where_; }

 private:
  double where_;
};

/// A configuration object violates its own invariants.
class SpecError : public Error {
 public:
  using Error::Error;
};

}  // namespace decaylab
