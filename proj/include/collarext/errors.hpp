#pragma once

#include <stdexcept>
#include <string>

namespace collarext {

// Base for every error the library throws. Callers that only need a
// message can catch this; the CLI maps subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite-difference stencil would leave the chart box.
class ClearanceError : public Error {
 public:
  using Error::Error;
};

// Metric components are not positive definite at the evaluation point.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

// |X ^ Y|^2 below plane_tol.
class DegeneratePlaneError : public Error {
 public:
  using Error::Error;
};

class DomainMismatchError : public Error {
 public:
  using Error::Error;
};

// Bad arguments or configuration supplied by the caller.
class UsageError : public Error {
 public:
  using Error::Error;
};

// Non-finite or otherwise unusable input data.
class InputError : public Error {
 public:
  using Error::Error;
};

// A construction's precondition was violated at a sampled location.
class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, double where)
      : Error(what), where_(where) {}
  double where() const { return where_; }

 private:
  double where_;
};

// A doubling parameter search hit its cap. `worst` is the best value of the
// target quantity reached during the search.
class SearchFailure : public Error {
 public:
  SearchFailure(const std::string& what, double worst)
      : Error(what), worst_(worst) {}
  double worst() const { return worst_; }

 private:
  double worst_;
};

}  // namespace collarext
