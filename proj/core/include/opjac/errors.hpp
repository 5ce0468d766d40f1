#pragma once

#include <stdexcept>
#include <string>

namespace opjac {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incompatible matrix/vector dimensions, or index out of range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A linear system whose matrix is singular to working precision.
/// `where` is the offending pivot (dense path) or -1 when the sparse
/// factorization only reports a message.
class SingularMatrixError : public Error {
 public:
  SingularMatrixError(const std::string& msg, long where)
      : Error(msg), where_(where) {}
  long where() const { return where_; }

 private:
  long where_;
};

/// Component-wise function evaluated outside its domain (log/sqrt of a
/// non-positive value, non-positive surface concentration, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative solve that failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace opjac
