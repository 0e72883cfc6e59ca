#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace specopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A precondition on the input value was violated (off-manifold point,
/// unsorted spectrum, infeasible start, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A factorization or iterative inner solver failed to produce a usable result.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Constraint gradients are linearly dependent on the tangent space.
class LicqError : public NumericError {
 public:
  LicqError(const std::string& what, std::vector<int> offending)
      : NumericError(what), offending_(std::move(offending)) {}

  const std::vector<int>& offending() const noexcept { return offending_; }

 private:
  std::vector<int> offending_;
};

}  // namespace specopt
