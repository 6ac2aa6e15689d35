#pragma once

#include <stdexcept>
#include <string>

namespace slinv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (x outside [0,1], s <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A caller violated an operation's precondition (wrong problem kind, too few samples, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Propagation produced non-finite values.
class NumericOverflowError : public Error {
 public:
  NumericOverflowError(const std::string& what, double lambda)
      : Error(what), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 private:
  double lambda_;
};

/// Least-squares design matrix is too ill-conditioned to trust.
class ConditioningError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or record.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace slinv
