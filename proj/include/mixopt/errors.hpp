#pragma once

#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace mixopt {

// Base of every error raised by the library. The CLI maps the concrete type
// onto a report status and an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation (negative root
// argument, epsilon outside (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Caller broke a structural precondition (dimension mismatch, non-square
// matrix, non-integral coefficients where integers are required, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnboundedError : public Error {
 public:
  using Error::Error;
};

// A value that must be non-negative on the feasible set was observed negative.
class NegativeObjectiveError : public Error {
 public:
  using Error::Error;
};

// The certified grid is too large to enumerate with the current backend.
class RefusedSizeError : public Error {
 public:
  RefusedSizeError(mpz_class m, mpz_class estimate)
      : Error("grid with m = " + m.get_str() + " would contain about " +
              estimate.get_str() + " points"),
        m_(std::move(m)),
        estimate_(std::move(estimate)) {}

  const mpz_class& m() const { return m_; }
  const mpz_class& estimate() const { return estimate_; }

 private:
  mpz_class m_;
  mpz_class estimate_;
};

}  // namespace mixopt
