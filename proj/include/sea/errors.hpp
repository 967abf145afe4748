#pragma once

#include <stdexcept>
#include <string>

namespace sea {

// Bad input: parameters out of range, malformed configuration, unmet
// preconditions that the caller controls.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The math failed: root finding did not converge, a factorization does not
// exist, a linear system is singular, or a simulation diverged.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sea
