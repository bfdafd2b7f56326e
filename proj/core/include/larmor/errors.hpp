#pragma once

#include <stdexcept>
#include <string>

namespace larmor {

// Invalid input values (non-finite, out of range, malformed config).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Barrier channel closed: E <= mu B. Carries the interior decay constant
// kappa = sqrt(2m(muB - E))/hbar so callers can continue analytically.
class EvanescentError : public std::runtime_error {
 public:
  EvanescentError(const std::string& msg, double kappa_per_m)
      : std::runtime_error(msg), kappa(kappa_per_m) {}
  double kappa;  // 1/m
};

// Normalized detection probability requested for a spinor with zero weight.
class DegenerateSpinorError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace larmor
