#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pardiv {

enum class Violation {
  NonPositiveLambda,
  NonPositivePremium,
  NegativeSigma,
  NonPositiveDiscount,
  RNotInUnitInterval,
  NegativeDelay,
  NegativeLoading,
  InvalidClaimDistribution,
  ClaimMassDefect,
  ClaimTailTooHeavy,
};

std::string_view to_string(Violation v);

/// Thrown when model parameters or the claim distribution fail validation.
class ModelError : public std::invalid_argument {
 public:
  ModelError(Violation v, const std::string& detail);
  Violation violation() const noexcept { return violation_; }

 private:
  Violation violation_;
};

/// Grid mismatch, bad step or evaluation outside a grid.
class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iteration or series did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_norm)
      : std::runtime_error(what), last_norm_(last_norm) {}
  double last_norm() const noexcept { return last_norm_; }

 private:
  double last_norm_;
};

/// Raised when a density is requested for an event that carries an atom.
class AtomNotDensity : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pardiv
