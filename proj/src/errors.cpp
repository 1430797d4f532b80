#include "pardiv/errors.hpp"

namespace pardiv {

std::string_view to_string(Violation v) {
  switch (v) {
    case Violation::NonPositiveLambda: return "NonPositiveLambda";
    case Violation::NonPositivePremium: return "NonPositivePremium";
    case Violation::NegativeSigma: return "NegativeSigma";
    case Violation::NonPositiveDiscount: return "NonPositiveDiscount";
    case Violation::RNotInUnitInterval: return "RNotInUnitInterval";
    case Violation::NegativeDelay: return "NegativeDelay";
    case Violation::NegativeLoading: return "NegativeLoading";
    case Violation::InvalidClaimDistribution: return "InvalidClaimDistribution";
    case Violation::ClaimMassDefect: return "ClaimMassDefect";
    case Violation::ClaimTailTooHeavy: return "ClaimTailTooHeavy";
  }
  return "Unknown";
}

ModelError::ModelError(Violation v, const std::string& detail)
    : std::invalid_argument(std::string(to_string(v)) + ": " + detail), violation_(v) {}

}  // namespace pardiv
