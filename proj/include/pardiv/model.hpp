#pragma once

#include <limits>
#include <memory>
#include <vector>

#include "pardiv/gridmath.hpp"

namespace pardiv {

/// Delay value meaning "no Parisian ruin" (classical time-to-ruin never triggers).
inline constexpr double kNoRuin = std::numeric_limits<double>::infinity();

/// Claim-size law on [0, inf): exponential or a tabulated density on a uniform grid.
class ClaimDistribution {
 public:
  enum class Kind { Exponential, Tabulated };

  static ClaimDistribution exponential(double mu);
  /// density[i] is f(i * step); f is zero beyond the last node.
  static ClaimDistribution tabulated(double step, std::vector<double> density);

  Kind kind() const { return kind_; }
  double rate() const { return mu_; }  // exponential only
  double tabulation_step() const { return step_; }
  const std::vector<double>& table() const { return table_.values(); }

  double density(double x) const;
  double cdf(double x) const;
  /// Laplace transform int e^{-s x} f(x) dx.
  double laplace(double s) const;
  /// d/ds of the Laplace transform.
  double laplace_derivative(double s) const;
  double mean() const;
  /// n-fold convolution power f^{n*}(x), n >= 1.
  double conv_power(int n, double x) const;
  /// Right end of the support used numerically (tail mass beyond it is negligible).
  double support_max() const;

  /// Mass int f and tail mass estimate used by validation.
  double total_mass() const;

 private:
  Kind kind_ = Kind::Exponential;
  double mu_ = 1.0;
  double step_ = 0.0;
  GridFunction table_;
  GridFunction cumulative_;
};

struct ModelParams {
  double lambda = 10.0;
  double c = 15.0;
  double sigma = 0.0;
  double q = 0.1;
  double r = 0.8;
  double d = 0.0;
};

/// Parameters and claim law that passed validation; immutable.
class ValidatedModel {
 public:
  const ModelParams& params() const { return params_; }
  const ClaimDistribution& claims() const { return *claims_; }
  double lambda() const { return params_.lambda; }
  double c() const { return params_.c; }
  double sigma() const { return params_.sigma; }
  double q() const { return params_.q; }
  double r() const { return params_.r; }
  double d() const { return params_.d; }
  bool no_ruin() const { return params_.d == kNoRuin; }
  /// Safety loading theta = c / (lambda E[C]) - 1.
  double loading() const { return loading_; }

  /// Same model with another delay d.
  ValidatedModel with_delay(double d) const;

 private:
  friend ValidatedModel validate(const ModelParams&, const ClaimDistribution&);
  ModelParams params_;
  double loading_ = 0.0;
  std::shared_ptr<const ClaimDistribution> claims_;
};

/// Throws ModelError naming the first violated constraint.
ValidatedModel validate(const ModelParams& params, const ClaimDistribution& claims);

/// Erlang density mu^n x^{n-1} e^{-mu x} / (n-1)!; n >= 1, x >= 0.
double exp_conv_power(double mu, int n, double x);

/// Parameters used in the worked example of the model (exponential claims, mu = 1).
ModelParams reference_params(double d);

}  // namespace pardiv
