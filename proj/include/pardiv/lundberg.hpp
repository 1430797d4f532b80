#pragma once

#include "pardiv/model.hpp"

namespace pardiv {

/// Claim-count-discounted Laplace exponent sigma^2 a^2 / 2 + c a - lambda + lambda r fhat(a).
double psi_r(const ValidatedModel& model, double alpha);

struct LundbergRoot {
  double rho = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// Unique positive root of psi_r(s) = q.
LundbergRoot lundberg_root(const ValidatedModel& model);

/// Right-inverse of psi_r evaluated at q (same as lundberg_root(model).rho).
double phi_r_of_q(const ValidatedModel& model);

}  // namespace pardiv
