#pragma once

#include "pardiv/gridmath.hpp"
#include "pardiv/model.hpp"

namespace pardiv {

struct UpcrossTransform {
  double y = 0.0;
  double d = 0.0;
  double value = 0.0;
  int truncation_k = 0;
  double tail_bound = 0.0;
};

/// Density in t of {first up-crossing of y at time t with k claims}, started from 0.
/// Throws AtomNotDensity for k = 0 when sigma = 0.
double vy_density(const ValidatedModel& model, double y, int k, double t);

/// E_0[r^N e^{-q tau_y}; tau_y < d]; d = kNoRuin gives e^{-rho y}.
UpcrossTransform upcross_transform(const ValidatedModel& model, double y, double d);

/// Smallest K with sum_{k>K} m^k / k! < tol, and that tail sum.
struct PoissonTail {
  int k = 0;
  double bound = 0.0;
};
PoissonTail poisson_tail_cutoff(double m, double tol = 1e-12, int k_cap = 5000);

/// Up-crossing transform z -> E_0[r^N e^{-q tau_z}; tau_z < d] tabulated on [0, z_end].
struct UpcrossCurve {
  GridFunction phi;
  int truncation_k = 0;
  double tail_bound = 0.0;
};

/// Horizon beyond which the time integrand is negligible (min of d and a decay cap).
double effective_horizon(const ValidatedModel& model);

/// Largest level at which the transform can be non-negligible (c d for sigma = 0).
double upcross_support(const ValidatedModel& model);

/// Curve at spacing `step` with O(step^2) error. For sigma = 0 the step must divide
/// c * effective_horizon. Requires finite d > 0.
UpcrossCurve upcross_curve_raw(const ValidatedModel& model, double z_max, double step,
                               int time_nodes = 256);

/// Step compatible with upcross_curve_raw at both `nominal` and nominal / 2.
double upcross_curve_step(const ValidatedModel& model, double nominal);

/// Richardson combination of raw curves at step / 2 and step; returned on the step grid.
UpcrossCurve upcross_curve(const ValidatedModel& model, double z_max, double step);

}  // namespace pardiv
