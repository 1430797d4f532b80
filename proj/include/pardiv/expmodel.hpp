#pragma once

#include "pardiv/model.hpp"

namespace pardiv {

/// Closed forms for exponential claims without diffusion.
struct ExpClosedForms {
  double mu = 0.0;
  double rho = 0.0;
  double u_d = 0.0;
  int series_truncation = 0;
  double tail_bound = 0.0;
};

/// Requires exponential claims and sigma = 0; throws std::invalid_argument otherwise.
ExpClosedForms exp_closed_forms(const ValidatedModel& model, double d);

/// u(d) = w_d(0) for exponential claims; d = kNoRuin is allowed.
double u_of_d(const ValidatedModel& model, double d);

/// Series solution for d = 0 and its derivatives.
double vartheta(const ValidatedModel& model, double x);
double vartheta_d1(const ValidatedModel& model, double x);
double vartheta_d2(const ValidatedModel& model, double x);

/// Series solution for d > 0 and its derivatives.
double varrho(const ValidatedModel& model, double x, double d);
double varrho_d1(const ValidatedModel& model, double x, double d);
double varrho_d2(const ValidatedModel& model, double x, double d);

struct ExpBarrier {
  double a = 0.0;
  bool boundary = false;  // no zero of the second derivative; optimum at 0
};

/// Zero of the second derivative (vartheta for d = 0, varrho otherwise), smallest root.
ExpBarrier exp_optimal_barrier(const ValidatedModel& model, double d, double x_max = 20.0);

/// Value of the barrier strategy at level a, from the closed forms (x >= 0).
double exp_barrier_value(const ValidatedModel& model, double d, double a, double x);

/// Value of the optimal barrier strategy.
double exp_value_function(const ValidatedModel& model, double d, double x);

}  // namespace pardiv
