#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "pardiv/hfun.hpp"

namespace pardiv {

struct CheckResult {
  std::string name;
  bool pass = true;
  double worst = 0.0;    // worst value of the checked quantity
  double worst_x = 0.0;  // where it occurred
  std::size_t points = 0;
};

struct HjbTolerances {
  double above = 1e-6;  // (Gamma - q) v <= above on [a, x_max]
  double below = 1e-5;  // |(Gamma - q) v| <= below on (0, a)
  double slope = 1e-6;  // v' >= 1 - slope on (0, a]
};

struct HjbReport {
  std::vector<CheckResult> checks;
  bool pass() const;
};

struct BarrierSolution {
  double a_star = 0.0;
  bool boundary = false;            // no interior zero of h''; optimum at 0
  std::vector<double> other_roots;  // further sign changes of h'' from - to +
  HFunction h;                      // normalized at a_star
  HjbReport hjb_report;

  double value(double x) const;
};

/// h(x) / h'(a) below the barrier, x - a + 1 / h'(a) above.
double value_barrier(const ValidatedModel& model, const HFunction& h, double a, double x);

/// Barrier solution at a prescribed level (HJB report over [a, a + 10]).
BarrierSolution fixed_barrier(const ValidatedModel& model, double a, const HOptions& options = {});

/// Global minimizer of h' over [0, a_max]: zeros of h'' or the boundary 0.
BarrierSolution optimal_barrier(const ValidatedModel& model, double a_max,
                                const HOptions& options = {});

/// Function with two derivatives, defined on [left_end, inf).
struct SmoothFunction {
  std::function<double(double)> value;
  std::function<double(double)> d1;
  std::function<double(double)> d2;
  double left_end = -std::numeric_limits<double>::infinity();
  std::vector<double> kinks;  // points where value or a derivative jumps
};

/// sigma^2/2 g'' + c g' - lambda g + lambda r int_0^inf g(x - y) f(y) dy.
double generator_apply(const ValidatedModel& model, const SmoothFunction& g, double x);

/// The value function of a barrier solution as a SmoothFunction.
SmoothFunction barrier_value_function(const ValidatedModel& model, const BarrierSolution& sol);

HjbReport hjb_verify(const ValidatedModel& model, const BarrierSolution& sol, double x_max,
                     const HjbTolerances& tol = {}, double step = 1e-3);

/// g'(a) <= g'(b) for all a_star <= a <= b on the grid of g'.
CheckResult gprime_monotone_check(const GridFunction& gprime, double a_star);
/// Same with g the unnormalized h on [0, b_max].
CheckResult gprime_monotone_check(const ValidatedModel& model, double a_star, double b_max,
                                  const HOptions& options = {});

struct DensityAdvisory {
  bool derivative_nonincreasing = false;
  bool derivative_nondecreasing = false;
  bool guaranteed = false;
  std::string message;
};

/// Reports whether f' is monotone on the support grid.
DensityAdvisory density_shape_advisory(const ClaimDistribution& dist, double step = 1e-3);

}  // namespace pardiv
