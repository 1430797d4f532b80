#pragma once

#include <cstddef>
#include <cstdint>

#include "pardiv/model.hpp"

namespace pardiv {

/// How claims discount dividends: each payment by r^{claims so far}, or the whole stream by
/// r^{claims up to ruin} (the ruin-causing claim included).
enum class DiscountMode { PerPayment, TerminalFactor };

struct SimConfig {
  std::size_t n_paths = 100000;
  std::uint64_t seed = 20240601;
  double dt = 1e-4;        // Euler step when sigma > 0
  double t_max = 0.0;      // 0: chosen so that e^{-q t_max} c / q <= 1e-10
  DiscountMode discount_mode = DiscountMode::PerPayment;
  bool brownian_bridge = false;  // crossing correction inside Euler steps
  unsigned threads = 0;          // 0: hardware concurrency
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_paths = 0;
  double truncation_bias_bound = 0.0;
};

/// Discounted dividends of the barrier strategy at a, started at x.
SimEstimate simulate_value(const ValidatedModel& model, double a, double x, const SimConfig& cfg);

/// E_x[r^N e^{-q tau_a}; tau_a < Parisian ruin], for -c d < x <= a.
SimEstimate simulate_h(const ValidatedModel& model, double a, double x, const SimConfig& cfg);

/// E_0[r^N e^{-q tau_y}; tau_y < d] (d = kNoRuin allowed).
SimEstimate simulate_upcross(const ValidatedModel& model, double y, double d, const SimConfig& cfg);

}  // namespace pardiv
