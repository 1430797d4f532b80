#pragma once

#include <cmath>
#include <functional>
#include <vector>

namespace pardiv::quad {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points (cached per n).
const GaussRule& gauss_legendre(int n);

/// Composite Gauss-Legendre on [a, b] with the given number of panels.
double gauss_integrate(const std::function<double(double)>& f, double a, double b,
                       int panels = 8, int order = 10);

/// Romberg integration; stops when successive extrapolations agree to abs_tol.
double romberg(const std::function<double(double)>& f, double a, double b,
               double abs_tol = 1e-13, int max_levels = 18, int min_levels = 5);

inline double normal_pdf(double x) {
  constexpr double inv_sqrt_2pi = 0.39894228040143267794;
  return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// log of the standard normal cdf, accurate deep in the left tail.
double log_normal_cdf(double x);

}  // namespace pardiv::quad
