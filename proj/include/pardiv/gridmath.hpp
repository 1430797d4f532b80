#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace pardiv {

/// Values on the uniform grid lo, lo + step, ..., lo + (n-1) step.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(double lo, double step, std::vector<double> values);

  /// Samples f on [lo, hi]; (hi - lo) / step must be an integer.
  static GridFunction sample(double lo, double hi, double step,
                             const std::function<double(double)>& f);

  std::size_t size() const { return values_.size(); }
  double lo() const { return lo_; }
  double step() const { return step_; }
  double hi() const { return lo_ + step_ * static_cast<double>(values_.size() - 1); }
  double x(std::size_t i) const { return lo_ + step_ * static_cast<double>(i); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Index of the node nearest to x (clamped).
  std::size_t index_of(double x) const;

  /// Cubic Lagrange interpolation; throws GridError outside [lo, hi].
  double at(double x) const;

  /// Sub-grid covering [a, b] (endpoints snapped to nodes).
  GridFunction slice(double a, double b) const;

  double sup_norm() const;

 private:
  double lo_ = 0.0;
  double step_ = 1.0;
  std::vector<double> values_;
};

/// Throws GridError unless both grids share lo, step and size.
void require_same_grid(const GridFunction& a, const GridFunction& b);

enum class Quadrature { Trapezoid, Gregory };

/// Weight of node j in the rule over n intervals (times step gives the integral).
double quadrature_weight(Quadrature rule, std::size_t n, std::size_t j);

/// (f * g)(x) = int_0^x f(x - y) g(y) dy on a common grid starting at 0.
GridFunction convolve(const GridFunction& f, const GridFunction& g,
                      Quadrature rule = Quadrature::Trapezoid);

/// Dickson-Hipp operator (T_r g)(x) = int_x^inf e^{-r(y - x)} g(y) dy.
/// The tail beyond the grid end is taken as zero. Uses exponentially weighted cubic panels.
GridFunction dickson(double r, const GridFunction& g);

/// Same for an analytic g sampled on [lo, tail_end]; the result covers [lo, hi].
GridFunction dickson(double r, const std::function<double(double)>& g, double lo, double hi,
                     double step, double tail_end);

/// sup_x |T_s T_r g - (T_s g - T_r g) / (r - s)| over the grid. Requires s != r.
double dickson_commutation_residual(double s, double r, const GridFunction& g);

/// int_0^x e^{-kappa (x - y)} g(y) dy for a grid starting at 0 (kappa may be negative).
GridFunction exp_convolve(double kappa, const GridFunction& g);

/// Finite-difference derivative of order 1 or 2 (central, one-sided at the ends).
GridFunction derivative(const GridFunction& g, int order);

struct SeriesResult {
  GridFunction solution;
  int terms = 0;
  double last_term_norm = 0.0;
};

/// Sum_{n>=0} coeff^n kernel^{*n} * forcing, stopping when a term's sup-norm drops below tol.
SeriesResult neumann_series(const GridFunction& kernel, const GridFunction& forcing, double coeff,
                            double tol = 1e-13, int max_terms = 200,
                            Quadrature rule = Quadrature::Trapezoid);

/// Step-by-step solution of xi = forcing + coeff kernel * xi.
GridFunction volterra_march(const GridFunction& kernel, const GridFunction& forcing, double coeff,
                            Quadrature rule = Quadrature::Trapezoid);

/// sup |xi - coeff kernel * xi - forcing|, with the convolution by the same rule.
double second_kind_residual(const GridFunction& xi, const GridFunction& kernel,
                            const GridFunction& forcing, double coeff,
                            Quadrature rule = Quadrature::Trapezoid);

}  // namespace pardiv
