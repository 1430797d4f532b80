#include "pardiv/gridmath.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "pardiv/errors.hpp"
#include "pardiv/quadrature.hpp"

namespace pardiv {

GridFunction::GridFunction(double lo, double step, std::vector<double> values)
    : lo_(lo), step_(step), values_(std::move(values)) {
  if (!(step > 0.0) || !std::isfinite(step)) throw GridError("grid step must be positive");
  if (values_.size() < 2) throw GridError("grid needs at least two nodes");
}

GridFunction GridFunction::sample(double lo, double hi, double step,
                                  const std::function<double(double)>& f) {
  if (!(step > 0.0)) throw GridError("grid step must be positive");
  const double count = (hi - lo) / step;
  const double rounded = std::round(count);
  if (!(hi > lo) || std::abs(count - rounded) > 1e-12 * std::max(1.0, rounded))
    throw GridError("(hi - lo) / step is not an integer");
  const auto n = static_cast<std::size_t>(rounded) + 1;
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(lo + step * static_cast<double>(i));
  return GridFunction(lo, step, std::move(v));
}

std::size_t GridFunction::index_of(double x) const {
  const double t = std::round((x - lo_) / step_);
  if (t <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(t), values_.size() - 1);
}

double GridFunction::at(double x) const {
  const double span = hi() - lo_;
  const double slack = 1e-9 * std::max(span, step_);
  if (!(x >= lo_ - slack && x <= hi() + slack))
    throw GridError("evaluation at " + std::to_string(x) + " outside grid [" +
                    std::to_string(lo_) + ", " + std::to_string(hi()) + "]");
  const auto n = static_cast<long>(values_.size());
  const double t = (x - lo_) / step_;
  if (n < 4) {
    long i = std::clamp(static_cast<long>(std::floor(t)), 0L, n - 2);
    const double u = t - static_cast<double>(i);
    return (1.0 - u) * values_[i] + u * values_[i + 1];
  }
  long base = std::clamp(static_cast<long>(std::floor(t)) - 1, 0L, n - 4);
  const double u = t - static_cast<double>(base);
  double result = 0.0;
  for (int m = 0; m < 4; ++m) {
    double l = 1.0;
    for (int k = 0; k < 4; ++k)
      if (k != m) l *= (u - k) / static_cast<double>(m - k);
    result += l * values_[base + m];
  }
  return result;
}

GridFunction GridFunction::slice(double a, double b) const {
  const std::size_t i0 = index_of(a);
  const std::size_t i1 = index_of(b);
  if (i1 <= i0) throw GridError("empty slice");
  std::vector<double> v(values_.begin() + static_cast<long>(i0),
                        values_.begin() + static_cast<long>(i1) + 1);
  return GridFunction(x(i0), step_, std::move(v));
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.lo() != b.lo() || a.step() != b.step() || a.size() != b.size())
    throw GridError("grids differ");
}

namespace {

void require_origin(const GridFunction& g) {
  if (std::abs(g.lo()) > 1e-12 * g.step()) throw GridError("grid must start at 0");
}

// Weights w_m = int_0^h omega(u) L_m(u / h) du for the Lagrange basis on node offsets.
template <std::size_t N, class Omega>
std::array<double, N> panel_weights(const std::array<int, N>& offsets, double h, Omega omega) {
  const quad::GaussRule& g = quad::gauss_legendre(12);
  std::array<double, N> w{};
  for (std::size_t q = 0; q < g.nodes.size(); ++q) {
    const double t = 0.5 * (g.nodes[q] + 1.0);
    const double wt = 0.5 * g.weights[q] * h * omega(t * h);
    for (std::size_t m = 0; m < N; ++m) {
      double l = 1.0;
      for (std::size_t k = 0; k < N; ++k)
        if (k != m) l *= (t - offsets[k]) / static_cast<double>(offsets[m] - offsets[k]);
      w[m] += wt * l;
    }
  }
  return w;
}

// Integral over each panel [x_i, x_i + h] of omega(u) g(x_i + u), cubic interpolation of g.
template <class Omega>
std::vector<double> panel_integrals(const GridFunction& g, Omega omega) {
  const std::size_t n = g.size();
  const double h = g.step();
  std::vector<double> p(n - 1);
  if (n < 4) {
    const auto w = panel_weights<2>({0, 1}, h, omega);
    for (std::size_t i = 0; i + 1 < n; ++i) p[i] = w[0] * g[i] + w[1] * g[i + 1];
    return p;
  }
  const auto wl = panel_weights<4>({0, 1, 2, 3}, h, omega);
  const auto wc = panel_weights<4>({-1, 0, 1, 2}, h, omega);
  const auto wr = panel_weights<4>({-2, -1, 0, 1}, h, omega);
  p[0] = wl[0] * g[0] + wl[1] * g[1] + wl[2] * g[2] + wl[3] * g[3];
  for (std::size_t i = 1; i + 2 < n; ++i)
    p[i] = wc[0] * g[i - 1] + wc[1] * g[i] + wc[2] * g[i + 1] + wc[3] * g[i + 2];
  const std::size_t i = n - 2;
  p[i] = wr[0] * g[i - 2] + wr[1] * g[i - 1] + wr[2] * g[i] + wr[3] * g[i + 1];
  return p;
}

}  // namespace

double quadrature_weight(Quadrature rule, std::size_t n, std::size_t j) {
  double w = (j == 0 || j == n) ? 0.5 : 1.0;
  if (rule == Quadrature::Gregory && n >= 2) {
    if (j == 0) w -= 3.0 / 24.0;
    if (j == 1) w += 4.0 / 24.0;
    if (j == 2) w -= 1.0 / 24.0;
    if (j == n) w -= 3.0 / 24.0;
    if (j == n - 1) w += 4.0 / 24.0;
    if (j == n - 2) w -= 1.0 / 24.0;
  }
  return w;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g, Quadrature rule) {
  require_same_grid(f, g);
  require_origin(f);
  const std::size_t n = f.size();
  const double h = f.step();
  const double* fv = f.values().data();
  const double* gv = g.values().data();
  std::vector<double> out(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j <= i; ++j) s += fv[i - j] * gv[j];
    s -= 0.5 * (fv[i] * gv[0] + fv[0] * gv[i]);
    if (rule == Quadrature::Gregory && i >= 2) {
      s += (-3.0 * fv[i] * gv[0] + 4.0 * fv[i - 1] * gv[1] - fv[i - 2] * gv[2]) / 24.0;
      s += (-3.0 * fv[0] * gv[i] + 4.0 * fv[1] * gv[i - 1] - fv[2] * gv[i - 2]) / 24.0;
    }
    out[i] = h * s;
  }
  return GridFunction(f.lo(), h, std::move(out));
}

GridFunction dickson(double r, const GridFunction& g) {
  if (!(r >= 0.0)) throw std::invalid_argument("Dickson operator requires r >= 0");
  const std::size_t n = g.size();
  const double h = g.step();
  const auto p = panel_integrals(g, [r](double u) { return std::exp(-r * u); });
  const double decay = std::exp(-r * h);
  std::vector<double> t(n, 0.0);
  for (std::size_t k = n - 1; k-- > 0;) t[k] = decay * t[k + 1] + p[k];
  return GridFunction(g.lo(), h, std::move(t));
}

GridFunction dickson(double r, const std::function<double(double)>& g, double lo, double hi,
                     double step, double tail_end) {
  const double steps = std::ceil((tail_end - lo) / step - 1e-9);
  const double end = lo + step * std::max(steps, std::round((hi - lo) / step));
  const GridFunction full = dickson(r, GridFunction::sample(lo, end, step, g));
  return full.slice(lo, hi);
}

double dickson_commutation_residual(double s, double r, const GridFunction& g) {
  if (s == r) throw std::invalid_argument("commutation residual requires s != r");
  const GridFunction ts = dickson(s, g);
  const GridFunction tr = dickson(r, g);
  const GridFunction tstr = dickson(s, tr);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    worst = std::max(worst, std::abs(tstr[i] - (ts[i] - tr[i]) / (r - s)));
  return worst;
}

GridFunction exp_convolve(double kappa, const GridFunction& g) {
  require_origin(g);
  const std::size_t n = g.size();
  const double h = g.step();
  const auto p = panel_integrals(g, [kappa, h](double u) { return std::exp(-kappa * (h - u)); });
  const double decay = std::exp(-kappa * h);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) b[i + 1] = decay * b[i] + p[i];
  return GridFunction(g.lo(), h, std::move(b));
}

GridFunction derivative(const GridFunction& g, int order) {
  const std::size_t n = g.size();
  if (n < 5) throw GridError("derivative needs at least five nodes");
  const double h = g.step();
  std::vector<double> d(n);
  if (order == 1) {
    d[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    d[n - 1] = (3.0 * g[n - 1] - 4.0 * g[n - 2] + g[n - 3]) / (2.0 * h);
  } else if (order == 2) {
    const double h2 = h * h;
    d[0] = (2.0 * g[0] - 5.0 * g[1] + 4.0 * g[2] - g[3]) / h2;
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (g[i + 1] - 2.0 * g[i] + g[i - 1]) / h2;
    d[n - 1] = (2.0 * g[n - 1] - 5.0 * g[n - 2] + 4.0 * g[n - 3] - g[n - 4]) / h2;
  } else {
    throw GridError("derivative order must be 1 or 2");
  }
  return GridFunction(g.lo(), h, std::move(d));
}

SeriesResult neumann_series(const GridFunction& kernel, const GridFunction& forcing, double coeff,
                            double tol, int max_terms, Quadrature rule) {
  require_same_grid(kernel, forcing);
  SeriesResult res{forcing, 1, forcing.sup_norm()};
  if (coeff == 0.0) {
    res.last_term_norm = 0.0;
    return res;
  }
  GridFunction term = forcing;
  for (int n = 1; n <= max_terms; ++n) {
    term = convolve(kernel, term, rule);
    for (double& v : term.values()) v *= coeff;
    for (std::size_t i = 0; i < term.size(); ++i) res.solution[i] += term[i];
    res.terms = n + 1;
    res.last_term_norm = term.sup_norm();
    if (res.last_term_norm < tol) return res;
  }
  throw ConvergenceError("Neumann series did not converge in " + std::to_string(max_terms) +
                             " terms",
                         res.last_term_norm);
}

GridFunction volterra_march(const GridFunction& kernel, const GridFunction& forcing, double coeff,
                            Quadrature rule) {
  require_same_grid(kernel, forcing);
  require_origin(kernel);
  const std::size_t n = kernel.size();
  const double h = kernel.step();
  const double* k = kernel.values().data();
  std::vector<double> xi(n);
  xi[0] = forcing[0];
  std::size_t start = 1;
  if (rule == Quadrature::Gregory && n >= 4) {
    // Nodes 1 and 2 together: Simpson on [0, h] with cubic K(h/2) and quadratic xi(h/2),
    // Simpson on [0, 2h]. Avoids the O(h^3) trapezoid error of a lone first step.
    const double kh = (5.0 * k[0] + 15.0 * k[1] - 5.0 * k[2] + k[3]) / 16.0;
    const double c6 = coeff * h / 6.0, c3 = coeff * h / 3.0;
    const double a11 = 1.0 - c6 * (3.0 * kh + k[0]), a12 = c6 * 0.5 * kh;
    const double a21 = -c3 * 4.0 * k[1], a22 = 1.0 - c3 * k[0];
    const double b1 = forcing[1] + c6 * (k[1] + 1.5 * kh) * xi[0];
    const double b2 = forcing[2] + c3 * k[2] * xi[0];
    const double det = a11 * a22 - a12 * a21;
    xi[1] = (b1 * a22 - a12 * b2) / det;
    xi[2] = (a11 * b2 - a21 * b1) / det;
    start = 3;
  }
  for (std::size_t i = start; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < i; ++j) s += k[i - j] * xi[j];
    s -= 0.5 * k[i] * xi[0];
    if (rule == Quadrature::Gregory && i >= 2) {
      s += (-3.0 * k[i] * xi[0] + 4.0 * k[i - 1] * xi[1] - k[i - 2] * xi[2]) / 24.0;
      // Right-end corrections on i-1, i-2; node i is unknown (still zero) and sits in w_self.
      s += (4.0 * k[1] * xi[i - 1] - k[2] * xi[i - 2]) / 24.0;
    }
    double w_self = quadrature_weight(rule, i, i);
    xi[i] = (forcing[i] + coeff * h * s) / (1.0 - coeff * h * w_self * k[0]);
  }
  return GridFunction(kernel.lo(), h, std::move(xi));
}

double second_kind_residual(const GridFunction& xi, const GridFunction& kernel,
                            const GridFunction& forcing, double coeff, Quadrature rule) {
  const GridFunction kx = convolve(kernel, xi, rule);
  double worst = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i)
    worst = std::max(worst, std::abs(xi[i] - coeff * kx[i] - forcing[i]));
  return worst;
}

}  // namespace pardiv
