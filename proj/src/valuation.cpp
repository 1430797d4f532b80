#include "pardiv/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pardiv/quadrature.hpp"

namespace pardiv {

namespace {

constexpr int kGaussOrder = 16;

std::size_t last_node_at_or_below(const GridFunction& g, double x) {
  return static_cast<std::size_t>(std::floor((x - g.lo()) / g.step() + 1e-9));
}

double bisect_root(const GridFunction& g, double lo, double hi) {
  double glo = g.at(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-11; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g.at(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Panel width for the claim integral: fine near the origin, coarser in the tail.
double panel_width(double y) { return y < 10.0 ? 0.25 : 1.0; }

}  // namespace

bool HjbReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

double value_barrier(const ValidatedModel& model, const HFunction& h, double a, double x) {
  (void)model;
  if (std::abs(h.a - a) > 1e-12) throw std::invalid_argument("h was built for another barrier");
  const double hp = h.d1(a);
  if (!(hp > 0.0)) throw std::runtime_error("degenerate barrier: h'(a) <= 0");
  if (x > a) return x - a + 1.0 / hp;
  return h.value(x) / hp;
}

double BarrierSolution::value(double x) const {
  return value_barrier(*h.context->model, h, a_star, x);
}

BarrierSolution optimal_barrier(const ValidatedModel& model, double a_max,
                                const HOptions& options) {
  if (!(a_max > 0.0)) throw std::invalid_argument("a_max must be positive");
  HOptions o = options;
  o.x_ext = std::max(o.x_ext, a_max + 0.5);
  const HFunction H = h_d(model, a_max, o);
  const GridFunction& g1 = H.xi_d1;
  const GridFunction& g2 = H.xi_d2;
  const std::size_t n = last_node_at_or_below(g2, a_max);

  std::vector<double> candidates;
  if (g2[0] > 0.0) candidates.push_back(0.0);
  for (std::size_t i = 0; i < n; ++i)
    if (g2[i] < 0.0 && g2[i + 1] >= 0.0) candidates.push_back(bisect_root(g2, g2.x(i), g2.x(i + 1)));

  std::size_t i_min = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (g1[i] < g1[i_min]) i_min = i;
  if (i_min == n && g2[n] < 0.0)
    throw std::invalid_argument("h' is still decreasing at a_max; enlarge a_max");

  BarrierSolution sol;
  if (candidates.empty()) {
    sol.a_star = g1.x(i_min);
    sol.boundary = true;
  } else {
    double best = candidates.front(), best_g1 = g1.at(best);
    for (double c : candidates) {
      const double v = g1.at(c);
      if (v < best_g1 - 1e-12 * std::abs(best_g1)) {
        best = c;
        best_g1 = v;
      }
    }
    sol.a_star = best;
    sol.boundary = best == 0.0;
    for (double c : candidates)
      if (c != best && c > 0.0) sol.other_roots.push_back(c);
  }
  sol.h = H.with_barrier(sol.a_star);
  sol.hjb_report = hjb_verify(model, sol, sol.a_star + 10.0, {}, options.step);
  return sol;
}

BarrierSolution fixed_barrier(const ValidatedModel& model, double a, const HOptions& options) {
  if (!(a >= 0.0)) throw std::invalid_argument("barrier must be >= 0");
  BarrierSolution sol;
  sol.a_star = a;
  sol.h = h_d(model, a, options);
  sol.hjb_report = hjb_verify(model, sol, a + 10.0, {}, options.step);
  return sol;
}

double generator_apply(const ValidatedModel& model, const SmoothFunction& g, double x) {
  const ClaimDistribution& claims = model.claims();
  const double S = claims.support_max();
  if (x - S < g.left_end) throw std::invalid_argument("g is not defined over the claim support");
  const double local = 0.5 * model.sigma() * model.sigma() * g.d2(x) + model.c() * g.d1(x) -
                       model.lambda() * g.value(x);

  std::vector<double> breaks{0.0, S};
  for (double k : g.kinks)
    if (x - k > 0.0 && x - k < S) breaks.push_back(x - k);
  std::sort(breaks.begin(), breaks.end());

  const quad::GaussRule& rule = quad::gauss_legendre(kGaussOrder);
  double integral = 0.0;
  for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
    double lo = breaks[b];
    const double end = breaks[b + 1];
    while (lo < end) {
      const double hi = std::min(end, lo + panel_width(lo));
      const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
      for (int k = 0; k < kGaussOrder; ++k) {
        const double y = mid + half * rule.nodes[k];
        integral += half * rule.weights[k] * g.value(x - y) * claims.density(y);
      }
      lo = hi;
    }
  }
  return local + model.lambda() * model.r() * integral;
}

SmoothFunction barrier_value_function(const ValidatedModel& model, const BarrierSolution& sol) {
  const HFunction& h = sol.h;
  const double a = sol.a_star;
  const double hp = h.d1(a);
  if (!(hp > 0.0)) throw std::runtime_error("degenerate barrier: h'(a) <= 0");
  SmoothFunction v;
  v.value = [&h, a, hp](double x) { return x > a ? x - a + 1.0 / hp : h.value(x) / hp; };
  v.d1 = [&h, a, hp](double x) { return x > a ? 1.0 : h.d1(x) / hp; };
  v.d2 = [&h, a, hp](double x) { return x > a ? 0.0 : h.d2(x) / hp; };
  v.kinks = {0.0, a};
  const double support = h.context->continuation.support();
  if (std::isfinite(support) && support > 0.0) v.kinks.push_back(-support);
  (void)model;
  return v;
}

HjbReport hjb_verify(const ValidatedModel& model, const BarrierSolution& sol, double x_max,
                     const HjbTolerances& tol, double step) {
  const SmoothFunction v = barrier_value_function(model, sol);
  const double a = sol.a_star;
  const double q = model.q();
  auto gen_minus_qv = [&](double x) { return generator_apply(model, v, x) - q * v.value(x); };

  CheckResult above{"generator_above_barrier", true, -std::numeric_limits<double>::infinity(), a, 0};
  const auto n_above = static_cast<std::size_t>(std::floor((x_max - a) / step + 1e-9));
  for (std::size_t i = 0; i <= n_above; ++i) {
    const double x = a + step * static_cast<double>(i);
    const double g = gen_minus_qv(x);
    if (g > above.worst) {
      above.worst = g;
      above.worst_x = x;
    }
    ++above.points;
  }
  above.pass = above.worst <= tol.above;

  CheckResult below{"generator_below_barrier", true, 0.0, 0.0, 0};
  CheckResult slope{"slope_below_barrier", true, 1.0, a, 0};
  const auto n_below = static_cast<std::size_t>(std::ceil(a / step - 1e-9));
  for (std::size_t i = 1; i <= n_below; ++i) {
    const double x = std::min(a, step * static_cast<double>(i));
    if (x < a) {
      const double g = std::abs(gen_minus_qv(x));
      if (g > below.worst) {
        below.worst = g;
        below.worst_x = x;
      }
      ++below.points;
    }
    const double d1 = v.d1(x);
    if (d1 < slope.worst) {
      slope.worst = d1;
      slope.worst_x = x;
    }
    ++slope.points;
  }
  below.pass = below.worst <= tol.below;
  slope.pass = slope.worst >= 1.0 - tol.slope;

  HjbReport report;
  report.checks = {above, below, slope};
  return report;
}

CheckResult gprime_monotone_check(const GridFunction& gprime, double a_star) {
  CheckResult out{"gprime_monotone", true, 0.0, a_star, 0};
  const double start = std::max(0.0, std::ceil((a_star - gprime.lo()) / gprime.step() - 1e-9));
  const auto i0 = static_cast<std::size_t>(start);
  if (i0 >= gprime.size()) return out;
  double scale = 0.0;
  for (std::size_t i = i0; i < gprime.size(); ++i) scale = std::max(scale, std::abs(gprime[i]));
  double suffix_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = gprime.size(); i-- > i0;) {
    suffix_min = std::min(suffix_min, gprime[i]);
    const double violation = gprime[i] - suffix_min;
    if (violation > out.worst) {
      out.worst = violation;
      out.worst_x = gprime.x(i);
    }
    ++out.points;
  }
  out.pass = out.worst <= 1e-9 * scale;
  return out;
}

CheckResult gprime_monotone_check(const ValidatedModel& model, double a_star, double b_max,
                                  const HOptions& options) {
  if (!(b_max > a_star)) throw std::invalid_argument("b_max must exceed a_star");
  const HFunction H = h_d(model, b_max, options);
  return gprime_monotone_check(H.xi_d1.slice(0.0, H.xi_d1.x(last_node_at_or_below(H.xi_d1, b_max))),
                               a_star);
}

DensityAdvisory density_shape_advisory(const ClaimDistribution& dist, double step) {
  std::vector<double> fp;
  if (dist.kind() == ClaimDistribution::Kind::Exponential) {
    const double mu = dist.rate();
    const auto n = static_cast<std::size_t>(std::ceil(dist.support_max() / step));
    fp.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) fp[i] = -mu * mu * std::exp(-mu * step * static_cast<double>(i));
  } else {
    const GridFunction table(0.0, dist.tabulation_step(), dist.table());
    fp = derivative(table, 1).values();
  }
  double scale = 0.0;
  for (double v : fp) scale = std::max(scale, std::abs(v));
  const double tol = 1e-9 * scale + 1e-300;
  DensityAdvisory out;
  out.derivative_nonincreasing = true;
  out.derivative_nondecreasing = true;
  for (std::size_t i = 0; i + 1 < fp.size(); ++i) {
    const double delta = fp[i + 1] - fp[i];
    if (delta > tol) out.derivative_nonincreasing = false;
    if (delta < -tol) out.derivative_nondecreasing = false;
  }
  out.guaranteed = out.derivative_nonincreasing || out.derivative_nondecreasing;
  out.message = out.guaranteed
                    ? "barrier optimality guaranteed by the monotone density condition"
                    : "inconclusive, rely on hjb_verify";
  return out;
}

}  // namespace pardiv
