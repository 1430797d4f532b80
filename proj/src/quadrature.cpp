#include "pardiv/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace pardiv::quad {

namespace {

GaussRule build_rule(int n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int panels,
                       int order) {
  const GaussRule& g = gauss_legendre(order);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

double romberg(const std::function<double(double)>& f, double a, double b, double abs_tol,
               int max_levels, int min_levels) {
  if (b <= a) return 0.0;
  std::vector<double> prev(1), cur;
  double h = b - a;
  prev[0] = 0.5 * h * (f(a) + f(b));
  long n = 1;
  for (int level = 1; level < max_levels; ++level) {
    double mid = 0.0;
    for (long i = 0; i < n; ++i) mid += f(a + (i + 0.5) * h);
    cur.assign(level + 1, 0.0);
    cur[0] = 0.5 * (prev[0] + h * mid);
    double factor = 1.0;
    for (int k = 1; k <= level; ++k) {
      factor *= 4.0;
      cur[k] = cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (factor - 1.0);
    }
    if (level >= min_levels && std::abs(cur[level] - prev[level - 1]) <= abs_tol) return cur[level];
    prev.swap(cur);
    h *= 0.5;
    n *= 2;
  }
  return prev.back();
}

double log_normal_cdf(double x) {
  if (x > -30.0) return std::log(normal_cdf(x));
  // Asymptotic series of the Mills ratio.
  const double x2 = x * x;
  double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2);
  return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

}  // namespace pardiv::quad
