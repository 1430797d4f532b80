#include "pardiv/expmodel.hpp"

#include <cmath>
#include <stdexcept>

#include "pardiv/lundberg.hpp"

namespace pardiv {

namespace {

constexpr double kTermTol = 1e-14;
constexpr int kMaxTerms = 100000;

void require_exponential(const ValidatedModel& m) {
  if (m.claims().kind() != ClaimDistribution::Kind::Exponential || m.sigma() != 0.0)
    throw std::invalid_argument("closed forms need exponential claims and sigma = 0");
}

struct Coefficients {
  double mu, rho, alpha;
  double theta;      // lambda r mu / (c alpha^2): weight of P(n, alpha x)
  double theta_x;    // lambda r mu / (c alpha): weight of the e^{-mu x} polynomial terms
};

Coefficients coefficients(const ValidatedModel& m) {
  Coefficients k;
  k.mu = m.claims().rate();
  k.rho = lundberg_root(m).rho;
  k.alpha = k.rho + k.mu;
  k.theta_x = m.lambda() * m.r() * k.mu / (m.c() * k.alpha);
  k.theta = k.theta_x / k.alpha;
  return k;
}

// Sums over n >= 1 of theta^n P(n, alpha x) and of e^{-mu x} (theta_x x)^j / j! for the
// polynomial terms, with P(n, .) the regularized lower incomplete gamma function.
struct SeriesSums {
  double gamma_part = 0.0;  // sum theta^n P(n, alpha x)
  double e_prev = 0.0;      // sum_{n>=1} theta_x^n x^{n-1} / (n-1)! e^{-mu x}
  double e_same = 0.0;      // sum_{n>=1} theta_x^n x^n / n! e^{-mu x}
  double e_prev2 = 0.0;     // sum_{n>=2} theta_x^n x^{n-2} / (n-2)! e^{-mu x}
  int terms = 0;
  double tail = 0.0;
};

SeriesSums series(const Coefficients& k, double x) {
  SeriesSums s;
  const double y = k.alpha * x;
  const double ey = std::exp(-y);
  const double emx = std::exp(-k.mu * x);
  double p = -std::expm1(-y);   // P(1, y)
  double pow_y = y * ey;        // y^n e^{-y} / n! for n = 1
  double theta_n = k.theta;
  double poly = 1.0;            // (theta_x x)^{n-1} / (n-1)!
  double poly_prev = 0.0;       // (theta_x x)^{n-2} / (n-2)!
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double g = theta_n * p;
    const double a = k.theta_x * poly * emx;
    const double b = poly * (k.theta_x * x / n) * emx;
    const double c = k.theta_x * k.theta_x * poly_prev * emx;
    s.gamma_part += g;
    s.e_prev += a;
    s.e_same += b;
    s.e_prev2 += c;
    s.terms = n;
    const double ratio = std::max(k.theta * std::min(1.0, y / n), k.theta_x * x / n);
    const double biggest = std::max({std::abs(g), std::abs(a), std::abs(b), std::abs(c)});
    if (n > 1 && ratio < 1.0 && biggest < kTermTol) {
      s.tail = biggest * ratio / (1.0 - ratio);
      break;
    }
    // P(n + 1, y) = P(n, y) - y^n e^{-y} / n!
    p -= pow_y;
    pow_y *= y / (n + 1.0);
    theta_n *= k.theta;
    poly_prev = poly;
    poly *= k.theta_x * x / n;
  }
  return s;
}

struct RhoParts {
  double v, d1, d2;
};

RhoParts evaluate(const ValidatedModel& m, double x, double u) {
  if (x < 0.0) throw std::invalid_argument("closed forms are defined for x >= 0");
  const Coefficients k = coefficients(m);
  const SeriesSums s = series(k, x);
  const double A = m.lambda() * m.r() * u / (m.c() * k.alpha);
  const double er = std::exp(k.rho * x);
  const double em = std::exp(-k.mu * x);
  const double G = er * s.gamma_part;  // sum coef_n e^{rho x} I_n(x)
  RhoParts out;
  out.v = (1.0 - A) * G + A * s.e_same + er - A * (er - em);
  out.d1 = (1.0 - A) * k.rho * G + s.e_prev - A * k.mu * s.e_same + k.rho * er -
           A * (k.rho * er + k.mu * em);
  // Term-wise derivative of the first-derivative display.
  out.d2 = (1.0 - A) * k.rho * (k.rho * G + s.e_prev) + (s.e_prev2 - k.mu * s.e_prev) -
           A * k.mu * (s.e_prev - k.mu * s.e_same) + k.rho * k.rho * er -
           A * (k.rho * k.rho * er - k.mu * k.mu * em);
  return out;
}

}  // namespace

ExpClosedForms exp_closed_forms(const ValidatedModel& m, double d) {
  require_exponential(m);
  ExpClosedForms out;
  out.mu = m.claims().rate();
  out.rho = lundberg_root(m).rho;
  if (!(d > 0.0)) return out;
  const double mu = out.mu, c = m.c();
  const double beta = m.lambda() + m.q() + mu * c;
  const double z = m.lambda() * m.r() * mu * c / (beta * beta);
  const double y = beta * d;
  const bool infinite = std::isinf(d);
  // term_k = (mu c / beta) Catalan_k z^k P(2k + 1, beta d)
  double catalan = 1.0;
  double zk = 1.0;
  double p = infinite ? 1.0 : -std::expm1(-y);  // P(1, y)
  double pow_y = infinite ? 0.0 : y * std::exp(-y);  // y^m e^{-y} / m! at m = 1
  double sum = 0.0;
  for (int kk = 0; kk <= kMaxTerms; ++kk) {
    const double term = (mu * c / beta) * catalan * zk * p;
    sum += term;
    out.series_truncation = kk;
    const double ratio = 4.0 * z;
    if (term < 1e-17 && ratio < 1.0) {
      out.tail_bound = term * ratio / (1.0 - ratio);
      break;
    }
    if (!infinite) {
      // P(2k + 3, y) = P(2k + 1, y) - y^{2k+1} e^{-y} / (2k+1)! - y^{2k+2} e^{-y} / (2k+2)!
      const int m1 = 2 * kk + 1;
      p -= pow_y;
      pow_y *= y / (m1 + 1.0);
      p -= pow_y;
      pow_y *= y / (m1 + 2.0);
    }
    catalan *= 2.0 * (2.0 * kk + 1.0) / (kk + 2.0);
    zk *= z;
  }
  out.u_d = sum;
  return out;
}

double u_of_d(const ValidatedModel& m, double d) { return exp_closed_forms(m, d).u_d; }

double vartheta(const ValidatedModel& m, double x) {
  require_exponential(m);
  return evaluate(m, x, 0.0).v;
}
double vartheta_d1(const ValidatedModel& m, double x) {
  require_exponential(m);
  return evaluate(m, x, 0.0).d1;
}
double vartheta_d2(const ValidatedModel& m, double x) {
  require_exponential(m);
  return evaluate(m, x, 0.0).d2;
}

double varrho(const ValidatedModel& m, double x, double d) {
  return evaluate(m, x, u_of_d(m, d)).v;
}
double varrho_d1(const ValidatedModel& m, double x, double d) {
  return evaluate(m, x, u_of_d(m, d)).d1;
}
double varrho_d2(const ValidatedModel& m, double x, double d) {
  return evaluate(m, x, u_of_d(m, d)).d2;
}

ExpBarrier exp_optimal_barrier(const ValidatedModel& m, double d, double x_max) {
  const double u = u_of_d(m, d);
  auto g2 = [&](double x) { return evaluate(m, x, u).d2; };
  const double step = 1e-3;
  double prev = g2(0.0);
  ExpBarrier out;
  if (prev >= 0.0) {
    out.boundary = true;
    return out;
  }
  for (double x = step; x <= x_max + 0.5 * step; x += step) {
    const double cur = g2(x);
    if (cur >= 0.0) {
      double lo = x - step, hi = x;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (g2(mid) < 0.0) lo = mid; else hi = mid;
      }
      out.a = 0.5 * (lo + hi);
      return out;
    }
    prev = cur;
  }
  throw std::runtime_error("no zero of the second derivative below x_max");
}

double exp_barrier_value(const ValidatedModel& m, double d, double a, double x) {
  require_exponential(m);
  const double u = u_of_d(m, d);
  const RhoParts at_a = evaluate(m, a, u);
  if (x > a) return x - a + at_a.v / at_a.d1;
  return evaluate(m, x, u).v / at_a.d1;
}

double exp_value_function(const ValidatedModel& m, double d, double x) {
  return exp_barrier_value(m, d, exp_optimal_barrier(m, d).a, x);
}

}  // namespace pardiv
