#include "pardiv/lundberg.hpp"

#include <cmath>

#include "pardiv/errors.hpp"

namespace pardiv {

double psi_r(const ValidatedModel& m, double alpha) {
  const double s2 = m.sigma() * m.sigma();
  return 0.5 * s2 * alpha * alpha + m.c() * alpha - m.lambda() +
         m.lambda() * m.r() * m.claims().laplace(alpha);
}

LundbergRoot lundberg_root(const ValidatedModel& m) {
  auto g = [&](double s) { return psi_r(m, s) - m.q(); };
  auto dg = [&](double s) {
    return m.sigma() * m.sigma() * s + m.c() + m.lambda() * m.r() * m.claims().laplace_derivative(s);
  };
  // g(0) = -q - lambda (1 - r) < 0 and g is convex, so the positive root is unique.
  double lo = 0.0, hi = 1.0;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw ConvergenceError("no bracket for the Lundberg root", g(hi));
  }
  double s = 0.5 * (lo + hi);
  LundbergRoot out;
  for (int it = 1; it <= 200; ++it) {
    const double v = g(s);
    out.iterations = it;
    out.residual = std::abs(v);
    if (out.residual <= 1e-12) {
      out.rho = s;
      return out;
    }
    if (v < 0.0) lo = s; else hi = s;
    double next = s - v / dg(s);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (hi - lo < 1e-17 * hi) {
      out.rho = s;
      return out;
    }
    s = next;
  }
  throw ConvergenceError("Lundberg root iteration did not converge", out.residual);
}

double phi_r_of_q(const ValidatedModel& m) { return lundberg_root(m).rho; }

}  // namespace pardiv
