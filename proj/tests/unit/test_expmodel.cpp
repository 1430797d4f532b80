#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/expmodel.hpp"
#include "pardiv/hfun.hpp"
#include "pardiv/simulator.hpp"

using namespace pardiv;

namespace {

/// u(inf) from the gamma integrals, summed in log space.
double u_infinity(double lambda, double mu, double c, double q, double r) {
  const double s = lambda + q + mu * c;
  double sum = 0.0;
  for (int k = 0; k < 400; ++k) {
    const double lt = k * std::log(r * lambda) + (k + 1) * std::log(mu * c) + std::lgamma(2 * k + 1) -
                      std::lgamma(k + 1) - std::lgamma(k + 2) - (2 * k + 1) * std::log(s);
    sum += std::exp(lt);
  }
  return sum;
}

double fd1(const std::function<double(double)>& f, double x, double h = 1e-4) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("u(d)") {
  const ValidatedModel m = oracle::reference(2.0);
  CHECK(u_of_d(m, 0.0) == 0.0);
  double prev = 0.0;
  for (double d : {0.1, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double u = u_of_d(m, d);
    CHECK(u >= prev);
    prev = u;
  }
  const double uinf = u_infinity(10.0, 1.0, 15.0, 0.1, 0.8);
  CHECK(u_of_d(m, kNoRuin) == doctest::Approx(uinf).epsilon(1e-12));
  CHECK(u_of_d(m, 200.0) == doctest::Approx(uinf).epsilon(1e-10));

  const ValidatedModel t = validate(reference_params(2.0), oracle::tabulated_exponential());
  CHECK(std::abs(w_d_curve(t, 0.5).grid[0] - u_of_d(m, 2.0)) <= 1e-6);
  const ExpClosedForms cf = exp_closed_forms(m, 2.0);
  CHECK(cf.u_d == u_of_d(m, 2.0));
  CHECK(cf.tail_bound <= 1e-14);
}

TEST_CASE("vartheta") {
  const ValidatedModel m = oracle::reference(0.0);
  CHECK(vartheta(m, 0.0) == 1.0);
  CHECK(std::abs(vartheta_d1(m, 0.0) - 10.1 / 15.0) <= 1e-10);
  const ExpBarrier b = exp_optimal_barrier(m, 0.0);
  CHECK_FALSE(b.boundary);
  CHECK(std::abs(b.a - 0.7693) <= 2e-3);
  CHECK(std::abs(vartheta_d2(m, b.a)) <= 1e-10);
  for (double x : {0.1, 0.5, 1.3})
    CHECK(vartheta_d2(m, x) == doctest::Approx(fd1([&](double y) { return vartheta_d1(m, y); }, x)).epsilon(1e-7));
}

TEST_CASE("varrho") {
  const ValidatedModel m = oracle::reference(2.0);
  CHECK(varrho(m, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  for (double x : {0.0, 0.4, 1.5}) {
    CHECK(varrho(m, x, 1e-12) == doctest::Approx(vartheta(m, x)).epsilon(1e-10));
    CHECK(varrho_d1(m, x, 1e-12) == doctest::Approx(vartheta_d1(m, x)).epsilon(1e-10));
  }
  for (double x : {0.1, 0.52202, 1.3}) {
    CHECK(varrho_d1(m, x, 2.0) == doctest::Approx(fd1([&](double y) { return varrho(m, y, 2.0); }, x)).epsilon(1e-7));
    CHECK(varrho_d2(m, x, 2.0) == doctest::Approx(fd1([&](double y) { return varrho_d1(m, y, 2.0); }, x)).epsilon(1e-7));
  }
  const HFunction h = h_d_sigma0(m, 1.0);
  CHECK(std::abs(varrho(m, 0.3, 2.0) / varrho(m, 1.0, 2.0) - h.value(0.3)) <= 1e-6);
}

TEST_CASE("closed forms stay positive") {
  const ValidatedModel m = oracle::reference(2.0);
  for (double x = 0.0; x <= 5.0; x += 0.05) {
    CHECK(vartheta(m, x) > 0.0);
    CHECK(vartheta_d1(m, x) > 0.0);
    CHECK(varrho(m, x, 2.0) > 0.0);
    CHECK(varrho_d1(m, x, 2.0) > 0.0);
  }
}

TEST_CASE("optimal barrier is nonincreasing in d") {
  const ValidatedModel m = oracle::reference(0.0);
  double prev = INFINITY;
  for (double d : {0.0, 0.5, 1.0, 2.0}) {
    const double a = exp_optimal_barrier(m.with_delay(d), d).a;
    CHECK(a <= prev);
    prev = a;
  }
}

TEST_CASE("barrier value function") {
  const ValidatedModel m0 = oracle::reference(0.0);
  CHECK(exp_barrier_value(m0, 0.0, 0.0, 0.0) == doctest::Approx(15.0 / 10.1).epsilon(1e-12));
  const double a = exp_optimal_barrier(m0, 0.0).a;
  for (double x : {a + 0.1, a + 2.0})
    CHECK(exp_value_function(m0, 0.0, x) - exp_value_function(m0, 0.0, a) == doctest::Approx(x - a).epsilon(1e-12));
  CHECK(exp_value_function(m0, 0.0, a) == doctest::Approx(1.0 / vartheta_d1(m0, a) * vartheta(m0, a)));
  CHECK_THROWS_AS(exp_closed_forms(oracle::reference(0.0, 0.5), 0.0), std::invalid_argument);
}

TEST_CASE("barrier value function against Monte Carlo") {
  const ValidatedModel m = oracle::reference(2.0);
  const double a = exp_optimal_barrier(m, 2.0).a;
  SimConfig cfg;
  cfg.n_paths = 50000;
  const SimEstimate e = simulate_value(m, a, 0.5, cfg);
  CHECK(std::abs(oracle::z_score(e.mean, e.std_error, exp_value_function(m, 2.0, 0.5))) <= 3.0);
}
