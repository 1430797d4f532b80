#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/expmodel.hpp"
#include "pardiv/lundberg.hpp"
#include "pardiv/valuation.hpp"

using namespace pardiv;

namespace {

ClaimDistribution table_of(double step, double hi, const std::function<double(double)>& f) {
  std::vector<double> v;
  const auto n = static_cast<int>(std::lround(hi / step));
  for (int i = 0; i <= n; ++i) v.push_back(f(step * i));
  return ClaimDistribution::tabulated(step, std::move(v));
}

double normal(double x, double m, double s) {
  return std::exp(-0.5 * (x - m) * (x - m) / (s * s)) / (s * std::sqrt(2.0 * M_PI));
}

}  // namespace

TEST_CASE("value of a barrier strategy") {
  const ValidatedModel m = oracle::reference(0.0);
  const HFunction h = h_d(m, 1.0);
  const double slope = h.d1(1.0);
  CHECK(value_barrier(m, h, 1.0, 1.0) == doctest::Approx(1.0 / slope).epsilon(1e-14));
  CHECK(value_barrier(m, h, 1.0, 1.7) - value_barrier(m, h, 1.0, 1.0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(value_barrier(m, h, 1.0, 0.4) == doctest::Approx(h.value(0.4) / slope).epsilon(1e-14));
  CHECK_THROWS_AS(value_barrier(m, h, 0.9, 0.4), std::invalid_argument);

  const BarrierSolution zero = fixed_barrier(m, 0.0);
  CHECK(zero.value(0.0) == doctest::Approx(15.0 / 10.1).epsilon(1e-8));

  const ValidatedModel m2 = oracle::reference(2.0);
  const HFunction h2 = h_d(m2, 1.0);
  CHECK(value_barrier(m2, h2, 1.0, -60.0) == 0.0);
}

TEST_CASE("optimal barrier for d = 0") {
  const ValidatedModel m = oracle::reference(0.0);
  const BarrierSolution sol = optimal_barrier(m, 3.0);
  CHECK_FALSE(sol.boundary);
  CHECK(std::abs(sol.a_star - 0.7693) <= 2e-3);
  CHECK(std::abs(sol.a_star - exp_optimal_barrier(m, 0.0).a) <= 1e-6);
  CHECK(std::abs(sol.h.d2(sol.a_star)) <= 1e-6);
  CHECK(sol.hjb_report.pass());

  // value is continuous with slope 1 at the barrier
  const double eps = 1e-6;
  CHECK((sol.value(sol.a_star + eps) - sol.value(sol.a_star)) / eps == doctest::Approx(1.0).epsilon(1e-6));
  CHECK((sol.value(sol.a_star) - sol.value(sol.a_star - eps)) / eps == doctest::Approx(1.0).epsilon(1e-5));

  for (double delta : {0.05, 0.1, 0.2}) {
    for (double a : {sol.a_star - delta, sol.a_star + delta}) {
      const BarrierSolution other = fixed_barrier(m, a);
      for (double x : {0.0, 0.3, 0.6, 1.2}) CHECK(sol.value(x) >= other.value(x) - 1e-9);
    }
  }
  CHECK_THROWS_AS(optimal_barrier(m, 0.1), std::invalid_argument);
}

TEST_CASE("optimal barrier for d = 2 satisfies the optimality invariant") {
  const ValidatedModel m = oracle::reference(2.0);
  const BarrierSolution sol = optimal_barrier(m, 3.0);
  if (sol.boundary) {
    CHECK(sol.a_star == 0.0);
    for (double x = 0.0; x <= 3.0; x += 0.01) CHECK(varrho_d2(m, x, 2.0) > 0.0);
  } else {
    CHECK(std::abs(sol.h.d2(sol.a_star)) <= 1e-6);
  }
  CHECK(sol.hjb_report.pass());
  for (double a : {sol.a_star + 0.1, sol.a_star + 0.2}) {
    const BarrierSolution other = fixed_barrier(m, a);
    for (double x : {0.0, 0.3}) CHECK(sol.value(x) >= other.value(x) - 1e-9);
  }
}

TEST_CASE("generator") {
  const ValidatedModel m = oracle::reference(0.0);
  SmoothFunction one{[](double) { return 1.0; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
  CHECK(generator_apply(m, one, 0.5) - m.q() == doctest::Approx(-10.0 * 0.2 - 0.1).epsilon(1e-10));

  const double rho = lundberg_root(m).rho;
  SmoothFunction e{[rho](double x) { return std::exp(rho * x); },
                   [rho](double x) { return rho * std::exp(rho * x); },
                   [rho](double x) { return rho * rho * std::exp(rho * x); }};
  for (double x : {0.0, 0.5, 2.0}) CHECK(std::abs(generator_apply(m, e, x) - m.q() * e.value(x)) <= 1e-10);

  const ValidatedModel ms = oracle::reference(0.0, 0.7);
  const double rs = lundberg_root(ms).rho;
  SmoothFunction es{[rs](double x) { return std::exp(rs * x); }, [rs](double x) { return rs * std::exp(rs * x); },
                    [rs](double x) { return rs * rs * std::exp(rs * x); }};
  CHECK(std::abs(generator_apply(ms, es, 0.3) - ms.q() * es.value(0.3)) <= 1e-10);

  SmoothFunction short_support = one;
  short_support.left_end = 0.0;
  CHECK_THROWS_AS(generator_apply(m, short_support, 0.5), std::invalid_argument);

  const BarrierSolution sol = optimal_barrier(m, 3.0);
  const SmoothFunction v = barrier_value_function(m, sol);
  for (double x = 0.05; x < sol.a_star; x += 0.05)
    CHECK(std::abs(generator_apply(m, v, x) - m.q() * v.value(x)) <= 1e-5);
  for (double x = sol.a_star; x < sol.a_star + 5.0; x += 0.25)
    CHECK(generator_apply(m, v, x) - m.q() * v.value(x) <= 1e-6);
}

TEST_CASE("HJB verification") {
  for (double d : {0.0, 2.0}) {
    const ValidatedModel m = oracle::reference(d);
    const BarrierSolution sol = optimal_barrier(m, 3.0);
    const HjbReport rep = hjb_verify(m, sol, sol.a_star + 10.0);
    CHECK(rep.pass());
    CHECK(rep.checks.size() == 3);
  }
  const ValidatedModel m = oracle::reference(0.0);
  const double a = optimal_barrier(m, 3.0).a_star + 0.5;
  const BarrierSolution bad = fixed_barrier(m, a);
  CHECK_FALSE(hjb_verify(m, bad, a + 10.0).pass());
}

TEST_CASE("monotone g'") {
  for (double d : {0.0, 2.0}) {
    const ValidatedModel m = oracle::reference(d);
    const double a = optimal_barrier(m, 3.0).a_star;
    CHECK(gprime_monotone_check(m, a, a + 5.0).pass);
  }
  const GridFunction bumpy = GridFunction::sample(0.0, 3.0, 0.01, [](double x) { return 1.0 + std::sin(4.0 * x); });
  const CheckResult r = gprime_monotone_check(bumpy, 0.5);
  CHECK_FALSE(r.pass);
  CHECK(r.worst > 0.0);
}

TEST_CASE("density shape advisory") {
  const DensityAdvisory e = density_shape_advisory(ClaimDistribution::exponential(1.0));
  CHECK(e.derivative_nondecreasing);
  CHECK(e.guaranteed);
  CHECK(e.message.find("guaranteed") != std::string::npos);

  const DensityAdvisory u = density_shape_advisory(table_of(1e-3, 2.0, [](double) { return 0.5; }));
  CHECK(u.derivative_nondecreasing);
  CHECK(u.derivative_nonincreasing);

  const DensityAdvisory b = density_shape_advisory(
      table_of(1e-3, 6.0, [](double x) { return 0.5 * normal(x, 1.5, 0.3) + 0.5 * normal(x, 4.0, 0.3); }));
  CHECK_FALSE(b.derivative_nondecreasing);
  CHECK_FALSE(b.derivative_nonincreasing);
  CHECK_FALSE(b.guaranteed);
  CHECK(b.message.find("inconclusive") != std::string::npos);
}
