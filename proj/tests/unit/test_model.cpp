#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/errors.hpp"
#include "pardiv/model.hpp"

using namespace pardiv;

namespace {

Violation violation_of(const ModelParams& p, const ClaimDistribution& f) {
  try {
    validate(p, f);
  } catch (const ModelError& e) {
    return e.violation();
  }
  FAIL("validation unexpectedly succeeded");
  return Violation::InvalidClaimDistribution;
}

}  // namespace

TEST_CASE("reference parameters validate with loading one half") {
  const ValidatedModel m = validate(reference_params(0.0), ClaimDistribution::exponential(1.0));
  CHECK(m.loading() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(m.lambda() == 10.0);
  CHECK(m.c() == 15.0);
  CHECK(m.r() == 0.8);
  CHECK_FALSE(m.no_ruin());
  CHECK(m.with_delay(kNoRuin).no_ruin());
  CHECK(m.with_delay(2.0).d() == 2.0);
}

TEST_CASE("named violations") {
  const ClaimDistribution exp1 = ClaimDistribution::exponential(1.0);
  ModelParams p = reference_params(0.0);
  p.c = 9.0;
  CHECK(violation_of(p, exp1) == Violation::NegativeLoading);
  p = reference_params(0.0);
  p.r = 1.2;
  CHECK(violation_of(p, exp1) == Violation::RNotInUnitInterval);
  p.r = 0.0;
  CHECK(violation_of(p, exp1) == Violation::RNotInUnitInterval);
  p = reference_params(0.0);
  p.c = 0.0;
  CHECK(violation_of(p, exp1) == Violation::NonPositivePremium);
  p = reference_params(0.0);
  p.lambda = -1.0;
  CHECK(violation_of(p, exp1) == Violation::NonPositiveLambda);
  p = reference_params(0.0);
  p.q = 0.0;
  CHECK(violation_of(p, exp1) == Violation::NonPositiveDiscount);
  p = reference_params(0.0);
  p.sigma = -0.1;
  CHECK(violation_of(p, exp1) == Violation::NegativeSigma);
  p = reference_params(-1.0);
  CHECK(violation_of(p, exp1) == Violation::NegativeDelay);
  CHECK(to_string(Violation::NegativeLoading) == "NegativeLoading");
}

TEST_CASE("tabulated densities must carry unit mass and a negligible tail") {
  const ModelParams p = reference_params(0.0);
  std::vector<double> half;
  for (int i = 0; i <= 40000; ++i) half.push_back(0.5 * std::exp(-1e-3 * i));
  CHECK(violation_of(p, ClaimDistribution::tabulated(1e-3, half)) == Violation::ClaimMassDefect);
  // Truncated at 20: missing mass e^{-20} ~ 2e-9 passes the mass check but not the tail check.
  CHECK(violation_of(p, oracle::tabulated_exponential(1.0, 1e-3, 20.0)) ==
        Violation::ClaimTailTooHeavy);
  CHECK_NOTHROW(validate(p, oracle::tabulated_exponential()));
  CHECK_THROWS_AS(ClaimDistribution::tabulated(1e-3, {1.0, -1.0, 0.0, 0.0, 0.0}), ModelError);
  CHECK_THROWS_AS(ClaimDistribution::exponential(0.0), ModelError);
}

TEST_CASE("Erlang convolution powers") {
  CHECK(exp_conv_power(1.0, 1, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(exp_conv_power(1.0, 2, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(exp_conv_power(2.0, 3, 0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  // Self-convolution of the Erlang(2) density with the exponential density.
  const double x = 0.5;
  const double self = oracle::simpson(
      [&](double y) { return exp_conv_power(2.0, 2, x - y) * exp_conv_power(2.0, 1, y); }, 0.0, x);
  CHECK(self == doctest::Approx(exp_conv_power(2.0, 3, x)).epsilon(1e-12));
}

TEST_CASE("exponential kind is analytic") {
  const ClaimDistribution f = ClaimDistribution::exponential(2.0);
  CHECK(f.mean() == doctest::Approx(0.5));
  CHECK(f.laplace(0.0) == 1.0);
  CHECK(f.laplace(3.0) == doctest::Approx(0.4));
  CHECK(f.cdf(1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(f.conv_power(1, 0.7) == doctest::Approx(f.density(0.7)));
  for (int n : {2, 3}) {
    const double mass = oracle::simpson([&](double x) { return f.conv_power(n, x); }, 0.0, 40.0);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("tabulated exponential matches the analytic law") {
  const ClaimDistribution t = oracle::tabulated_exponential();
  const ClaimDistribution e = ClaimDistribution::exponential(1.0);
  CHECK(std::abs(t.total_mass() - 1.0) <= 1e-8);
  CHECK(t.mean() == doctest::Approx(1.0).epsilon(1e-6));
  for (double s : {0.0, 0.1, 0.24493, 1.0, 5.0})
    CHECK(std::abs(t.laplace(s) - e.laplace(s)) <= 1e-8);
  for (double x : {0.0, 0.37, 2.5}) CHECK(std::abs(t.cdf(x) - e.cdf(x)) <= 1e-8);
  for (int n : {1, 2, 3})
    for (double x : {0.3, 1.0, 2.2}) CHECK(std::abs(t.conv_power(n, x) - exp_conv_power(1.0, n, x)) <= 1e-6);
}

TEST_CASE("Laplace transform is decreasing and convex") {
  const ClaimDistribution t = oracle::tabulated_exponential(1.5, 1e-3, 30.0);
  double prev = t.laplace(0.0);
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-8));
  const double h = 0.05;
  for (double s = h; s < 5.0; s += h) {
    const double cur = t.laplace(s);
    CHECK(cur < prev);
    CHECK(t.laplace(s - h) - 2.0 * cur + t.laplace(s + h) >= -1e-12);
    prev = cur;
  }
}
