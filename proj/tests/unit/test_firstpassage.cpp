#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/errors.hpp"
#include "pardiv/firstpassage.hpp"
#include "pardiv/lundberg.hpp"
#include "pardiv/simulator.hpp"

using namespace pardiv;

TEST_CASE("sigma = 0 densities") {
  const ValidatedModel m = oracle::reference(2.0);
  const double y = 0.5, t = 0.1;  // c t = 1.5 > y
  const double expected = 10.0 * 1.0 * y * std::exp(-(10.0 + 15.0) * t) * std::exp(y);
  CHECK(vy_density(m, y, 1, t) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(vy_density(m, y, 2, 0.02) == 0.0);  // t < y / c
  CHECK_THROWS_AS(vy_density(m, y, 0, t), AtomNotDensity);
}

TEST_CASE("sigma > 0 densities against the defining integral") {
  const ValidatedModel m = oracle::reference(2.0, 1.0);
  const double lambda = 10.0, c = 15.0, sigma = 1.0;
  for (double t : {0.05, 0.3}) {
    const double y = 0.7;
    const double sd = std::sqrt(t);
    for (int k : {0, 1, 2}) {
      double expected;
      if (k == 0) {
        const double z = (y - c * t) / (sigma * sd);
        expected = (y / t) * std::exp(-lambda * t) * std::exp(-0.5 * z * z) / (std::sqrt(2.0 * M_PI) * sigma * sd);
      } else {
        // The claim density jumps at 0, so integrate from where its argument turns positive.
        const double gauss = oracle::simpson(
            [&](double x) {
              return std::exp(-0.5 * x * x / t) / std::sqrt(2.0 * M_PI * t) *
                     oracle::erlang(1.0, k, c * t + sigma * x - y);
            },
            std::max(-10.0 * sd, (y - c * t) / sigma), 10.0 * sd, 200000);
        expected = std::pow(lambda, k) / std::tgamma(k + 1) * y * std::pow(t, k - 1) * std::exp(-lambda * t) * gauss;
      }
      CHECK(std::abs(vy_density(m, y, k, t) - expected) <= 1e-8);
    }
  }
}

TEST_CASE("densities integrate to at most one") {
  const ValidatedModel m = oracle::reference(2.0);
  for (int k : {1, 2, 5}) {
    const double mass = oracle::simpson([&](double t) { return vy_density(m, 0.5, k, t); }, 0.5 / 15.0, 30.0, 60000);
    CHECK(mass <= 1.0);
    CHECK(mass > 0.0);
  }
}

TEST_CASE("upcross transform limits") {
  const ValidatedModel m = oracle::reference(2.0);
  CHECK(upcross_transform(m, 0.5, 0.02).value == 0.0);  // d < y / c
  const double rho = lundberg_root(m).rho;
  for (double y : {0.1, 0.5, 1.0, 2.0})
    CHECK(std::abs(upcross_transform(m, y, kNoRuin).value - std::exp(-rho * y)) <= 1e-6);
  const UpcrossTransform u = upcross_transform(m, 0.5, 2.0);
  CHECK(u.value > 0.0);
  CHECK(u.value <= 1.0);
  CHECK(u.tail_bound <= 1e-10);
}

TEST_CASE("upcross transform is monotone") {
  for (double sigma : {0.0, 0.5}) {
    const ValidatedModel m = oracle::reference(2.0, sigma);
    double prev = 0.0;
    for (double d : {0.05, 0.2, 1.0, 2.0, 5.0}) {
      const double v = upcross_transform(m, 0.5, d).value;
      CHECK(v >= prev - 1e-12);
      prev = v;
    }
    prev = 1.0;
    for (double y : {0.1, 0.3, 0.8, 1.5}) {
      const double v = upcross_transform(m, y, 2.0).value;
      CHECK(v <= prev + 1e-12);
      prev = v;
    }
  }
}

TEST_CASE("up-crossing is almost sure without discounting") {
  ModelParams p = reference_params(20.0);
  p.r = 1.0;
  p.q = 1e-9;
  const ValidatedModel m = validate(p, ClaimDistribution::exponential(1.0));
  CHECK(std::abs(upcross_transform(m, 0.5, 20.0).value - 1.0) <= 1e-3);
}

TEST_CASE("Poisson tail cutoff") {
  const PoissonTail t = poisson_tail_cutoff(3.0, 1e-12);
  double tail = 0.0, term = 1.0;
  for (int k = 1; k <= 200; ++k) {
    term *= 3.0 / k;
    if (k > t.k) tail += term;
  }
  CHECK(tail < 1e-12);
  CHECK(t.bound < 1e-12);
}

TEST_CASE("upcross transform against Monte Carlo") {
  const ValidatedModel m = oracle::reference(2.0);
  SimConfig cfg;
  cfg.n_paths = 100000;
  const SimEstimate e = simulate_upcross(m, 0.5, 2.0, cfg);
  CHECK(std::abs(oracle::z_score(e.mean, e.std_error, upcross_transform(m, 0.5, 2.0).value)) <= 3.0);
}
