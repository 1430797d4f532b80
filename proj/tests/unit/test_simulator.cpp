#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/expmodel.hpp"
#include "pardiv/firstpassage.hpp"
#include "pardiv/lundberg.hpp"
#include "pardiv/simulator.hpp"

using namespace pardiv;

namespace {

SimConfig config(std::size_t paths, DiscountMode mode = DiscountMode::PerPayment) {
  SimConfig cfg;
  cfg.n_paths = paths;
  cfg.discount_mode = mode;
  return cfg;
}

}  // namespace

TEST_CASE("renewal value at a zero barrier") {
  const ValidatedModel m = oracle::reference(0.0);
  const SimEstimate pp = simulate_value(m, 0.0, 0.0, config(50000));
  CHECK(std::abs(oracle::z_score(pp.mean, pp.std_error, 15.0 / 10.1)) <= 3.0);
  const SimEstimate tf = simulate_value(m, 0.0, 0.0, config(50000, DiscountMode::TerminalFactor));
  CHECK(std::abs(oracle::z_score(tf.mean, tf.std_error, 0.8 * 15.0 / 10.1)) <= 3.0);
  CHECK(tf.mean < pp.mean);
  CHECK(pp.n_paths == 50000);
  CHECK(pp.truncation_bias_bound <= 1e-8);
}

TEST_CASE("value at the optimal barrier") {
  const ValidatedModel m = oracle::reference(0.0);
  const double a = exp_optimal_barrier(m, 0.0).a;
  const SimEstimate e = simulate_value(m, a, 0.5, config(50000));
  CHECK(std::abs(oracle::z_score(e.mean, e.std_error, exp_value_function(m, 0.0, 0.5))) <= 3.0);
}

TEST_CASE("pure annuity") {
  ModelParams p = reference_params(0.0);
  p.lambda = 1e-6;
  p.r = 1.0;
  const ValidatedModel m = validate(p, ClaimDistribution::exponential(1.0));
  const SimEstimate e = simulate_value(m, 1.0, 1.0, config(2000));
  CHECK(std::abs(e.mean - 15.0 / 0.1) <= 3.0 * e.std_error + e.truncation_bias_bound + 1e-9);
}

TEST_CASE("h estimates") {
  const ValidatedModel m = oracle::reference(2.0);
  const SimEstimate at = simulate_h(m, 0.6, 0.6, config(1000));
  CHECK(at.mean == 1.0);
  CHECK(at.std_error == 0.0);
  const SimEstimate e = simulate_h(m, 0.52202, 0.2, config(50000));
  const double truth = varrho(m, 0.2, 2.0) / varrho(m, 0.52202, 2.0);
  CHECK(std::abs(oracle::z_score(e.mean, e.std_error, truth)) <= 3.0);
}

TEST_CASE("up-crossing estimates") {
  const ValidatedModel m = oracle::reference(2.0);
  const double rho = lundberg_root(m).rho;
  const SimEstimate inf = simulate_upcross(m, 0.5, kNoRuin, config(50000));
  CHECK(std::abs(oracle::z_score(inf.mean, inf.std_error, std::exp(-0.5 * rho))) <= 3.0);
  const SimEstimate none = simulate_upcross(m, 0.5, 0.02, config(5000));
  CHECK(none.mean == 0.0);
  const SimEstimate two = simulate_upcross(m, 0.5, 2.0, config(50000));
  CHECK(std::abs(oracle::z_score(two.mean, two.std_error, upcross_transform(m, 0.5, 2.0).value)) <= 3.0);
}

TEST_CASE("estimates do not depend on the worker count") {
  for (double sigma : {0.0, 0.5}) {
    const ValidatedModel m = oracle::reference(1.0, sigma);
    SimConfig one = config(sigma > 0.0 ? 2000 : 20000);
    one.threads = 1;
    SimConfig many = one;
    many.threads = 5;
    const SimEstimate a = simulate_value(m, 0.7, 0.3, one);
    const SimEstimate b = simulate_value(m, 0.7, 0.3, many);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    SimConfig other = one;
    other.seed = 7;
    CHECK(simulate_value(m, 0.7, 0.3, other).mean != a.mean);
  }
}

TEST_CASE("diffusive h with and without the bridge correction") {
  const ValidatedModel m = oracle::reference(1.0, 0.5);
  SimConfig cfg = config(5000);
  const SimEstimate plain = simulate_h(m, 1.0, 0.7, cfg);
  cfg.brownian_bridge = true;
  const SimEstimate bridged = simulate_h(m, 1.0, 0.7, cfg);
  CHECK(plain.mean > 0.0);
  CHECK(plain.mean < 1.0);
  CHECK(std::abs(plain.mean - bridged.mean) <= 3.0 * (plain.std_error + bridged.std_error));
}
