#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pardiv/lundberg.hpp"

using namespace pardiv;

namespace {
const double kQuadraticRoot = (-4.9 + std::sqrt(30.01)) / 30.0;  // 15 s^2 + 4.9 s - 0.1 = 0
}

TEST_CASE("psi_r values") {
  const ValidatedModel m = oracle::reference(0.0);
  CHECK(psi_r(m, 0.0) == doctest::Approx(10.0 * (0.8 - 1.0)));
  CHECK(std::abs(psi_r(m, 0.24493) - 0.1) <= 2e-4);
  CHECK(std::abs(psi_r(oracle::reference(0.0, 0.0, 1.0), kQuadraticRoot) - 0.1) <= 1e-12);
}

TEST_CASE("Lundberg root") {
  const ValidatedModel m = oracle::reference(0.0);
  const LundbergRoot root = lundberg_root(m);
  CHECK(std::abs(root.rho - 0.24493) <= 5e-5);
  CHECK(std::abs(root.residual) <= 1e-12);
  CHECK(std::abs(psi_r(m, root.rho) - m.q()) <= 1e-12);
  CHECK(phi_r_of_q(m) == root.rho);

  const LundbergRoot r1 = lundberg_root(oracle::reference(0.0, 0.0, 1.0));
  CHECK(std::abs(r1.rho - kQuadraticRoot) <= 1e-12);
  CHECK(root.rho > r1.rho);

  const ValidatedModel diffusive = oracle::reference(0.0, 1.0);
  const LundbergRoot rs = lundberg_root(diffusive);
  CHECK(rs.rho > 0.0);
  CHECK(std::abs(psi_r(diffusive, rs.rho) - diffusive.q()) <= 1e-12);
}

TEST_CASE("psi_r is convex") {
  for (double sigma : {0.0, 0.5, 2.0}) {
    const ValidatedModel m = oracle::reference(0.0, sigma);
    const double h = 1e-3;
    for (double a = h; a < 10.0; a += 0.05)
      CHECK((psi_r(m, a - h) - 2.0 * psi_r(m, a) + psi_r(m, a + h)) / (h * h) >= -1e-9);
  }
}

TEST_CASE("root identity for exponential claims") {
  const ValidatedModel m = oracle::reference(0.0);
  const double rho = lundberg_root(m).rho;
  CHECK(std::abs(rho + m.lambda() * m.r() / (m.c() * (rho + 1.0)) - (m.lambda() + m.q()) / m.c()) <= 1e-10);
}

TEST_CASE("root decreases in r") {
  double prev = INFINITY;
  for (double r : {0.2, 0.5, 0.8, 1.0}) {
    const double rho = lundberg_root(oracle::reference(0.0, 0.0, r)).rho;
    CHECK(rho < prev);
    prev = rho;
  }
}

TEST_CASE("tabulated claims give the same root") {
  const ValidatedModel t = validate(reference_params(0.0), oracle::tabulated_exponential());
  CHECK(std::abs(lundberg_root(t).rho - lundberg_root(oracle::reference(0.0)).rho) <= 1e-8);
}
