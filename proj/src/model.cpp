#include "pardiv/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pardiv/errors.hpp"

namespace pardiv {

namespace {

constexpr double kAnalyticTail = 1e-13;
constexpr double kMassTolerance = 1e-8;
constexpr double kTailTolerance = 1e-10;

}  // namespace

double exp_conv_power(double mu, int n, double x) {
  if (n < 1) throw AtomNotDensity("f^{0*} is the point mass at zero");
  if (x < 0.0) throw std::invalid_argument("exp_conv_power needs x >= 0");
  if (x == 0.0) return n == 1 ? mu : 0.0;
  return std::exp(n * std::log(mu) + (n - 1) * std::log(x) - mu * x - std::lgamma(n));
}

ClaimDistribution ClaimDistribution::exponential(double mu) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw ModelError(Violation::InvalidClaimDistribution, "exponential rate must be positive");
  ClaimDistribution d;
  d.kind_ = Kind::Exponential;
  d.mu_ = mu;
  return d;
}

ClaimDistribution ClaimDistribution::tabulated(double step, std::vector<double> density) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw ModelError(Violation::InvalidClaimDistribution, "table step must be positive");
  if (density.size() < 5)
    throw ModelError(Violation::InvalidClaimDistribution, "table needs at least five nodes");
  for (double v : density)
    if (!(v >= 0.0) || !std::isfinite(v))
      throw ModelError(Violation::InvalidClaimDistribution, "density must be finite and >= 0");
  ClaimDistribution d;
  d.kind_ = Kind::Tabulated;
  d.step_ = step;
  d.table_ = GridFunction(0.0, step, std::move(density));
  d.cumulative_ = exp_convolve(0.0, d.table_);
  return d;
}

double ClaimDistribution::density(double x) const {
  if (kind_ == Kind::Exponential) return x < 0.0 ? 0.0 : mu_ * std::exp(-mu_ * x);
  if (x < 0.0 || x > support_max() * (1.0 + 1e-14)) return 0.0;
  return std::max(0.0, table_.at(std::min(x, support_max())));
}

double ClaimDistribution::cdf(double x) const {
  if (x <= 0.0) return 0.0;
  if (kind_ == Kind::Exponential) return -std::expm1(-mu_ * x);
  if (x >= support_max()) return std::min(1.0, cumulative_.values().back());
  return std::clamp(cumulative_.at(x), 0.0, 1.0);
}

double ClaimDistribution::laplace(double s) const {
  if (kind_ == Kind::Exponential) return mu_ / (mu_ + s);
  return dickson(s, table_)[0];
}

double ClaimDistribution::laplace_derivative(double s) const {
  if (kind_ == Kind::Exponential) return -mu_ / ((mu_ + s) * (mu_ + s));
  std::vector<double> xf(table_.size());
  for (std::size_t i = 0; i < xf.size(); ++i) xf[i] = step_ * static_cast<double>(i) * table_[i];
  return -dickson(s, GridFunction(0.0, step_, std::move(xf)))[0];
}

double ClaimDistribution::mean() const {
  if (kind_ == Kind::Exponential) return 1.0 / mu_;
  double s = 0.0;
  const std::size_t n = table_.size();
  for (std::size_t i = 1; i < n; ++i) s += step_ * static_cast<double>(i) * table_[i];
  s -= 0.5 * step_ * static_cast<double>(n - 1) * table_[n - 1];
  return s * step_;
}

double ClaimDistribution::conv_power(int n, double x) const {
  if (kind_ == Kind::Exponential) return x < 0.0 ? 0.0 : exp_conv_power(mu_, n, x);
  if (n < 1) throw AtomNotDensity("f^{0*} is the point mass at zero");
  if (x < 0.0 || x > n * support_max()) return 0.0;
  if (n == 1) return density(x);
  const std::size_t m = static_cast<std::size_t>(std::ceil(x / step_)) + 3;
  std::vector<double> base(m + 1);
  for (std::size_t i = 0; i <= m; ++i) base[i] = i < table_.size() ? table_[i] : 0.0;
  const GridFunction f(0.0, step_, base);
  GridFunction p = f;
  for (int k = 2; k <= n; ++k) p = convolve(f, p);
  return p.at(x);
}

double ClaimDistribution::support_max() const {
  if (kind_ == Kind::Exponential) return -std::log(kAnalyticTail) / mu_;
  return step_ * static_cast<double>(table_.size() - 1);
}

double ClaimDistribution::total_mass() const {
  if (kind_ == Kind::Exponential) return 1.0;
  return cumulative_.values().back();
}

ValidatedModel ValidatedModel::with_delay(double d) const {
  ModelParams p = params_;
  p.d = d;
  return validate(p, *claims_);
}

ValidatedModel validate(const ModelParams& p, const ClaimDistribution& claims) {
  if (!(p.lambda > 0.0) || !std::isfinite(p.lambda))
    throw ModelError(Violation::NonPositiveLambda, "lambda must be positive");
  if (!(p.c > 0.0) || !std::isfinite(p.c))
    throw ModelError(Violation::NonPositivePremium, "premium rate c must be positive");
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma))
    throw ModelError(Violation::NegativeSigma, "sigma must be >= 0");
  if (!(p.q > 0.0) || !std::isfinite(p.q))
    throw ModelError(Violation::NonPositiveDiscount, "discount rate q must be positive");
  if (!(p.r > 0.0 && p.r <= 1.0))
    throw ModelError(Violation::RNotInUnitInterval, "claim discount r must lie in (0, 1]");
  if (!(p.d >= 0.0)) throw ModelError(Violation::NegativeDelay, "delay d must be >= 0");
  if (claims.kind() == ClaimDistribution::Kind::Tabulated) {
    const double mass = claims.total_mass();
    if (std::abs(mass - 1.0) > kMassTolerance)
      throw ModelError(Violation::ClaimMassDefect,
                       "tabulated density integrates to " + std::to_string(mass));
    if (1.0 - mass >= kTailTolerance)
      throw ModelError(Violation::ClaimTailTooHeavy,
                       "mass beyond the table end exceeds 1e-10");
  }
  const double loading = p.c / (p.lambda * claims.mean()) - 1.0;
  if (!(loading > 0.0))
    throw ModelError(Violation::NegativeLoading,
                     "net profit condition c > lambda E[C] fails (loading " +
                         std::to_string(loading) + ")");
  ValidatedModel m;
  m.params_ = p;
  m.loading_ = loading;
  m.claims_ = std::make_shared<const ClaimDistribution>(claims);
  return m;
}

ModelParams reference_params(double d) {
  ModelParams p;
  p.lambda = 10.0;
  p.c = 15.0;
  p.sigma = 0.0;
  p.q = 0.1;
  p.r = 0.8;
  p.d = d;
  return p;
}

}  // namespace pardiv
