#include "pardiv/hfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pardiv/errors.hpp"
#include "pardiv/expmodel.hpp"
#include "pardiv/firstpassage.hpp"
#include "pardiv/lundberg.hpp"

namespace pardiv {

namespace {

double round_up(double x, double h) { return h * std::ceil(x / h - 1e-9); }

GridFunction zeros(double hi, double h) {
  return GridFunction::sample(0.0, round_up(hi, h), h, [](double) { return 0.0; });
}

struct CurveProducts {
  GridFunction phi;
  GridFunction w;
};

// Phi_d and w_d(x) = int Phi_d(z) f(z + x) dz, both Richardson-extrapolated from two steps.
CurveProducts curve_products(const ValidatedModel& m, double x_max, double nominal) {
  const double H = upcross_curve_step(m, nominal);
  const double z_cap = std::min(upcross_support(m), m.claims().support_max());
  const auto nx = static_cast<std::size_t>(std::ceil(x_max / H - 1e-9)) + 3;
  std::vector<double> w_level[2];
  GridFunction phi_level[2];
  for (int level = 0; level < 2; ++level) {
    const double h = level == 0 ? 0.5 * H : H;
    const int ratio = level == 0 ? 2 : 1;
    phi_level[level] = upcross_curve_raw(m, z_cap, h).phi;
    const GridFunction& phi = phi_level[level];
    const std::size_t nz = phi.size() - 1;
    const std::size_t nf = nz + nx * ratio + 1;
    std::vector<double> f(nf);
    for (std::size_t k = 0; k < nf; ++k) f[k] = m.claims().density(h * static_cast<double>(k));
    std::vector<double>& w = w_level[level];
    w.assign(nx + 1, 0.0);
    for (std::size_t i = 0; i <= nx; ++i) {
      const std::size_t off = i * ratio;
      double s = 0.0;
      for (std::size_t j = 0; j <= nz; ++j) {
        const double v = phi[j] * f[j + off];
        s += (j == 0 || j == nz) ? 0.5 * v : v;
      }
      w[i] = s * h;
    }
  }
  std::vector<double> w(nx + 1);
  for (std::size_t i = 0; i <= nx; ++i) w[i] = (4.0 * w_level[0][i] - w_level[1][i]) / 3.0;
  const std::size_t np = std::min(phi_level[1].size(), (phi_level[0].size() + 1) / 2);
  std::vector<double> phi(np);
  for (std::size_t i = 0; i < np; ++i)
    phi[i] = (4.0 * phi_level[0][2 * i] - phi_level[1][i]) / 3.0;
  return {GridFunction(0.0, H, std::move(phi)), GridFunction(0.0, H, std::move(w))};
}

GridFunction resample(const GridFunction& g, double hi, double h) {
  return GridFunction::sample(0.0, hi, h, [&g](double x) { return g.at(x); });
}

// Integro-differential residual at nodes 0..i_end (unnormalized); xi_minus = xi(-h).
// Fourth-order stencils, except the three-point stencil through xi(-h) at 0 when sigma > 0.
std::vector<double> residual_vector(const HContext& ctx, const GridFunction& xi, double xi_minus,
                                    std::size_t i_end) {
  const ValidatedModel& m = *ctx.model;
  const double h = xi.step();
  const double half_s2 = 0.5 * m.sigma() * m.sigma();
  const GridFunction fx = convolve(ctx.f, xi, Quadrature::Gregory);
  std::vector<double> res(i_end + 1, 0.0);
  // sigma > 0 and d = 0: xi(0) = 0 is a boundary condition, not an equation.
  const std::size_t first = (half_s2 > 0.0 && m.d() == 0.0) ? 1 : 0;
  // xi is smooth across 0 only when sigma > 0 and d > 0.
  const bool smooth_at_zero = half_s2 > 0.0 && m.d() > 0.0;
  for (std::size_t i = first; i <= i_end; ++i) {
    double d1 = 0.0, d2 = 0.0;
    if (i == 0 && half_s2 > 0.0) {
      d1 = (xi[1] - xi_minus) / (2.0 * h);
      d2 = (xi[1] - 2.0 * xi[0] + xi_minus) / (h * h);
    } else if (i == 0) {
      d1 = (-25.0 * xi[0] + 48.0 * xi[1] - 36.0 * xi[2] + 16.0 * xi[3] - 3.0 * xi[4]) / (12.0 * h);
    } else if (i == 1 && !smooth_at_zero) {
      d1 = (-3.0 * xi[0] - 10.0 * xi[1] + 18.0 * xi[2] - 6.0 * xi[3] + xi[4]) / (12.0 * h);
      d2 = (10.0 * xi[0] - 15.0 * xi[1] - 4.0 * xi[2] + 14.0 * xi[3] - 6.0 * xi[4] + xi[5]) /
           (12.0 * h * h);
    } else {
      const double m2 = i == 1 ? xi_minus : xi[i - 2];
      d1 = (-xi[i + 2] + 8.0 * xi[i + 1] - 8.0 * xi[i - 1] + m2) / (12.0 * h);
      d2 = (-xi[i + 2] + 16.0 * xi[i + 1] - 30.0 * xi[i] + 16.0 * xi[i - 1] - m2) / (12.0 * h * h);
    }
    res[i] = half_s2 * d2 + m.c() * d1 - (m.lambda() + m.q()) * xi[i] +
             m.lambda() * m.r() * (fx[i] + xi[0] * ctx.w[i]);
  }
  return res;
}

std::size_t last_node_at_or_below(const GridFunction& g, double a) {
  return static_cast<std::size_t>(std::floor((a - g.lo()) / g.step() + 1e-9));
}

double working_end(double a, const HOptions& o) {
  const double base = o.x_ext > 0.0 ? std::max(o.x_ext, a) : a + 0.5;
  return base + 8.0 * o.step;
}

HFunction finalize(std::shared_ptr<const HContext> ctx, GridFunction xi, double a, double p) {
  const ValidatedModel& m = *ctx->model;
  HFunction H;
  H.context = std::move(ctx);
  H.xi_prime_zero = p;
  H.xi_d1 = derivative(xi, 1);
  H.xi_d2 = derivative(xi, 2);
  if (m.sigma() == 0.0) {
    // Read the derivatives off the equation itself: c xi' = (lambda + q) xi - lambda r (f * xi + xi(0) w).
    const HContext& ctx = *H.context;
    const double lr = m.lambda() * m.r(), lq = m.lambda() + m.q();
    const GridFunction fx = convolve(ctx.f, xi, Quadrature::Gregory);
    for (std::size_t i = 0; i < xi.size(); ++i)
      H.xi_d1[i] = (lq * xi[i] - lr * (fx[i] + xi[0] * ctx.w[i])) / m.c();
    const GridFunction fx1 = convolve(ctx.f, H.xi_d1, Quadrature::Gregory);
    const GridFunction w1 = derivative(ctx.w, 1);
    for (std::size_t i = 0; i < xi.size(); ++i)
      H.xi_d2[i] = (lq * H.xi_d1[i] - lr * (ctx.f[i] * xi[0] + fx1[i] + xi[0] * w1[i])) / m.c();
  } else {
    const double hh = xi.step();
    const double left = xi[0] * H.context->phi_step;
    H.xi_d1[0] = (xi[1] - left) / (2.0 * hh);
    H.xi_d2[0] = (xi[1] - 2.0 * xi[0] + left) / (hh * hh);
  }
  H.xi = std::move(xi);
  return H.with_barrier(a);
}

}  // namespace

Continuation Continuation::zero() { return Continuation(); }

Continuation Continuation::exponential(double rho) {
  Continuation c;
  c.kind_ = Kind::Exponential;
  c.rho_ = rho;
  c.support_ = std::numeric_limits<double>::infinity();
  return c;
}

Continuation Continuation::grid(const ValidatedModel& model, GridFunction phi, double support) {
  Continuation c;
  c.kind_ = Kind::Grid;
  c.phi_ = std::move(phi);
  c.support_ = support;
  c.model_ = std::make_shared<const ValidatedModel>(model);
  return c;
}

double Continuation::operator()(double z) const {
  if (z <= 0.0) return 1.0;
  switch (kind_) {
    case Kind::Zero: return 0.0;
    case Kind::Exponential: return std::exp(-rho_ * z);
    case Kind::Grid:
      if (z > support_) return 0.0;
      if (z <= phi_.hi()) return std::clamp(phi_.at(z), 0.0, 1.0);
      return upcross_transform(*model_, z, model_->d()).value;
  }
  return 0.0;
}

std::shared_ptr<const HContext> make_h_context(const ValidatedModel& m, double x_end,
                                               const HOptions& o) {
  auto ctx = std::make_shared<HContext>();
  ctx->model = std::make_shared<const ValidatedModel>(m);
  const double h = o.step;
  const double X = round_up(x_end, h);
  ctx->rho = lundberg_root(m).rho;
  const ClaimDistribution& claims = m.claims();
  const double f_end = round_up(std::max(X, claims.support_max()), h);
  const GridFunction f_full =
      GridFunction::sample(0.0, f_end, h, [&claims](double x) { return claims.density(x); });
  ctx->trho_f = dickson(ctx->rho, f_full).slice(0.0, X);
  ctx->f = f_full.slice(0.0, X);

  const bool expo = claims.kind() == ClaimDistribution::Kind::Exponential;
  if (m.d() == 0.0) {
    ctx->w = zeros(X, h);
    ctx->continuation = Continuation::zero();
    ctx->phi_step = 0.0;
  } else if (m.no_ruin()) {
    ctx->w = ctx->trho_f;
    ctx->continuation = Continuation::exponential(ctx->rho);
    ctx->phi_step = std::exp(-ctx->rho * h);
  } else {
    const CurveProducts cp = curve_products(m, X, o.continuation_step);
    if (expo && m.sigma() == 0.0) {
      const double mu = claims.rate(), u = u_of_d(m, m.d());
      ctx->w = GridFunction::sample(0.0, X, h, [mu, u](double x) { return u * std::exp(-mu * x); });
    } else {
      ctx->w = resample(cp.w, X, h);
    }
    ctx->continuation = Continuation::grid(m, cp.phi, upcross_support(m));
    ctx->phi_step = m.sigma() > 0.0 ? upcross_transform(m, h, m.d()).value : ctx->continuation(h);
  }
  return ctx;
}

WdFunction w_d_curve(const ValidatedModel& m, double x_max, const HOptions& o) {
  const double H = o.continuation_step;
  const double X = round_up(x_max, H);
  const ClaimDistribution& claims = m.claims();
  if (m.d() == 0.0) return {zeros(X, H)};
  if (m.no_ruin()) {
    const double rho = lundberg_root(m).rho;
    return {dickson(rho, [&claims](double x) { return claims.density(x); }, 0.0, X, H,
                    std::max(X, claims.support_max()))};
  }
  if (claims.kind() == ClaimDistribution::Kind::Exponential && m.sigma() == 0.0) {
    const double mu = claims.rate(), u = u_of_d(m, m.d());
    return {GridFunction::sample(0.0, X, H, [mu, u](double x) { return u * std::exp(-mu * x); })};
  }
  const CurveProducts cp = curve_products(m, X, H);
  return {cp.w.slice(0.0, std::min(cp.w.hi(), X + 2.0 * cp.w.step()))};
}

double w_d(const ValidatedModel& m, double x) {
  if (!(x >= 0.0)) throw std::invalid_argument("w_d requires x >= 0");
  if (m.d() == 0.0) return 0.0;
  const ClaimDistribution& claims = m.claims();
  if (claims.kind() == ClaimDistribution::Kind::Exponential && m.sigma() == 0.0)
    return u_of_d(m, m.d()) * std::exp(-claims.rate() * x);
  return w_d_curve(m, x + 0.1).grid.at(x);
}

double HFunction::value(double x) const {
  if (x >= 0.0) return xi.at(x) * scale;
  return xi[0] * context->continuation(-x) * scale;
}

double HFunction::d1(double x) const {
  if (x >= 0.0) return xi_d1.at(x) * scale;
  const double e = 1e-4;
  return (value(x + e) - value(x - e)) / (2.0 * e);
}

double HFunction::d2(double x) const {
  if (x >= 0.0) return xi_d2.at(x) * scale;
  const double e = 1e-3;
  return (value(x + e) - 2.0 * value(x) + value(x - e)) / (e * e);
}

HFunction HFunction::with_barrier(double new_a) const {
  if (!(new_a >= 0.0) || new_a > xi.hi() - 2.0 * xi.step())
    throw std::invalid_argument("barrier outside the working grid");
  HFunction H = *this;
  H.a = new_a;
  const double xa = xi.at(new_a);
  if (!(xa > 0.0)) throw std::runtime_error("degenerate h: xi(a) <= 0");
  H.scale = 1.0 / xa;
  const std::size_t ia = std::max<std::size_t>(last_node_at_or_below(xi, new_a), 1);
  auto scaled = [&](const GridFunction& g) {
    std::vector<double> v(g.values().begin(), g.values().begin() + static_cast<long>(ia) + 1);
    for (double& e : v) e *= H.scale;
    return GridFunction(0.0, g.step(), std::move(v));
  };
  H.grid = scaled(xi);
  H.hp = scaled(xi_d1);
  H.hpp = scaled(xi_d2);
  H.ide_residual = pardiv::ide_residual(*context->model, H);
  return H;
}

double ide_residual(const ValidatedModel& m, const HFunction& H) {
  (void)m;
  const HContext& ctx = *H.context;
  const std::size_t ia = last_node_at_or_below(H.xi, H.a);
  const std::size_t i_end = std::min(ia, H.xi.size() - 3);
  const auto res = residual_vector(ctx, H.xi, H.xi[0] * ctx.phi_step, i_end);
  double worst = 0.0;
  for (double r : res) worst = std::max(worst, std::abs(r));
  return worst * std::abs(H.scale);
}

HFunction h_d_sigma0(const ValidatedModel& m, double a, const HOptions& o) {
  if (m.sigma() != 0.0) throw std::invalid_argument("h_d_sigma0 requires sigma = 0");
  if (!(a >= 0.0)) throw std::invalid_argument("barrier must be >= 0");
  auto ctx = make_h_context(m, working_end(a, o), o);
  const double rho = ctx->rho;
  const double coeff = m.lambda() * m.r() / m.c();
  const GridFunction& T = ctx->trho_f;
  const GridFunction zeta_w = exp_convolve(-rho, ctx->w);
  GridFunction forcing = GridFunction::sample(0.0, T.hi(), T.step(),
                                              [rho](double x) { return std::exp(rho * x); });
  for (std::size_t i = 0; i < forcing.size(); ++i) forcing[i] -= coeff * zeta_w[i];
  GridFunction xi;
  if (o.use_series) {
    try {
      xi = neumann_series(T, forcing, coeff, 1e-13, 200, o.rule).solution;
    } catch (const ConvergenceError&) {
      xi = volterra_march(T, forcing, coeff, o.rule);
    }
  } else {
    xi = volterra_march(T, forcing, coeff, o.rule);
  }
  const double p = derivative(xi, 1)[0];
  return finalize(std::move(ctx), std::move(xi), a, p);
}

namespace {

struct SigmaPosParts {
  std::shared_ptr<const HContext> ctx;
  GridFunction xi_a;  // xi(0) = 1, xi'(0) = 0 (zero for d = 0)
  GridFunction xi_b;  // xi(0) = 0, xi'(0) = 1
};

SigmaPosParts sigma_pos_parts(const ValidatedModel& m, double a, const HOptions& o) {
  if (!(m.sigma() > 0.0)) throw std::invalid_argument("h_d_sigma_pos requires sigma > 0");
  if (!(a >= 0.0)) throw std::invalid_argument("barrier must be >= 0");
  SigmaPosParts parts;
  HOptions fine = o;
  fine.step = o.step / o.diffusion_refine;
  parts.ctx = make_h_context(m, working_end(a, fine), fine);
  const HContext& ctx = *parts.ctx;
  const double rho = ctx.rho;
  const double s2 = m.sigma() * m.sigma();
  const double kappa = rho + 2.0 * m.c() / s2;
  const double coeff = 2.0 * m.lambda() * m.r() / s2;
  const GridFunction& T = ctx.trho_f;
  const GridFunction kernel = exp_convolve(kappa, T);
  const double h = T.step(), X = T.hi();
  const GridFunction zeta_beta = GridFunction::sample(0.0, X, h, [rho, kappa](double x) {
    return (std::exp(rho * x) - std::exp(-kappa * x)) / (rho + kappa);
  });
  parts.xi_b = volterra_march(kernel, zeta_beta, coeff, o.rule);
  if (m.d() == 0.0) {
    parts.xi_a = zeros(X, h);
    return parts;
  }
  const GridFunction zbw = exp_convolve(-rho, exp_convolve(kappa, ctx.w));
  GridFunction forcing = GridFunction::sample(0.0, X, h, [kappa](double x) {
    return std::exp(-kappa * x);
  });
  for (std::size_t i = 0; i < forcing.size(); ++i)
    forcing[i] += kappa * zeta_beta[i] - coeff * zbw[i];
  parts.xi_a = volterra_march(kernel, forcing, coeff, o.rule);
  return parts;
}

struct ShotResult {
  double p;
  double residual;
};

ShotResult shoot(const SigmaPosParts& parts, double a) {
  const HContext& ctx = *parts.ctx;
  const GridFunction& A = parts.xi_a;
  const GridFunction& B = parts.xi_b;
  const std::size_t ia = last_node_at_or_below(A, a);
  const std::size_t i_end = std::min(ia, A.size() - 3);
  const auto ra = residual_vector(ctx, A, A[0] * ctx.phi_step, i_end);
  const auto rb = residual_vector(ctx, B, 0.0, i_end);
  const double a_val = A.at(a), b_val = B.at(a);
  auto objective = [&](double p) {
    double worst = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) worst = std::max(worst, std::abs(ra[i] + p * rb[i]));
    return worst / std::abs(a_val + p * b_val);
  };
  const double h = A.step();
  const double p0 = (1.0 - ctx.phi_step) / h;
  const double span = std::max(1.0, std::abs(p0));
  double lo = p0 - span, hi = p0 + span;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = objective(x1), f2 = objective(x2);
  for (int it = 0; it < 300 && hi - lo > 1e-13 * std::max(1.0, std::abs(lo)); ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = objective(x2);
    }
  }
  const double p = 0.5 * (lo + hi);
  return {p, objective(p)};
}

}  // namespace

double shooting_residual(const ValidatedModel& m, double a, double p, const HOptions& o) {
  const SigmaPosParts parts = sigma_pos_parts(m, a, o);
  GridFunction xi = parts.xi_a;
  for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += p * parts.xi_b[i];
  HFunction H = finalize(parts.ctx, std::move(xi), a, p);
  return H.ide_residual;
}

double shoot_xi_prime_zero(const ValidatedModel& m, double a, const HOptions& o) {
  if (m.d() == 0.0) return 1.0;
  const SigmaPosParts parts = sigma_pos_parts(m, a, o);
  const ShotResult shot = shoot(parts, a);
  if (!(shot.residual <= o.shoot_tol))
    throw ConvergenceError("shooting residual floor above tolerance", shot.residual);
  return shot.p;
}

HFunction h_d_sigma_pos(const ValidatedModel& m, double a, const HOptions& o) {
  const SigmaPosParts parts = sigma_pos_parts(m, a, o);
  double p = 1.0;
  GridFunction xi = parts.xi_b;
  if (m.d() > 0.0) {
    const ShotResult shot = shoot(parts, a);
    if (!(shot.residual <= o.shoot_tol))
      throw ConvergenceError("shooting residual floor above tolerance", shot.residual);
    p = shot.p;
    xi = parts.xi_a;
    for (std::size_t i = 0; i < xi.size(); ++i) xi[i] += p * parts.xi_b[i];
  }
  return finalize(parts.ctx, std::move(xi), a, p);
}

HFunction h_d(const ValidatedModel& m, double a, const HOptions& o) {
  return m.sigma() == 0.0 ? h_d_sigma0(m, a, o) : h_d_sigma_pos(m, a, o);
}

}  // namespace pardiv
