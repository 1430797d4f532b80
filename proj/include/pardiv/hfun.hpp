#pragma once

#include <memory>

#include "pardiv/gridmath.hpp"
#include "pardiv/model.hpp"

namespace pardiv {

struct HOptions {
  double step = 1e-3;               // working grid step
  double continuation_step = 0.02;  // grid for the up-crossing transform and w_d
  double x_ext = 0.0;               // right end of the working grid; 0 means a + 0.5
  bool use_series = false;          // Neumann series instead of marching (sigma = 0)
  Quadrature rule = Quadrature::Gregory;
  double shoot_tol = 1e-4;
  int diffusion_refine = 4;         // sigma > 0 solves on step / diffusion_refine
};

/// x -> E_0[r^N e^{-q tau_x}; tau_x < d] for x >= 0, used as h(-x) / h(0).
class Continuation {
 public:
  static Continuation zero();
  static Continuation exponential(double rho);
  static Continuation grid(const ValidatedModel& model, GridFunction phi, double support);

  double operator()(double z) const;
  /// Level beyond which the transform vanishes (infinite for the no-ruin sentinel).
  double support() const { return support_; }

 private:
  enum class Kind { Zero, Exponential, Grid } kind_ = Kind::Zero;
  double rho_ = 0.0;
  double support_ = 0.0;
  GridFunction phi_;
  std::shared_ptr<const ValidatedModel> model_;
};

struct WdFunction {
  GridFunction grid;  // w_d on [0, x_max]
};

/// Shared inputs of the h construction on [0, X]: claim density, T_rho f, w_d, continuation.
struct HContext {
  std::shared_ptr<const ValidatedModel> model;
  double rho = 0.0;
  GridFunction f;        // claim density on the working grid
  GridFunction trho_f;   // T_rho f
  GridFunction w;        // w_d
  Continuation continuation;
  double phi_step = 1.0; // accurate continuation value at one grid step
};

/// Builds the shared inputs on [0, x_end] (x_end is rounded up to the grid).
std::shared_ptr<const HContext> make_h_context(const ValidatedModel& model, double x_end,
                                               const HOptions& options = {});

/// h^d and derivatives. xi is the unnormalized solution on the whole working grid.
struct HFunction {
  GridFunction grid;  // h on the nodes of [0, a]
  GridFunction hp;
  GridFunction hpp;
  double a = 0.0;
  double xi_prime_zero = 0.0;
  double ide_residual = 0.0;

  GridFunction xi;
  GridFunction xi_d1;
  GridFunction xi_d2;
  double scale = 1.0;  // 1 / xi(a)
  std::shared_ptr<const HContext> context;

  /// h(x): continuation below 0, xi / xi(a) on the working grid.
  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;

  /// Same solution normalized at another barrier inside the working grid.
  HFunction with_barrier(double a) const;
};

WdFunction w_d_curve(const ValidatedModel& model, double x_max, const HOptions& options = {});
double w_d(const ValidatedModel& model, double x);

HFunction h_d_sigma0(const ValidatedModel& model, double a, const HOptions& options = {});
HFunction h_d_sigma_pos(const ValidatedModel& model, double a, const HOptions& options = {});
/// Dispatches on sigma.
HFunction h_d(const ValidatedModel& model, double a, const HOptions& options = {});

double shoot_xi_prime_zero(const ValidatedModel& model, double a, const HOptions& options = {});

/// sup over the grid nodes of [0, a] of the integro-differential residual of h.
double ide_residual(const ValidatedModel& model, const HFunction& h);

/// Residual for a given xi'(0) (sigma > 0); used to certify the shooting minimum.
double shooting_residual(const ValidatedModel& model, double a, double xi_prime_zero,
                         const HOptions& options = {});

}  // namespace pardiv
