#include "pardiv/firstpassage.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pardiv/errors.hpp"
#include "pardiv/lundberg.hpp"
#include "pardiv/quadrature.hpp"

namespace pardiv {

namespace {

constexpr double kSdCut = 8.0;
constexpr double kDecayExponent = 40.0;

// f^{k*} for k = 1..k_max; analytic for exponential claims, grid convolution otherwise.
class ClaimPowers {
 public:
  ClaimPowers(const ClaimDistribution& f, int k_max, double s_max) : f_(f), k_max_(k_max) {
    if (f.kind() == ClaimDistribution::Kind::Exponential) return;
    double h = f.tabulation_step();
    if (s_max / h > 4000.0) h = s_max / 4000.0;
    const double end = h * std::ceil(s_max / h + 3.0);
    GridFunction base = GridFunction::sample(0.0, end, h, [&f](double x) { return f.density(x); });
    grids_.push_back(base);
    for (int k = 2; k <= k_max; ++k) grids_.push_back(convolve(base, grids_.back()));
  }

  double value(int k, double s) const {
    if (s < 0.0) return 0.0;
    if (f_.kind() == ClaimDistribution::Kind::Exponential) return exp_conv_power(f_.rate(), k, s);
    const GridFunction& g = grids_.at(static_cast<std::size_t>(k - 1));
    return s > g.hi() ? 0.0 : std::max(0.0, g.at(s));
  }

  // sum_{k>=1} e^{-lambda t} (lambda r t)^k / k! f^{k*}(s)
  double aggregate(double lrt, double lt, double s) const {
    if (s < 0.0) return 0.0;
    double sum = 0.0;
    if (f_.kind() == ClaimDistribution::Kind::Exponential) {
      const double mu = f_.rate();
      double term = std::exp(-lt - mu * s) * lrt * mu;
      const double ratio = lrt * mu * s;
      for (int k = 1; k <= k_max_; ++k) {
        sum += term;
        const double next = ratio / ((k + 1.0) * k);
        if (next < 1.0 && term <= 1e-18 * sum) break;
        term *= next;
      }
      return sum;
    }
    double p = std::exp(-lt) * lrt;
    const double cut = lrt + 10.0 * std::sqrt(lrt) + 10.0;
    for (int k = 1; k <= k_max_; ++k) {
      const double term = p * value(k, s);
      sum += term;
      if (k > cut && p <= 1e-18 * std::max(sum, 1e-300)) break;
      p *= lrt / (k + 1.0);
    }
    return sum;
  }

 private:
  const ClaimDistribution& f_;
  int k_max_;
  std::vector<GridFunction> grids_;
};

// E[e^{-beta tau}; tau <= d] for the first passage of c t + sigma W_t above y.
double brownian_passage(double c, double sigma, double beta, double y, double d) {
  const double s2 = sigma * sigma;
  const double gamma = std::sqrt(c * c + 2.0 * beta * s2);
  if (std::isinf(d)) return std::exp((c - gamma) * y / s2);
  const double sd = sigma * std::sqrt(d);
  const double a = std::exp((c - gamma) * y / s2) * quad::normal_cdf((gamma * d - y) / sd);
  const double b = std::exp((c + gamma) * y / s2 + quad::log_normal_cdf((-gamma * d - y) / sd));
  return a + b;
}

// Composite Gauss-Legendre over [a, b] with panels no wider than width.
template <class F>
double gl_panels(F&& f, double a, double b, double width, int order = 16) {
  if (!(b > a)) return 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
  const quad::GaussRule& g = quad::gauss_legendre(order);
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += g.weights[i] * f(mid + 0.5 * h * g.nodes[i]);
    sum += 0.5 * h * s;
  }
  return sum;
}

// E over standard normal zeta of g(m + v zeta), where g vanishes for negative arguments.
template <class G>
double gaussian_smooth(G&& g, double m, double v) {
  const double z0 = std::max(-m / v, -kSdCut);
  if (z0 >= kSdCut) return 0.0;
  return gl_panels([&](double z) { return quad::normal_pdf(z) * g(m + v * z); }, z0, kSdCut, 1.0);
}

double sigma0_tabulated_integral(const ValidatedModel& m, double y, double span, int n) {
  // int_0^span sum_k r^k lambda^k t^{k-1} e^{-(lambda+q) t} / (k! c) f^{k*}(s) ds, t = (y + s) / c.
  const double h = span / n;
  const ClaimDistribution& f = m.claims();
  const int k_max = poisson_tail_cutoff(m.lambda() * m.r() * effective_horizon(m)).k + 1;
  GridFunction base = GridFunction::sample(0.0, span, h, [&f](double x) { return f.density(x); });
  std::vector<GridFunction> powers{base};
  for (int k = 2; k <= k_max; ++k) powers.push_back(convolve(base, powers.back()));
  const double lam = m.lambda(), c = m.c();
  double total = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double t = (y + j * h) / c;
    double p = m.r() * lam * std::exp(-(lam + m.q()) * t) / c;
    double inner = 0.0;
    for (int k = 1; k <= k_max; ++k) {
      inner += p * powers[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j)];
      p *= m.r() * lam * t / (k + 1.0);
    }
    total += (j == 0 || j == n) ? 0.5 * inner : inner;
  }
  return total * h;
}

}  // namespace

PoissonTail poisson_tail_cutoff(double m, double tol, int k_cap) {
  PoissonTail out;
  if (!(m > 0.0)) return out;
  std::vector<double> terms;
  for (int k = 0; k <= k_cap; ++k) {
    const double t = std::exp(k * std::log(m) - std::lgamma(k + 1.0));
    terms.push_back(t);
    if (k > m && t < 1e-40) break;
  }
  double tail = 0.0;
  int K = static_cast<int>(terms.size()) - 1;
  while (K > 0 && tail + terms[static_cast<std::size_t>(K)] < tol) {
    tail += terms[static_cast<std::size_t>(K)];
    --K;
  }
  out.k = std::max(K, 1);
  out.bound = tail;
  return out;
}

double effective_horizon(const ValidatedModel& m) {
  const double decay = m.lambda() * (1.0 - m.r()) + m.q();
  return std::min(m.d(), kDecayExponent / decay);
}

double upcross_support(const ValidatedModel& m) {
  if (m.no_ruin()) return std::numeric_limits<double>::infinity();
  const double D = effective_horizon(m);
  if (m.sigma() == 0.0) return m.c() * D;
  return m.c() * D + kSdCut * m.sigma() * std::sqrt(D);
}

double vy_density(const ValidatedModel& m, double y, int k, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("vy_density requires t > 0");
  if (!(y > 0.0)) throw std::invalid_argument("vy_density requires y > 0");
  if (k < 0) throw std::invalid_argument("vy_density requires k >= 0");
  const double lam = m.lambda(), c = m.c(), sigma = m.sigma();
  if (sigma == 0.0) {
    if (k == 0) throw AtomNotDensity("k = 0 with sigma = 0 is an atom at t = y / c");
    const double s = c * t - y;
    if (s < 0.0) return 0.0;
    const double pre =
        std::exp(k * std::log(lam) - std::lgamma(k + 1.0) + (k - 1) * std::log(t) - lam * t) * y;
    return pre * m.claims().conv_power(k, s);
  }
  const double sd = sigma * std::sqrt(t);
  if (k == 0) return std::exp(-lam * t) * (y / t) * quad::normal_pdf((y - c * t) / sd) / sd;
  const double pre =
      std::exp(k * std::log(lam) - std::lgamma(k + 1.0) + (k - 1) * std::log(t) - lam * t) * y;
  const ClaimPowers powers(m.claims(), k, c * t + kSdCut * sd + 1.0);
  return pre * gaussian_smooth([&](double s) { return powers.value(k, s); }, c * t - y, sd);
}

UpcrossTransform upcross_transform(const ValidatedModel& m, double y, double d) {
  if (!(y >= 0.0)) throw std::invalid_argument("upcross_transform requires y >= 0");
  if (!(d >= 0.0)) throw std::invalid_argument("upcross_transform requires d >= 0");
  UpcrossTransform out;
  out.y = y;
  out.d = d;
  if (y == 0.0) {
    out.value = 1.0;
    return out;
  }
  if (d == kNoRuin) {
    out.value = std::exp(-lundberg_root(m).rho * y);
    return out;
  }
  if (d == 0.0) return out;
  const ValidatedModel md = m.with_delay(d);
  const double D = effective_horizon(md);
  const PoissonTail tail = poisson_tail_cutoff(m.lambda() * m.r() * D);
  out.truncation_k = tail.k;
  out.tail_bound = tail.bound;
  const double lam = m.lambda(), c = m.c(), q = m.q(), r = m.r(), sigma = m.sigma();

  if (sigma == 0.0) {
    if (y > c * d * (1.0 + 1e-15)) return out;
    const double atom = std::exp(-(lam + q) * y / c);
    if (y >= c * D) {
      out.value = atom;
      return out;
    }
    double integral = 0.0;
    if (m.claims().kind() == ClaimDistribution::Kind::Exponential) {
      const ClaimPowers powers(m.claims(), tail.k, 0.0);
      auto integrand = [&](double t) {
        return std::exp(-q * t) * (y / t) * powers.aggregate(lam * r * t, lam * t, c * t - y);
      };
      integral = gl_panels(integrand, y / c, D, 0.125, 20);
    } else {
      const double span = c * D - y;
      const int n = std::max(8, static_cast<int>(std::ceil(span / 0.02)));
      const double coarse = sigma0_tabulated_integral(m, y, span, n);
      const double fine = sigma0_tabulated_integral(m, y, span, 2 * n);
      integral = y * (4.0 * fine - coarse) / 3.0;
    }
    out.value = std::clamp(atom + integral, 0.0, 1.0);
    return out;
  }

  const double base = brownian_passage(c, sigma, lam + q, y, d);
  const ClaimPowers powers(m.claims(), tail.k, c * D + kSdCut * sigma * std::sqrt(D) + 1.0);
  auto inner = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double t = u * u;
    const double g = gaussian_smooth(
        [&](double s) { return powers.aggregate(lam * r * t, lam * t, s); }, c * t - y, sigma * u);
    return 2.0 * y * std::exp(-q * t) * g / u;
  };
  // Geometric partition toward u = 0 resolves the small-time structure at every scale.
  double integral = 0.0;
  double hi = std::sqrt(D);
  for (int level = 0; level < 48 && hi > 1e-9; ++level) {
    const double lo = 0.5 * hi;
    integral += gl_panels(inner, lo, hi, (hi - lo) / 4.0, 20);
    hi = lo;
  }
  out.value = std::clamp(base + integral, 0.0, 1.0);
  return out;
}

double upcross_curve_step(const ValidatedModel& m, double nominal) {
  if (m.sigma() > 0.0) return nominal;
  const double span = m.c() * effective_horizon(m);
  return span / std::ceil(span / nominal - 1e-9);
}

UpcrossCurve upcross_curve_raw(const ValidatedModel& m, double z_max, double h, int time_nodes) {
  if (m.no_ruin() || !(m.d() > 0.0))
    throw std::invalid_argument("upcross curve requires finite d > 0");
  const double lam = m.lambda(), c = m.c(), q = m.q(), r = m.r(), sigma = m.sigma();
  const double D = effective_horizon(m);
  const PoissonTail tail = poisson_tail_cutoff(lam * r * D);
  const int K = tail.k;
  UpcrossCurve out;
  out.truncation_k = K;
  out.tail_bound = tail.bound;
  const ClaimDistribution& f = m.claims();
  const bool expo = f.kind() == ClaimDistribution::Kind::Exponential;

  // Claim convolution powers on the s-grid, stored F[j * K + (k - 1)].
  auto build_powers = [&](std::size_t M) {
    std::vector<double> F((M + 1) * static_cast<std::size_t>(K));
    if (expo) {
      const double mu = f.rate();
      for (std::size_t j = 0; j <= M; ++j) {
        const double s = h * static_cast<double>(j);
        double v = mu * std::exp(-mu * s);
        for (int k = 1; k <= K; ++k) {
          F[j * K + (k - 1)] = v;
          v *= mu * s / k;
        }
      }
    } else {
      GridFunction base = GridFunction::sample(0.0, h * static_cast<double>(M), h,
                                               [&f](double x) { return f.density(x); });
      GridFunction p = base;
      for (int k = 1; k <= K; ++k) {
        if (k > 1) p = convolve(base, p);
        for (std::size_t j = 0; j <= M; ++j) F[j * K + (k - 1)] = p[j];
      }
    }
    return F;
  };

  if (sigma == 0.0) {
    const double span = c * D;
    const double count = span / h;
    const auto M = static_cast<std::size_t>(std::llround(count));
    if (std::abs(count - static_cast<double>(M)) > 1e-8 * std::max(1.0, count))
      throw GridError("curve step must divide c * horizon");
    const std::size_t nz = std::min(M, static_cast<std::size_t>(std::floor(z_max / h + 1e-9)));
    const std::vector<double> F = build_powers(M);
    std::vector<double> P((M + 1) * static_cast<std::size_t>(K));
    std::vector<int> kmax(M + 1, K);
    for (std::size_t mm = 0; mm <= M; ++mm) {
      const double t = h * static_cast<double>(mm) / c;
      double p = r * lam * std::exp(-(lam + q) * t) / c;
      double peak = 0.0;
      for (int k = 1; k <= K; ++k) {
        P[mm * K + (k - 1)] = p;
        peak = std::max(peak, p);
        if (k > lam * r * t && p < 1e-22 * peak) {
          kmax[mm] = k;
          break;
        }
        p *= r * lam * t / (k + 1.0);
      }
    }
    std::vector<double> phi(nz + 1);
    for (std::size_t i = 0; i <= nz; ++i) {
      const double z = h * static_cast<double>(i);
      const double atom = z <= c * m.d() * (1.0 + 1e-15) ? std::exp(-(lam + q) * z / c) : 0.0;
      const std::size_t jmax = M - i;
      double acc = 0.0;
      for (std::size_t j = 0; j <= jmax; ++j) {
        const std::size_t mm = i + j;
        const double* Pm = &P[mm * K];
        const double* Fj = &F[j * K];
        const int kk = kmax[mm];
        double inner = 0.0;
        for (int k = 0; k < kk; ++k) inner += Pm[k] * Fj[k];
        acc += (j == 0 || j == jmax) ? 0.5 * inner : inner;
      }
      phi[i] = atom + (jmax > 0 ? z * h * acc : 0.0);
    }
    out.phi = GridFunction(0.0, h, std::move(phi));
    return out;
  }

  // sigma > 0: time nodes u = sqrt(t), Gaussian smoothing of the piecewise-linear aggregate.
  const double smax = c * D + kSdCut * sigma * std::sqrt(D);
  const auto Ms = static_cast<std::size_t>(std::ceil(smax / h));
  const std::size_t nz =
      std::min(Ms, static_cast<std::size_t>(std::floor(std::min(z_max, smax) / h + 1e-9)));
  const std::vector<double> F = build_powers(Ms);
  std::vector<double> phi(nz + 1);
  for (std::size_t i = 0; i <= nz; ++i)
    phi[i] = brownian_passage(c, sigma, lam + q, h * static_cast<double>(i), m.d());

  const int nu = time_nodes + (time_nodes % 2);
  const double du = std::sqrt(D) / nu;
  const std::size_t nm = Ms + nz + 2;
  std::vector<double> A(Ms + 1), D0(nm), D1(nm), cdf(nm + 1), pdf(nm + 1), tau(nm + 1);
  std::vector<double> acc(nz + 1, 0.0);
  for (int n = 1; n <= nu; ++n) {
    const double u = du * n;
    const double t = u * u;
    const double st = sigma * u;
    const double simpson = (n == nu) ? 1.0 : (n % 2 == 1 ? 4.0 : 2.0);
    const double weight = simpson * du / 3.0 * 2.0 * std::exp(-q * t) / u;
    const double lrt = lam * r * t;
    for (std::size_t j = 0; j <= Ms; ++j) {
      double p = std::exp(-lam * t) * lrt;
      double a = 0.0;
      const double* Fj = &F[j * K];
      for (int k = 1; k <= K; ++k) {
        a += p * Fj[k - 1];
        if (k > lrt + 10.0 * std::sqrt(lrt) + 10.0) break;
        p *= lrt / (k + 1.0);
      }
      A[j] = a;
    }
    // Standardized panel ends tau_m = (m h - c t) / st, with m = i + j.
    const double ct = c * t;
    long mlo = static_cast<long>(std::floor((ct - (kSdCut + 1.0) * st) / h)) - 1;
    long mhi = static_cast<long>(std::ceil((ct + (kSdCut + 1.0) * st) / h)) + 1;
    mlo = std::max(mlo, 0L);
    mhi = std::min(mhi, static_cast<long>(nm) - 1);
    if (mhi <= mlo) continue;
    for (long mm = mlo; mm <= mhi + 1; ++mm) {
      const double x = (h * static_cast<double>(mm) - ct) / st;
      tau[mm] = x;
      cdf[mm] = x > 0.0 ? quad::normal_cdf(-x) : quad::normal_cdf(x);  // tail probability
      pdf[mm] = quad::normal_pdf(x);
    }
    for (long mm = mlo; mm <= mhi; ++mm) {
      const double a = tau[mm], b = tau[mm + 1];
      double d0;
      if (a >= 0.0) d0 = cdf[mm] - cdf[mm + 1];
      else if (b <= 0.0) d0 = cdf[mm + 1] - cdf[mm];
      else d0 = 1.0 - cdf[mm] - cdf[mm + 1];
      D0[mm] = d0;
      D1[mm] = st * ((pdf[mm] - pdf[mm + 1]) - a * d0) / h;
    }
    for (std::size_t i = 0; i <= nz; ++i) {
      const long jlo = std::max(0L, mlo - static_cast<long>(i));
      const long jhi = std::min(static_cast<long>(Ms) - 1, mhi - static_cast<long>(i));
      double qsum = 0.0;
      for (long j = jlo; j <= jhi; ++j) {
        const std::size_t mm = i + static_cast<std::size_t>(j);
        qsum += A[j] * (D0[mm] - D1[mm]) + A[j + 1] * D1[mm];
      }
      acc[i] += weight * qsum;
    }
  }
  for (std::size_t i = 0; i <= nz; ++i) phi[i] += h * static_cast<double>(i) * acc[i];
  out.phi = GridFunction(0.0, h, std::move(phi));
  return out;
}

UpcrossCurve upcross_curve(const ValidatedModel& m, double z_max, double step) {
  const double H = upcross_curve_step(m, step);
  UpcrossCurve coarse = upcross_curve_raw(m, z_max, H);
  UpcrossCurve fine = upcross_curve_raw(m, z_max, 0.5 * H);
  const std::size_t n = std::min(coarse.phi.size(), (fine.phi.size() + 1) / 2);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (4.0 * fine.phi[2 * i] - coarse.phi[i]) / 3.0;
  coarse.phi = GridFunction(0.0, H, std::move(v));
  return coarse;
}

}  // namespace pardiv
