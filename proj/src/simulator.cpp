#include "pardiv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace pardiv {

namespace {

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();
constexpr double kWeightFloor = 1e-13;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

class ClaimSampler {
 public:
  explicit ClaimSampler(const ClaimDistribution& dist) : dist_(dist) {
    if (dist.kind() == ClaimDistribution::Kind::Tabulated) {
      const double h = dist.tabulation_step();
      const std::size_t n = dist.table().size();
      x_.resize(n);
      cdf_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        x_[i] = h * static_cast<double>(i);
        cdf_[i] = dist.cdf(x_[i]);
      }
      for (std::size_t i = 1; i < n; ++i) cdf_[i] = std::max(cdf_[i], cdf_[i - 1]);
    }
  }

  double operator()(Rng& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (dist_.kind() == ClaimDistribution::Kind::Exponential)
      return -std::log1p(-unif(rng)) / dist_.rate();
    const double u = unif(rng) * cdf_.back();
    const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.begin()) return 0.0;
    if (it == cdf_.end()) return x_.back();
    const std::size_t j = static_cast<std::size_t>(it - cdf_.begin());
    const double span = cdf_[j] - cdf_[j - 1];
    const double frac = span > 0.0 ? (u - cdf_[j - 1]) / span : 0.0;
    return x_[j - 1] + frac * (x_[j] - x_[j - 1]);
  }

 private:
  const ClaimDistribution& dist_;
  std::vector<double> x_;
  std::vector<double> cdf_;
};

enum class Task { Value, H, Upcross };

struct Job {
  Task task;
  double level;   // barrier a, or target y
  double start;   // initial surplus
  double clock;   // Parisian delay, or time horizon for Upcross
};

struct Outcome {
  double value = 0.0;
  double bound = 0.0;  // bound on the neglected remainder
};

class PathSimulator {
 public:
  PathSimulator(const ValidatedModel& m, const Job& job, const SimConfig& cfg)
      : m_(m), job_(job), cfg_(cfg), claims_(m.claims()) {
    const double c = m.c(), q = m.q();
    t_max_ = cfg.t_max > 0.0 ? cfg.t_max : std::log(c / (q * 1e-10)) / q;
  }

  Outcome run(Rng& rng) const {
    State s;
    s.u = job_.start;
    if (job_.task != Task::Upcross && s.u < 0.0) s.exc = 0.0;
    if (job_.task == Task::H && s.u >= job_.level) return {1.0, 0.0};
    if (job_.task == Task::Value && s.u > job_.level) {
      // Lump-sum payment of the excess at time 0.
      s.acc = s.u - job_.level;
      s.u = job_.level;
    }
    std::exponential_distribution<double> inter(m_.lambda());
    while (true) {
      const double weight = std::pow(m_.r(), s.k) * std::exp(-m_.q() * s.t);
      if (auto stop = stop_check(s, weight)) return *stop;
      const double next_claim = s.t + inter(rng);
      const Step step = m_.sigma() == 0.0 ? drift_until(s, next_claim) : diffuse_until(s, next_claim, rng);
      if (step.done) return step.outcome;
      // Claim at s.t.
      const bool was_above = s.u >= 0.0;
      ++s.k;
      s.u -= claims_(rng);
      if (job_.task != Task::Upcross && s.u < 0.0 && was_above) {
        if (job_.clock == 0.0) return ruin(s);
        s.exc = s.t;
      }
    }
  }

 private:
  struct State {
    double t = 0.0;
    double u = 0.0;
    int k = 0;
    double exc = kNone;  // start of the current excursion below zero
    double acc = 0.0;    // accumulated discounted dividends (without r^k in TerminalFactor)
  };
  struct Step {
    bool done = false;
    Outcome outcome;
  };

  double claim_factor(int k) const { return std::pow(m_.r(), k); }
  bool per_payment() const { return cfg_.discount_mode == DiscountMode::PerPayment; }

  std::optional<Outcome> stop_check(const State& s, double weight) const {
    const double future = m_.c() / m_.q() * std::exp(-m_.q() * s.t);
    if (job_.task == Task::Value) {
      if (per_payment()) {
        const double bound = claim_factor(s.k) * future;
        if (bound < kWeightFloor || s.t > t_max_) return Outcome{s.acc, bound};
      } else {
        const double bound = claim_factor(s.k) * (s.acc + future);
        if (bound < kWeightFloor) return Outcome{0.0, bound};
        if (s.t > t_max_) return Outcome{claim_factor(s.k) * s.acc, bound};
      }
      return std::nullopt;
    }
    if (weight < kWeightFloor || s.t > t_max_) return Outcome{0.0, weight};
    if (job_.task == Task::Upcross && s.t >= job_.clock) return Outcome{0.0, 0.0};
    return std::nullopt;
  }

  Outcome ruin(const State& s) const {
    if (job_.task == Task::Value)
      return {per_payment() ? s.acc : claim_factor(s.k) * s.acc, 0.0};
    return {0.0, 0.0};
  }

  Outcome hit(const State& s, double when) const {
    return {claim_factor(s.k) * std::exp(-m_.q() * when), 0.0};
  }

  void pay(State& s, double t1, double t2) const {
    const double f = per_payment() ? claim_factor(s.k) : 1.0;
    s.acc += f * m_.c() * (std::exp(-m_.q() * t1) - std::exp(-m_.q() * t2)) / m_.q();
  }

  void pay_lump(State& s, double amount, double when) const {
    const double f = per_payment() ? claim_factor(s.k) : 1.0;
    s.acc += f * amount * std::exp(-m_.q() * when);
  }

  // Exact motion at slope c up to the next claim epoch (sigma = 0).
  Step drift_until(State& s, double next_claim) const {
    const double c = m_.c();
    const double level = job_.level;
    while (true) {
      if (job_.task == Task::Upcross) {
        const double hit_time = s.t + (level - s.u) / c;
        if (hit_time <= next_claim) {
          if (hit_time < job_.clock) return {true, hit(s, hit_time)};
          return {true, {0.0, 0.0}};
        }
        if (next_claim >= job_.clock) return {true, {0.0, 0.0}};
        s.u += c * (next_claim - s.t);
        s.t = next_claim;
        return {};
      }
      if (s.u < 0.0) {
        const double recover = s.t - s.u / c;
        const double deadline = s.exc + job_.clock;
        if (next_claim < recover) {
          if (next_claim > deadline) return {true, ruin(s)};
          s.u += c * (next_claim - s.t);
          s.t = next_claim;
          return {};
        }
        if (recover > deadline) return {true, ruin(s)};
        s.t = recover;
        s.u = 0.0;
        s.exc = kNone;
        continue;
      }
      const double reach = s.t + (level - s.u) / c;
      if (reach <= next_claim) {
        if (job_.task == Task::H) return {true, hit(s, reach)};
        pay(s, reach, next_claim);
        s.u = level;
      } else {
        s.u += c * (next_claim - s.t);
      }
      s.t = next_claim;
      return {};
    }
  }

  // Euler steps of the diffusion up to the next claim epoch (sigma > 0).
  Step diffuse_until(State& s, double next_claim, Rng& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double c = m_.c(), sigma = m_.sigma(), s2 = sigma * sigma;
    const double level = job_.level;
    const bool parisian = job_.task != Task::Upcross;
    const double d = job_.clock;
    while (s.t < next_claim) {
      const double dt = std::min(cfg_.dt, next_claim - s.t);
      const double u0 = s.u, t0 = s.t;
      double u1 = u0 + c * dt + sigma * std::sqrt(dt) * normal(rng);
      const double t1 = t0 + dt;
      auto bridge_cross = [&](double gap0, double gap1) {
        return cfg_.brownian_bridge && unif(rng) < std::exp(-2.0 * gap0 * gap1 / (s2 * dt));
      };

      if (parisian) {
        if (d == 0.0) {
          if (u1 < 0.0) return {true, ruin(s)};
          if (bridge_cross(u0, u1)) return {true, ruin(s)};
        } else {
          if (u0 >= 0.0 && u1 < 0.0) {
            s.exc = t0 + dt * u0 / (u0 - u1);
          } else if (u0 < 0.0 && u1 >= 0.0) {
            const double tc = t0 + dt * (-u0) / (u1 - u0);
            if (tc - s.exc > d) return {true, ruin(s)};
            s.exc = kNone;
          } else if (u0 < 0.0 && u1 < 0.0 && bridge_cross(-u0, -u1)) {
            const double tc = t0 + 0.5 * dt;
            if (tc - s.exc > d) return {true, ruin(s)};
            s.exc = tc;
          }
          if (!std::isnan(s.exc) && t1 - s.exc > d) return {true, ruin(s)};
        }
      } else if (t1 >= d) {
        // Horizon reached inside this step: only a crossing before d counts.
        if (u1 >= level) {
          const double tc = t0 + dt * (level - u0) / (u1 - u0);
          if (tc < d) return {true, hit(s, tc)};
        }
        return {true, {0.0, 0.0}};
      }

      if (job_.task == Task::Value) {
        if (u1 > level) {
          pay_lump(s, u1 - level, t1);
          u1 = level;
        }
      } else if (u1 >= level) {
        return {true, hit(s, t0 + dt * (level - u0) / (u1 - u0))};
      } else if (bridge_cross(level - u0, level - u1)) {
        return {true, hit(s, t0 + 0.5 * dt)};
      }
      s.u = u1;
      s.t = t1;
    }
    return {};
  }

  const ValidatedModel& m_;
  Job job_;
  SimConfig cfg_;
  ClaimSampler claims_;
  double t_max_ = 0.0;
};

SimEstimate run_paths(const ValidatedModel& m, const Job& job, const SimConfig& cfg) {
  if (cfg.n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  if (m.sigma() > 0.0 && !(cfg.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const PathSimulator sim(m, job, cfg);
  const std::size_t n = cfg.n_paths;
  std::vector<Outcome> out(n);
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Rng rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
      out[i] = sim.run(rng);
    }
  };
  if (threads <= 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = std::min(n, t * chunk), hi = std::min(n, lo + chunk);
      pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  double sum = 0.0, bound = 0.0;
  for (const Outcome& o : out) {
    sum += o.value;
    bound += o.bound;
  }
  SimEstimate est;
  est.n_paths = n;
  est.mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (const Outcome& o : out) ss += (o.value - est.mean) * (o.value - est.mean);
  est.std_error = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
  est.truncation_bias_bound = bound / static_cast<double>(n);
  return est;
}

}  // namespace

SimEstimate simulate_value(const ValidatedModel& model, double a, double x, const SimConfig& cfg) {
  if (!(a >= 0.0)) throw std::invalid_argument("barrier must be >= 0");
  return run_paths(model, {Task::Value, a, x, model.d()}, cfg);
}

SimEstimate simulate_h(const ValidatedModel& model, double a, double x, const SimConfig& cfg) {
  if (!(a >= 0.0)) throw std::invalid_argument("barrier must be >= 0");
  if (!(x <= a)) throw std::invalid_argument("simulate_h requires x <= a");
  return run_paths(model, {Task::H, a, x, model.d()}, cfg);
}

SimEstimate simulate_upcross(const ValidatedModel& model, double y, double d, const SimConfig& cfg) {
  if (!(y > 0.0)) throw std::invalid_argument("level must be positive");
  if (!(d >= 0.0)) throw std::invalid_argument("horizon must be >= 0");
  return run_paths(model, {Task::Upcross, y, 0.0, d}, cfg);
}

}  // namespace pardiv
