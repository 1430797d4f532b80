#include "pardiv/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "pardiv/errors.hpp"
#include "pardiv/firstpassage.hpp"
#include "pardiv/hfun.hpp"
#include "pardiv/lundberg.hpp"
#include "pardiv/model.hpp"
#include "pardiv/simulator.hpp"
#include "pardiv/valuation.hpp"

namespace pardiv {

namespace {

using nlohmann::json;

constexpr const char* kSchemaVersion = "1";
constexpr double kFigureTolerance = 1e-6;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Common {
  double lambda = 10.0;
  double c = 15.0;
  double sigma = 0.0;
  double q = 0.1;
  double r = 0.8;
  std::string d = "0";
  std::string claims = "exponential:1";
  double grid_step = 1e-3;
  std::string config;
  std::string out;
  std::string json_path;
  std::uint64_t seed = 20240601;
  std::size_t paths = 200000;
};

struct Specific {
  std::vector<double> a;  // empty: optimal barrier
  double a_max = 3.0;
  std::vector<double> x;
  std::vector<double> y;
  double x_span = 10.0;
  double dt = 1e-4;
  std::string mode = "per-payment";
  bool bridge = false;
  std::string what = "value";
  std::vector<std::string> ds{"0", "2"};
  unsigned threads = 0;
};

double parse_delay(const std::string& s) {
  if (s == "inf" || s == "infinity" || s == "none") return kNoRuin;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid delay: " + s);
  }
  if (used != s.size()) throw std::invalid_argument("invalid delay: " + s);
  return v;
}

// CSV "x,density" with a header, uniform grid starting at 0.
ClaimDistribution read_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open claim table: " + path);
  std::vector<double> xs, fs;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("claim table row without comma: " + line);
    try {
      const double x = std::stod(line.substr(0, comma));
      const double f = std::stod(line.substr(comma + 1));
      xs.push_back(x);
      fs.push_back(f);
    } catch (const std::exception&) {
      if (!first) throw std::invalid_argument("claim table row is not numeric: " + line);
    }
    first = false;
  }
  if (xs.size() < 2) throw std::invalid_argument("claim table needs at least two rows");
  const double step = xs[1] - xs[0];
  if (xs[0] != 0.0 || !(step > 0.0)) throw std::invalid_argument("claim table must start at 0 with increasing x");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (std::abs(xs[i] - xs[0] - step * static_cast<double>(i)) > 1e-9 * std::max(1.0, xs[i]))
      throw std::invalid_argument("claim table grid is not uniform");
  return ClaimDistribution::tabulated(step, std::move(fs));
}

ClaimDistribution parse_claims(const std::string& text) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "exponential") {
    double mu = 1.0;
    if (!arg.empty()) {
      try {
        mu = std::stod(arg);
      } catch (const std::exception&) {
        throw std::invalid_argument("invalid exponential rate: " + arg);
      }
    }
    return ClaimDistribution::exponential(mu);
  }
  if (kind == "table") return read_table(arg);
  throw std::invalid_argument("unknown claim distribution: " + text);
}

ValidatedModel build_model(const Common& c, double d) {
  ModelParams p;
  p.lambda = c.lambda;
  p.c = c.c;
  p.sigma = c.sigma;
  p.q = c.q;
  p.r = c.r;
  p.d = d;
  return validate(p, parse_claims(c.claims));
}

json params_json(const ValidatedModel& m, const Common& c) {
  return json{{"lambda", m.lambda()}, {"c", m.c()},         {"sigma", m.sigma()},
              {"q", m.q()},           {"r", m.r()},         {"d", m.no_ruin() ? json("inf") : json(m.d())},
              {"claims", c.claims},   {"grid_step", c.grid_step}};
}

void write_json(const Common& c, json report, const std::string& command) {
  if (c.json_path.empty()) return;
  report["schema"] = std::string("pardiv.") + command + "/" + kSchemaVersion;
  std::ofstream f(c.json_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write " + c.json_path);
  f << report.dump(2) << '\n';
}

class Csv {
 public:
  explicit Csv(const std::string& header) { text_ << header << '\n'; }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      if (!first) text_ << ',';
      text_ << num(v);
      first = false;
    }
    text_ << '\n';
  }
  std::string str() const { return text_.str(); }
  void save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot write " + path);
    f << text_.str();
  }

 private:
  std::ostringstream text_;
};

HOptions h_options(const Common& c) {
  HOptions o;
  o.step = c.grid_step;
  return o;
}

Csv h_curve(const HFunction& h, double step) {
  Csv csv("x,h,hprime,hprimeprime");
  const auto stride = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(step / h.grid.step())));
  for (std::size_t i = 0; i < h.grid.size(); i += stride)
    csv.row({h.grid.x(i), h.grid[i], h.hp[i], h.hpp[i]});
  if (h.grid.hi() < h.a - 1e-12) csv.row({h.a, h.value(h.a), h.d1(h.a), h.d2(h.a)});
  return csv;
}

SimConfig sim_config(const Common& c, const Specific& s) {
  SimConfig cfg;
  cfg.n_paths = c.paths;
  cfg.seed = c.seed;
  cfg.dt = s.dt;
  cfg.brownian_bridge = s.bridge;
  cfg.threads = s.threads;
  if (s.mode == "per-payment") {
    cfg.discount_mode = DiscountMode::PerPayment;
  } else if (s.mode == "terminal-factor") {
    cfg.discount_mode = DiscountMode::TerminalFactor;
  } else {
    throw std::invalid_argument("unknown discount mode: " + s.mode);
  }
  return cfg;
}

BarrierSolution solve_barrier(const ValidatedModel& m, const Common& c, const Specific& s) {
  if (s.a.empty()) return optimal_barrier(m, s.a_max, h_options(c));
  return fixed_barrier(m, s.a.front(), h_options(c));
}

json check_json(const CheckResult& r) {
  return json{{"name", r.name}, {"pass", r.pass}, {"worst", r.worst}, {"worst_x", r.worst_x}, {"points", r.points}};
}

void print_check(std::ostream& out, const CheckResult& r) {
  out << r.name << ": " << (r.pass ? "pass" : "FAIL") << " worst=" << num(r.worst)
      << " at x=" << num(r.worst_x) << " points=" << r.points << '\n';
}

// ---- commands ----

int cmd_root(const Common& c, const Specific&, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const LundbergRoot root = lundberg_root(m);
  out << "rho=" << num(root.rho) << "\nresidual=" << num(root.residual)
      << "\niterations=" << root.iterations << '\n';
  write_json(c, {{"params", params_json(m, c)}, {"rho", root.rho}, {"residual", root.residual},
                 {"iterations", root.iterations}}, "root");
  return kExitOk;
}

int cmd_transform(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const std::vector<double> ys = s.y.empty() ? std::vector<double>{0.5} : s.y;
  Csv csv("y,phi,truncation_k,tail_bound");
  json rows = json::array();
  for (double y : ys) {
    const UpcrossTransform t = upcross_transform(m, y, m.d());
    csv.row({y, t.value, static_cast<double>(t.truncation_k), t.tail_bound});
    rows.push_back({{"y", y}, {"phi", t.value}, {"truncation_k", t.truncation_k}, {"tail_bound", t.tail_bound}});
  }
  out << csv.str();
  if (!c.out.empty()) csv.save(c.out);
  write_json(c, {{"params", params_json(m, c)}, {"rows", rows}}, "transform");
  return kExitOk;
}

int cmd_h(const Common& c, const Specific& s, std::ostream& out) {
  if (s.a.empty()) throw std::invalid_argument("h requires --a");
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const HFunction h = h_d(m, s.a.front(), h_options(c));
  out << "a=" << num(h.a) << "\nxi_prime_zero=" << num(h.xi_prime_zero)
      << "\nide_residual=" << num(h.ide_residual) << '\n';
  for (double x : s.x) out << "h(" << num(x) << ")=" << num(h.value(x)) << '\n';
  if (!c.out.empty()) h_curve(h, c.grid_step).save(c.out);
  write_json(c, {{"params", params_json(m, c)}, {"a", h.a}, {"xi_prime_zero", h.xi_prime_zero},
                 {"ide_residual", h.ide_residual}}, "h");
  return kExitOk;
}

int cmd_value(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const BarrierSolution sol = solve_barrier(m, c, s);
  const std::vector<double> xs = s.x.empty() ? std::vector<double>{0.0} : s.x;
  Csv csv("x,value");
  json rows = json::array();
  for (double x : xs) {
    const double v = sol.value(x);
    csv.row({x, v});
    rows.push_back({{"x", x}, {"value", v}});
  }
  out << "a=" << num(sol.a_star) << '\n' << csv.str();
  if (!c.out.empty()) csv.save(c.out);
  write_json(c, {{"params", params_json(m, c)}, {"a", sol.a_star}, {"rows", rows}}, "value");
  return kExitOk;
}

int cmd_barrier(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const BarrierSolution sol = optimal_barrier(m, s.a_max, h_options(c));
  out << "a_star=" << num(sol.a_star) << "\nboundary=" << (sol.boundary ? "true" : "false")
      << "\nvalue_at_barrier=" << num(sol.value(sol.a_star)) << '\n';
  for (double r : sol.other_roots) out << "other_root=" << num(r) << '\n';
  for (const CheckResult& r : sol.hjb_report.checks) print_check(out, r);
  if (!c.out.empty()) h_curve(sol.h, c.grid_step).save(c.out);
  json checks = json::array();
  for (const CheckResult& r : sol.hjb_report.checks) checks.push_back(check_json(r));
  write_json(c, {{"params", params_json(m, c)}, {"a_star", sol.a_star}, {"boundary", sol.boundary},
                 {"other_roots", sol.other_roots}, {"value_at_barrier", sol.value(sol.a_star)},
                 {"hjb", checks}}, "barrier");
  return kExitOk;
}

int cmd_verify(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const BarrierSolution sol = solve_barrier(m, c, s);
  const HjbReport hjb = hjb_verify(m, sol, sol.a_star + s.x_span, {}, c.grid_step);
  const CheckResult mono = gprime_monotone_check(m, sol.a_star, sol.a_star + s.x_span, h_options(c));
  const DensityAdvisory advisory = density_shape_advisory(m.claims());
  const bool pass = hjb.pass() && mono.pass;
  out << "a=" << num(sol.a_star) << '\n';
  for (const CheckResult& r : hjb.checks) print_check(out, r);
  print_check(out, mono);
  out << "density_advisory: " << advisory.message << '\n';
  out << "result=" << (pass ? "pass" : "FAIL") << '\n';
  json checks = json::array();
  for (const CheckResult& r : hjb.checks) checks.push_back(check_json(r));
  checks.push_back(check_json(mono));
  write_json(c, {{"params", params_json(m, c)}, {"a", sol.a_star}, {"checks", checks},
                 {"density_advisory", advisory.message}, {"pass", pass}}, "verify");
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_figures(const Common& c, const Specific& s, std::ostream& out) {
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::filesystem::create_directories(dir);
  bool pass = true;
  json figures = json::array();
  for (const std::string& dtext : s.ds) {
    const ValidatedModel m = build_model(c, parse_delay(dtext));
    const BarrierSolution sol = optimal_barrier(m, s.a_max, h_options(c));
    const SmoothFunction v = barrier_value_function(m, sol);
    const std::string tag = "d" + dtext;
    h_curve(sol.h, c.grid_step).save((dir / ("h_" + tag + ".csv")).string());
    Csv hjb("x,generator_minus_q_v");
    double worst = -std::numeric_limits<double>::infinity();
    const auto n = static_cast<std::size_t>(std::floor(s.x_span / c.grid_step + 1e-9));
    for (std::size_t i = 0; i <= n; ++i) {
      const double x = sol.a_star + c.grid_step * static_cast<double>(i);
      const double g = generator_apply(m, v, x) - m.q() * v.value(x);
      worst = std::max(worst, g);
      hjb.row({x, g});
    }
    hjb.save((dir / ("hjb_" + tag + ".csv")).string());
    const bool ok = worst <= kFigureTolerance;
    pass = pass && ok;
    out << tag << ": a_star=" << num(sol.a_star) << " max_generator_minus_q_v=" << num(worst)
        << (ok ? " pass" : " FAIL") << '\n';
    figures.push_back({{"d", dtext}, {"a_star", sol.a_star}, {"max_generator_minus_q_v", worst}, {"pass", ok}});
  }
  write_json(c, {{"figures", figures}, {"pass", pass}}, "figures");
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_simulate(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const SimConfig cfg = sim_config(c, s);
  Csv csv("x,mc_mean,mc_stderr,n_paths,truncation_bias_bound");
  json rows = json::array();
  auto emit = [&](double x, const SimEstimate& e) {
    csv.row({x, e.mean, e.std_error, static_cast<double>(e.n_paths), e.truncation_bias_bound});
    rows.push_back({{"x", x}, {"mc_mean", e.mean}, {"mc_stderr", e.std_error}, {"n_paths", e.n_paths},
                    {"truncation_bias_bound", e.truncation_bias_bound}});
  };
  if (s.what == "upcross") {
    const std::vector<double> ys = s.y.empty() ? std::vector<double>{0.5} : s.y;
    for (double y : ys) emit(y, simulate_upcross(m, y, m.d(), cfg));
  } else if (s.what == "value" || s.what == "h") {
    if (s.a.empty()) throw std::invalid_argument("simulate requires --a");
    const double a = s.a.front();
    const std::vector<double> xs = s.x.empty() ? std::vector<double>{0.0} : s.x;
    for (double x : xs) emit(x, s.what == "h" ? simulate_h(m, a, x, cfg) : simulate_value(m, a, x, cfg));
  } else {
    throw std::invalid_argument("unknown --what: " + s.what);
  }
  out << csv.str();
  if (!c.out.empty()) csv.save(c.out);
  write_json(c, {{"params", params_json(m, c)}, {"what", s.what}, {"mode", s.mode}, {"seed", c.seed},
                 {"rows", rows}}, "simulate");
  return kExitOk;
}

int cmd_compare(const Common& c, const Specific& s, std::ostream& out) {
  const ValidatedModel m = build_model(c, parse_delay(c.d));
  const BarrierSolution sol = solve_barrier(m, c, s);
  const SimConfig cfg = sim_config(c, s);
  const std::vector<double> xs = s.x.empty() ? std::vector<double>{0.0, 0.5, sol.a_star} : s.x;
  Csv csv("x,analytic,mc_mean,mc_stderr,z");
  json rows = json::array();
  for (double x : xs) {
    const double an = sol.value(x);
    const SimEstimate e = simulate_value(m, sol.a_star, x, cfg);
    const double z = e.std_error > 0.0 ? (e.mean - an) / e.std_error : (e.mean == an ? 0.0 : INFINITY);
    csv.row({x, an, e.mean, e.std_error, z});
    rows.push_back({{"x", x}, {"analytic", an}, {"mc_mean", e.mean}, {"mc_stderr", e.std_error}, {"z", z}});
  }
  out << "a=" << num(sol.a_star) << '\n' << csv.str();
  if (cfg.discount_mode == DiscountMode::TerminalFactor)
    out << "note: terminal-factor is a semantics variant; analytic values use per-payment discounting\n";
  if (!c.out.empty()) csv.save(c.out);
  write_json(c, {{"params", params_json(m, c)}, {"a", sol.a_star}, {"mode", s.mode}, {"seed", c.seed},
                 {"rows", rows}}, "compare");
  return kExitOk;
}

// ---- parsing ----

using Handler = int (*)(const Common&, const Specific&, std::ostream&);

struct Command {
  const char* name;
  const char* help;
  Handler handler;
  std::set<std::string> extra;  // command-specific option names
};

const std::vector<Command>& commands() {
  static const std::vector<Command> list = {
      {"root", "Lundberg root rho", cmd_root, {}},
      {"transform", "up-crossing transform E[r^N e^{-q tau_y}; tau_y < d]", cmd_transform, {"y"}},
      {"h", "h^d at a barrier, with an optional CSV of h, h', h''", cmd_h, {"a", "x"}},
      {"value", "value of a barrier strategy (optimal barrier when --a is absent)", cmd_value, {"a", "a-max", "x"}},
      {"barrier", "optimal barrier and HJB summary", cmd_barrier, {"a-max"}},
      {"verify", "HJB and monotonicity checks", cmd_verify, {"a", "a-max", "x-span"}},
      {"figures", "h and (Gamma - q) v curves for several delays", cmd_figures, {"a-max", "x-span", "ds"}},
      {"simulate", "Monte Carlo estimates", cmd_simulate,
       {"a", "x", "y", "what", "dt", "mode", "bridge", "threads"}},
      {"compare", "analytic value against Monte Carlo", cmd_compare,
       {"a", "a-max", "x", "dt", "mode", "bridge", "threads"}},
  };
  return list;
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--lambda", c.lambda, "claim intensity");
  sub->add_option("--c", c.c, "premium rate");
  sub->add_option("--sigma", c.sigma, "diffusion volatility");
  sub->add_option("--q", c.q, "discount rate");
  sub->add_option("--r", c.r, "per-claim discount factor in (0, 1]");
  sub->add_option("--d", c.d, "Parisian delay (number or inf)");
  sub->add_option("--claims", c.claims, "exponential:<mu> or table:<csv path>");
  sub->add_option("--grid-step", c.grid_step, "working grid step");
  sub->add_option("--config", c.config, "flat JSON file with option values");
  sub->add_option("--out", c.out, "output file (CSV) or directory (figures)");
  sub->add_option("--json", c.json_path, "write a JSON report here");
  sub->add_option("--seed", c.seed, "Monte Carlo seed");
  sub->add_option("--paths", c.paths, "Monte Carlo path count");
}

void add_specific(CLI::App* sub, Specific& s, const std::set<std::string>& names) {
  if (names.count("a")) sub->add_option("--a", s.a, "barrier level")->expected(1);
  if (names.count("a-max")) sub->add_option("--a-max", s.a_max, "upper end of the barrier search");
  if (names.count("x")) sub->add_option("--x", s.x, "initial surplus levels");
  if (names.count("y")) sub->add_option("--y", s.y, "target levels");
  if (names.count("x-span")) sub->add_option("--x-span", s.x_span, "checked span above the barrier");
  if (names.count("dt")) sub->add_option("--dt", s.dt, "Euler step for sigma > 0");
  if (names.count("mode")) sub->add_option("--mode", s.mode, "per-payment or terminal-factor");
  if (names.count("bridge")) sub->add_flag("--bridge", s.bridge, "Brownian-bridge crossing correction");
  if (names.count("threads")) sub->add_option("--threads", s.threads, "worker threads (0: all cores)");
  if (names.count("what")) sub->add_option("--what", s.what, "value, h or upcross");
  if (names.count("ds")) sub->add_option("--ds", s.ds, "delays to plot");
}

struct Parsed {
  std::unique_ptr<CLI::App> app;
  const Command* command = nullptr;
  CLI::App* sub = nullptr;
};

Parsed make_app(Common& c, Specific& s) {
  Parsed p;
  p.app = std::make_unique<CLI::App>("Dividend barrier valuation with Parisian ruin", "pardiv");
  p.app->require_subcommand(1);
  for (const Command& cmd : commands()) {
    CLI::App* sub = p.app->add_subcommand(cmd.name, cmd.help);
    add_common(sub, c);
    add_specific(sub, s, cmd.extra);
  }
  return p;
}

void parse(CLI::App& app, std::vector<std::string> args) {
  std::reverse(args.begin(), args.end());
  app.parse(args);
}

// Option values from the config file, as command-line tokens, for options not given on the
// command line.
std::vector<std::string> config_tokens(const std::string& path, CLI::App* sub) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open config file: " + path);
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw std::invalid_argument("config file must hold a flat JSON object");
  std::vector<std::string> tokens;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config") throw std::invalid_argument("config files cannot nest");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) throw std::invalid_argument("unknown config key: " + key);
    if (opt->count() > 0) continue;  // flags override the file
    auto scalar = [](const json& v) -> std::string {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_integer()) return std::to_string(v.get<long long>());
      if (v.is_number()) return num(v.get<double>());
      throw std::invalid_argument("config values must be numbers, strings or arrays");
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) tokens.push_back("--" + key);
    } else if (value.is_array()) {
      for (const json& v : value) {
        tokens.push_back("--" + key);
        tokens.push_back(scalar(v));
      }
    } else {
      tokens.push_back("--" + key);
      tokens.push_back(scalar(value));
    }
  }
  return tokens;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    Common c;
    Specific s;
    Parsed p = make_app(c, s);
    try {
      parse(*p.app, args);
    } catch (const CLI::ParseError& e) {
      return p.app->exit(e, out, err) == 0 ? kExitOk : kExitInputError;
    }
    const Command* command = nullptr;
    CLI::App* sub = nullptr;
    for (const Command& cmd : commands()) {
      CLI::App* candidate = p.app->get_subcommand(cmd.name);
      if (candidate->parsed()) {
        command = &cmd;
        sub = candidate;
      }
    }
    if (!c.config.empty()) {
      std::vector<std::string> merged{command->name};
      for (std::string& t : config_tokens(c.config, sub)) merged.push_back(std::move(t));
      // Command-line tokens after the subcommand name.
      auto it = std::find(args.begin(), args.end(), std::string(command->name));
      merged.insert(merged.end(), it + 1, args.end());
      c = Common{};
      s = Specific{};
      p = make_app(c, s);
      try {
        parse(*p.app, merged);
      } catch (const CLI::ParseError& e) {
        return p.app->exit(e, out, err) == 0 ? kExitOk : kExitInputError;
      }
    }
    return command->handler(c, s, out);
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const ConvergenceError& e) {
    err << "error: no convergence: " << e.what() << " (last norm " << num(e.last_norm()) << ")\n";
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  }
}

}  // namespace pardiv
