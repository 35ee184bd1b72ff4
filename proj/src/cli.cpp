#include "wits/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "wits/core.hpp"
#include "wits/montecarlo.hpp"
#include "wits/numerics.hpp"
#include "wits/skewnormal.hpp"
#include "wits/strategies.hpp"

#ifndef WITS_GIT_DESCRIBE
#define WITS_GIT_DESCRIBE "unknown"
#endif

namespace wits::cli {

namespace {

using json = nlohmann::ordered_json;

struct Common {
  double Q = 0.1;
  double N = 0.01;
  double tol = 1e-10;
  int threads = 0;
  std::string out;
  bool gnuplot = false;
};

struct Options {
  Common common;
  std::string strategy;
  std::optional<double> p_min, p_max, a_min, a_max;
  std::size_t steps = 101;
  double alpha_min = -10.0, alpha_max = 10.0;
  std::optional<double> power, a, rho;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 0x5eed;
  double noise_scale = 1.0;
  std::string manifest;
};

// Bad input supplied by the user; maps to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string opt(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

QuadratureConfig quadrature(const Common& c) {
  QuadratureConfig q;
  q.abs_tol = c.tol;
  q.rel_tol = c.tol;
  return q;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  return f;
}

void write_manifest(const std::string& subcommand, const std::vector<std::string>& args,
                    const Options& o, bool seeded) {
  const auto q = quadrature(o.common);
  json m;
  m["command"] = args;
  m["subcommand"] = subcommand;
  m["params"] = {{"Q", o.common.Q}, {"N", o.common.N}};
  m["tolerances"] = {{"abs_tol", q.abs_tol},
                     {"rel_tol", q.rel_tol},
                     {"max_subdivisions", q.max_subdivisions},
                     {"truncation_radius", q.truncation_radius}};
  m["seed"] = seeded ? json(o.seed) : json(nullptr);
  m["threads"] = o.common.threads;
  m["git_describe"] = WITS_GIT_DESCRIBE;
  m["timestamp"] = timestamp_utc();
  auto f = open_output(o.common.out + ".manifest");
  f << m.dump(2) << '\n';
}

void write_gnuplot(const std::string& csv, const std::vector<std::string>& columns,
                   const std::string& xlabel, const std::string& ylabel) {
  auto f = open_output(csv + ".gp");
  f << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel '" << xlabel << "'\nset ylabel '" << ylabel << "'\n"
    << "plot ";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    f << (i ? ", " : "") << "'" << csv << "' using 1:" << columns[i] << " with lines";
  }
  f << '\n';
}

void write_curve_csv(std::ostream& f, const TradeoffCurve& c) {
  f << "P,S,strategy,aux1,aux2,feasible\n";
  for (const auto& pt : c.points) {
    f << format_double(pt.P) << ',' << opt(pt.S) << ',' << to_string(c.strategy) << ','
      << opt(pt.aux1) << ',' << opt(pt.aux2) << ',' << (pt.feasible ? "true" : "false") << '\n';
  }
}

std::vector<double> power_grid(const Options& o) {
  const double lo = o.p_min.value_or(0.0);
  const double hi = o.p_max.value_or(o.common.Q);
  if (!(lo >= 0.0) || !(hi >= lo)) throw UsageError("need 0 <= p-min <= p-max");
  if (o.steps < 1) throw UsageError("--steps must be >= 1");
  return linspace(lo, hi, o.steps);
}

int cmd_curve(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto params = ProblemParams::make(o.common.Q, o.common.N);
  const auto strategy = parse_strategy(o.strategy);
  const auto q = quadrature(o.common);
  TradeoffCurve c{strategy, params, SweepParameter::Power, {}};
  if (strategy == Strategy::TwoPoint && (o.a_min || o.a_max)) {
    const double lo = o.a_min.value_or(0.0);
    const double hi = o.a_max.value_or(3.0 * std::sqrt(o.common.Q));
    if (!(lo >= 0.0) || !(hi >= lo)) throw UsageError("need 0 <= a-min <= a-max");
    const auto grid = linspace(lo, hi, o.steps);
    c = two_point_locus(params, grid, q);
  } else {
    const auto grid = power_grid(o);
    c = curve(strategy, params, grid, q);
  }
  auto f = open_output(o.common.out);
  write_curve_csv(f, c);
  write_manifest("curve", args, o, false);
  if (o.common.gnuplot) write_gnuplot(o.common.out, {"2"}, "P", "S");
  std::size_t feasible = 0;
  for (const auto& pt : c.points) feasible += pt.feasible ? 1 : 0;
  out << "wrote " << c.points.size() << " rows (" << feasible << " feasible) to " << o.common.out
      << '\n';
  return kExitOk;
}

int cmd_compare(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto params = ProblemParams::make(o.common.Q, o.common.N);
  const auto grid = power_grid(o);
  const auto table = compare(params, grid, quadrature(o.common));
  auto f = open_output(o.common.out);
  f << 'P';
  for (const auto& col : table.columns) f << ',' << to_string(col.strategy);
  f << '\n';
  for (std::size_t i = 0; i < table.P.size(); ++i) {
    f << format_double(table.P[i]);
    for (const auto& col : table.columns) f << ',' << opt(col.points[i].S);
    f << '\n';
  }
  write_manifest("compare", args, o, false);
  if (o.common.gnuplot) {
    std::vector<std::string> cols;
    for (std::size_t j = 0; j < table.columns.size(); ++j) cols.push_back(std::to_string(j + 2));
    write_gnuplot(o.common.out, cols, "P", "S");
  }
  out << "wrote " << table.P.size() << " rows x " << table.columns.size() << " strategies to "
      << o.common.out << '\n';
  return kExitOk;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  const auto params = ProblemParams::make(o.common.Q, o.common.N);
  SimConfig sim;
  sim.n_samples = o.n;
  sim.seed = o.seed;
  sim.noise_scale = o.noise_scale;
  try {
    sim.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const auto strategy = parse_strategy(o.strategy);
  auto need = [](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError(std::string("simulate: missing ") + flag);
    return *v;
  };
  EmpiricalCost emp;
  CostPoint closed;
  switch (strategy) {
    case Strategy::Linear: {
      const double P = need(o.power, "--power");
      const auto pol = linear_policy_for_power(P, params);
      emp = simulate_linear(pol, params, sim);
      closed = {pol.a * pol.a * params.Q() + pol.b * pol.b, mmse_linear(P, params)};
      break;
    }
    case Strategy::TwoPoint: {
      const double a = need(o.a, "--a");
      emp = simulate_two_point({a}, params, sim);
      closed = two_point_costs({a}, params, quadrature(o.common));
      break;
    }
    case Strategy::Coord: {
      const auto cp = CoordParams::make(need(o.power, "--power"), need(o.rho, "--rho"), params);
      emp = simulate_hybrid_conditional(cp, params, sim);
      closed = {cp.P(), coord_mmse_at_rho(cp, quadrature(o.common))};
      break;
    }
    default:
      throw UsageError("simulate: strategy must be linear, two-point or coord");
  }
  const double zp = emp.power_stderr > 0.0 ? std::abs(emp.power_mean - closed.P) / emp.power_stderr
                                           : (emp.power_mean == closed.P ? 0.0 : INFINITY);
  const double zs = emp.mmse_stderr > 0.0 ? std::abs(emp.mmse_mean - closed.S) / emp.mmse_stderr
                                          : (std::abs(emp.mmse_mean - closed.S) < 1e-15 ? 0.0 : INFINITY);
  const bool pass = zp <= 4.0 && zs <= 4.0;
  out << "strategy  " << to_string(strategy) << "  n=" << emp.n_samples << "  seed=" << emp.seed
      << '\n'
      << "power     empirical " << format_double(emp.power_mean) << " +- "
      << format_double(emp.power_stderr) << "  closed-form " << format_double(closed.P)
      << "  z=" << zp << '\n'
      << "mmse      empirical " << format_double(emp.mmse_mean) << " +- "
      << format_double(emp.mmse_stderr) << "  closed-form " << format_double(closed.S)
      << "  z=" << zs << '\n'
      << (pass ? "PASS" : "FAIL") << " (4 stderr)\n";
  if (!o.common.out.empty()) {
    auto f = open_output(o.common.out);
    f << "strategy,power_mean,power_stderr,power_closed,mmse_mean,mmse_stderr,mmse_closed,n,seed,"
         "verdict\n"
      << to_string(strategy) << ',' << format_double(emp.power_mean) << ','
      << format_double(emp.power_stderr) << ',' << format_double(closed.P) << ','
      << format_double(emp.mmse_mean) << ',' << format_double(emp.mmse_stderr) << ','
      << format_double(closed.S) << ',' << emp.n_samples << ',' << emp.seed << ','
      << (pass ? "PASS" : "FAIL") << '\n';
    write_manifest("simulate", args, o, true);
  }
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_psi(const Options& o, const std::vector<std::string>& args, std::ostream& out) {
  if (!(o.alpha_max >= o.alpha_min) || o.steps < 1) {
    throw UsageError("psi: need alpha-min <= alpha-max and steps >= 1");
  }
  const auto grid = linspace(o.alpha_min, o.alpha_max, o.steps);
  const auto q = quadrature(o.common);
  const auto values = map_grid(grid, [&q](double x) { return psi(x, q); }, Execution::Parallel);
  auto f = open_output(o.common.out);
  f << "alpha,psi\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    f << format_double(grid[i]) << ',' << format_double(values[i]) << '\n';
  }
  write_manifest("psi", args, o, false);
  if (o.common.gnuplot) write_gnuplot(o.common.out, {"2"}, "alpha", "Psi");
  out << "wrote " << grid.size() << " rows to " << o.common.out << '\n';
  return kExitOk;
}

void add_common(CLI::App* sub, Common& c, bool out_required) {
  sub->add_option("--Q", c.Q, "Source variance Q")->capture_default_str();
  sub->add_option("--N", c.N, "Channel noise variance N")->capture_default_str();
  sub->add_option("--tol", c.tol, "Quadrature absolute and relative tolerance")
      ->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = runtime default)");
  auto* o = sub->add_option("--out", c.out, "Output CSV path; a .manifest is written next to it");
  if (out_required) o->required();
  sub->add_flag("--gnuplot", c.gnuplot, "Also write a gnuplot script <out>.gp");
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             int depth);

int replay(const std::string& manifest, const std::string& out_override, std::ostream& out,
           std::ostream& err, int depth) {
  if (depth > 0) throw UsageError("replay: a manifest cannot itself request a replay");
  std::ifstream f(manifest);
  if (!f) throw UsageError("replay: cannot read '" + manifest + "'");
  json m;
  try {
    m = json::parse(f);
  } catch (const json::exception& e) {
    throw UsageError(std::string("replay: malformed manifest: ") + e.what());
  }
  if (!m.contains("command") || !m["command"].is_array()) {
    throw UsageError("replay: manifest has no command array");
  }
  auto args = m["command"].get<std::vector<std::string>>();
  if (!out_override.empty()) {
    bool replaced = false;
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
      if (args[i] == "--out") {
        args[i + 1] = out_override;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(out_override);
    }
  }
  return dispatch(args, out, err, depth + 1);
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             int depth) {
  CLI::App app{"Cost curves for the vector Witsenhausen problem with a causal decoder",
               "wits-cli"};
  app.require_subcommand(1);
  Options o;

  auto* c = app.add_subcommand("curve", "Evaluate one strategy on a power (or amplitude) grid");
  add_common(c, o.common, true);
  c->add_option("--strategy", o.strategy, "linear|gaussian|two-point|dpc|lin-dpc|coord")
      ->required();
  c->add_option("--p-min", o.p_min, "Smallest power (default 0)");
  c->add_option("--p-max", o.p_max, "Largest power (default Q)");
  c->add_option("--a-min", o.a_min, "two-point only: smallest amplitude a");
  c->add_option("--a-max", o.a_max, "two-point only: largest amplitude a");
  c->add_option("--steps", o.steps, "Grid points")->capture_default_str();

  auto* cmp = app.add_subcommand("compare", "All strategies on a shared power grid");
  add_common(cmp, o.common, true);
  cmp->add_option("--p-min", o.p_min, "Smallest power (default 0)");
  cmp->add_option("--p-max", o.p_max, "Largest power (default Q)");
  cmp->add_option("--steps", o.steps, "Grid points")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "Monte-Carlo check of a closed form");
  add_common(sim, o.common, false);
  sim->add_option("--strategy", o.strategy, "linear|two-point|coord")->required();
  sim->add_option("--power", o.power, "linear, coord: power P");
  sim->add_option("--a", o.a, "two-point: amplitude a");
  sim->add_option("--rho", o.rho, "coord: correlation rho");
  sim->add_option("--n", o.n, "Samples (>= 1000)")->capture_default_str();
  sim->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  sim->add_option("--noise-scale", o.noise_scale, "Importance-sampling inflation of the noise (>= 1)")
      ->capture_default_str();

  auto* ps = app.add_subcommand("psi", "Tabulate the entropy reduction function");
  add_common(ps, o.common, true);
  ps->add_option("--alpha-min", o.alpha_min, "Smallest alpha")->capture_default_str();
  ps->add_option("--alpha-max", o.alpha_max, "Largest alpha")->capture_default_str();
  ps->add_option("--steps", o.steps, "Grid points")->capture_default_str();

  auto* rep = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rep->add_option("manifest", o.manifest, "Path to a .manifest file")->required();
  rep->add_option("--out", o.common.out, "Write to this path instead of the recorded one");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_thread_count(o.common.threads);
  if (c->parsed()) return cmd_curve(o, args, out);
  if (cmp->parsed()) return cmd_compare(o, args, out);
  if (sim->parsed()) return cmd_simulate(o, args, out);
  if (ps->parsed()) return cmd_psi(o, args, out);
  return replay(o.manifest, o.common.out, out, err, depth);
}

bool is_usage(Errc code) {
  switch (code) {
    case Errc::NonPositiveVariance:
    case Errc::InvalidCorrelation:
    case Errc::UnknownStrategy:
    case Errc::InvalidArgument:
    case Errc::RegimeNotApplicable:
      return true;
    default:
      return false;
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err, 0);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_usage(e.code()) ? kExitUsage : kExitNumerical;
  }
}

}  // namespace wits::cli
