#include "wits/strategies.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "wits/gaussian_info.hpp"
#include "wits/skewnormal.hpp"

namespace wits {

namespace {

void require_nonnegative(double P, const char* op) {
  if (!(P >= 0.0) || !std::isfinite(P)) {
    std::ostringstream os;
    os << op << ": need finite P >= 0, got " << P;
    throw Error(Errc::InvalidArgument, os.str());
  }
}

void require_sorted_grid(std::span<const double> grid, const char* op) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]) || (i > 0 && grid[i] < grid[i - 1])) {
      std::ostringstream os;
      os << op << ": grid must be finite, nonnegative and sorted (index " << i << ")";
      throw Error(Errc::InvalidArgument, os.str());
    }
  }
}

// log cosh(x) = |x| + log(1 + e^{-2|x|}) - log 2, safe for any |x|.
double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

CurvePoint absent(double P, std::string reason) {
  CurvePoint pt;
  pt.P = P;
  pt.sweep = P;
  pt.feasible = false;
  pt.reason = std::move(reason);
  return pt;
}

CurvePoint evaluate(Strategy s, double P, const ProblemParams& params, const QuadratureConfig& cfg) {
  CurvePoint pt;
  pt.P = P;
  pt.sweep = P;
  switch (s) {
    case Strategy::Linear: {
      const auto pol = linear_policy_for_power(P, params);
      pt.S = mmse_linear(P, params);
      pt.aux1 = pol.a;
      pt.aux2 = pol.b;
      return pt;
    }
    case Strategy::Gaussian: {
      if (P > params.Q()) return absent(P, "P > Q outside the Gaussian-policy model");
      const auto rho = optimal_rho_triple(P, params);
      pt.S = mmse_gaussian(P, params);
      pt.aux1 = rho.rho1();
      pt.aux2 = rho.rho2();
      return pt;
    }
    case Strategy::TwoPoint: {
      if (P < two_point_min_power(params)) return absent(P, "below two-point minimum power");
      const double a = two_point_a_for_power(P, params);
      pt.S = two_point_costs({a}, params, cfg).S;
      pt.aux1 = a;
      return pt;
    }
    case Strategy::Dpc:
      pt.S = mmse_dpc(P, params);
      pt.aux1 = dpc_alpha_star(P, params);
      return pt;
    case Strategy::LinDpc: {
      const auto best = mmse_lin_dpc(P, params, Execution::Serial);
      pt.S = best.mmse;
      pt.aux1 = best.rho_star;
      return pt;
    }
    case Strategy::Coord: {
      if (P > params.Q()) return absent(P, "P > Q outside the hybrid model");
      try {
        const auto best = mmse_coord(P, params, cfg, Execution::Serial);
        pt.S = best.mmse;
        pt.aux1 = best.rho_star;
      } catch (const Error& e) {
        if (e.code() != Errc::EmptyFeasibleSet) throw;
        return absent(P, "no rho satisfies the information constraint");
      }
      return pt;
    }
  }
  throw Error(Errc::UnknownStrategy, "curve: unhandled strategy");
}

}  // namespace

double mmse_linear(double P, const ProblemParams& params) {
  require_nonnegative(P, "mmse_linear");
  const double Q = params.Q(), N = params.N();
  if (P >= Q) return 0.0;
  const double d = std::sqrt(Q) - std::sqrt(P);
  return d * d * N / (d * d + N);
}

LinearPolicy linear_policy_for_power(double P, const ProblemParams& params) {
  require_nonnegative(P, "linear_policy_for_power");
  const double Q = params.Q();
  if (P <= Q) return {-std::sqrt(P / Q), 0.0};
  return {-1.0, std::sqrt(P - Q)};
}

RegimeBounds p1_p2(const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  if (!(Q > 4.0 * N)) {
    throw Error(Errc::RegimeNotApplicable, "p1_p2: the affine segment requires Q > 4N");
  }
  const double root = std::sqrt(Q * (Q - 4.0 * N));
  return {0.5 * (Q - 2.0 * N - root), 0.5 * (Q - 2.0 * N + root)};
}

double mmse_gaussian(double P, const ProblemParams& params) {
  require_nonnegative(P, "mmse_gaussian");
  const double Q = params.Q(), N = params.N();
  if (Q > 4.0 * N) {
    const auto b = p1_p2(params);
    if (P >= b.P1 && P <= b.P2) return N * (Q - N - P) / Q;
  }
  return mmse_linear(P, params);
}

CostPoint two_point_costs(const TwoPointPolicy& policy, const ProblemParams& params,
                          const QuadratureConfig& cfg) {
  const double a = policy.a;
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw Error(Errc::InvalidArgument, "two_point_costs: need finite a >= 0");
  }
  const double Q = params.Q(), N = params.N();
  const double power = Q + a * (a - 2.0 * std::sqrt(2.0 * Q / std::numbers::pi));
  if (a == 0.0) return {power, 0.0};
  // y = sqrt(N) t turns the integral into int phi(t) / cosh(k t) dt with k = a / sqrt(N).
  const double k = a / std::sqrt(N);
  const double log_lead = log_normal_pdf(k);
  auto integrand = [k, log_lead](double t) {
    return std::exp(log_lead + log_normal_pdf(t) - log_cosh(k * t));
  };
  const double integral = integral_real_line(integrand, cfg);
  return {power, a * a * std::sqrt(2.0 * std::numbers::pi) * integral};
}

double two_point_decoder(double y, double a, double N) { return a * std::tanh(a * y / N); }

double two_point_min_power(const ProblemParams& params) {
  return params.Q() * (1.0 - 2.0 / std::numbers::pi);
}

double two_point_a_for_power(double P, const ProblemParams& params) {
  require_nonnegative(P, "two_point_a_for_power");
  const double Q = params.Q();
  const double c = std::sqrt(2.0 * Q / std::numbers::pi);
  const double pmin = two_point_min_power(params);
  if (P < pmin) {
    std::ostringstream os;
    os << "two_point_a_for_power: P=" << P << " is below the minimum power " << pmin;
    throw Error(Errc::EmptyFeasibleSet, os.str());
  }
  // P_two(a) = (a - c)^2 + pmin; take the root on the increasing branch.
  return c + std::sqrt(P - pmin);
}

namespace detail {

double p_star_raw(double Qs, double N) {
  auto f = [Qs, N](double P) { return P * P * (P + Qs + N) - Qs * N * N; };
  return find_root(f, 0.0, std::max({Qs, N, 1.0}), 1e-16);
}

double mmse_dpc_raw(double P, double Qs, double N) {
  if (P > p_star_raw(Qs, N)) return 0.0;
  const double d = N * std::sqrt(Qs) - P * std::sqrt(P + Qs + N);
  return N * d * d / ((P + N) * (P + N) * (P + Qs + N));
}

}  // namespace detail

double p_star(const ProblemParams& params) { return detail::p_star_raw(params.Q(), params.N()); }

double mmse_dpc(double P, const ProblemParams& params) {
  require_nonnegative(P, "mmse_dpc");
  return detail::mmse_dpc_raw(P, params.Q(), params.N());
}

double dpc_alpha_star(double P, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  return P * (std::sqrt(Q) + std::sqrt(P + Q + N)) / (std::sqrt(Q) * (P + N));
}

double dpc_constraint_residual(double P, double alpha, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  return P * (P + Q + N) - P * Q * (1.0 - alpha) * (1.0 - alpha) - N * (P + alpha * alpha * Q);
}

LinDpcOptimum mmse_lin_dpc(double P, const ProblemParams& params, Execution ex) {
  require_nonnegative(P, "mmse_lin_dpc");
  const double Q = params.Q(), N = params.N();
  auto objective = [=](double rho) {
    const double amp = std::sqrt(Q) + rho * std::sqrt(P);
    return detail::mmse_dpc_raw(P * (1.0 - rho * rho), amp * amp, N);
  };
  const auto best = minimize_1d(objective, -1.0, 1.0, kLinDpcRhoGrid, 1e-10, ex);
  return {best.value, best.argmin};
}

TradeoffCurve curve(Strategy strategy, const ProblemParams& params, std::span<const double> P_grid,
                    const QuadratureConfig& cfg, Execution ex) {
  require_sorted_grid(P_grid, "curve");
  cfg.validate();
  TradeoffCurve out{strategy, params, SweepParameter::Power, {}};
  out.points = parallel_map_index<CurvePoint>(
      P_grid.size(), [&](std::size_t i) { return evaluate(strategy, P_grid[i], params, cfg); }, ex);
  return out;
}

TradeoffCurve two_point_locus(const ProblemParams& params, std::span<const double> a_grid,
                              const QuadratureConfig& cfg, Execution ex) {
  require_sorted_grid(a_grid, "two_point_locus");
  cfg.validate();
  TradeoffCurve out{Strategy::TwoPoint, params, SweepParameter::Amplitude, {}};
  out.points = parallel_map_index<CurvePoint>(
      a_grid.size(),
      [&](std::size_t i) {
        const double a = a_grid[i];
        const auto c = two_point_costs({a}, params, cfg);
        CurvePoint pt;
        pt.P = c.P;
        pt.S = c.S;
        pt.aux1 = a;
        pt.sweep = a;
        return pt;
      },
      ex);
  return out;
}

CompareTable compare(const ProblemParams& params, std::span<const double> P_grid,
                     const QuadratureConfig& cfg, Execution ex) {
  CompareTable t;
  t.P.assign(P_grid.begin(), P_grid.end());
  for (Strategy s : {Strategy::Linear, Strategy::Gaussian, Strategy::TwoPoint, Strategy::Dpc,
                     Strategy::LinDpc, Strategy::Coord}) {
    t.columns.push_back(curve(s, params, P_grid, cfg, ex));
  }
  return t;
}

}  // namespace wits
