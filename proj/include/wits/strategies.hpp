#pragma once

#include <span>
#include <vector>

#include "wits/core.hpp"
#include "wits/numerics.hpp"

namespace wits {

/// U1 = a X0 + b.
struct LinearPolicy {
  double a = 0.0;
  double b = 0.0;
};

/// U1 = a sign(X0) - X0, so that X1 takes the values +-a.
struct TwoPointPolicy {
  double a = 0.0;
};

struct RegimeBounds {
  double P1 = 0.0;
  double P2 = 0.0;
};

/// Best linear cost: (sqrt(Q) - sqrt(P))^2 N / ((sqrt(Q) - sqrt(P))^2 + N) on [0, Q], 0 beyond.
double mmse_linear(double P, const ProblemParams& params);

/// (-sqrt(P/Q), 0) for P <= Q, else (-1, sqrt(P - Q)).
LinearPolicy linear_policy_for_power(double P, const ProblemParams& params);

/// Ends of the affine segment of the Gaussian-policy optimum.
/// Throws Errc::RegimeNotApplicable unless Q > 4N.
RegimeBounds p1_p2(const ProblemParams& params);

/// N (Q - N - P) / Q for Q > 4N and P in [P1, P2]; mmse_linear(P) otherwise.
double mmse_gaussian(double P, const ProblemParams& params);

/// (P_two(a), MMSE_two(a)) with P_two(a) = Q + a (a - 2 sqrt(2Q/pi)).
CostPoint two_point_costs(const TwoPointPolicy& policy, const ProblemParams& params,
                          const QuadratureConfig& cfg = {});

/// Conditional mean a tanh(a y / N) of X1 given Y1 = y.
double two_point_decoder(double y, double a, double N);

/// Q (1 - 2/pi), attained at a = sqrt(2Q/pi).
double two_point_min_power(const ProblemParams& params);

/// The a >= sqrt(2Q/pi) with P_two(a) = P, found by root finding.
/// Throws Errc::EmptyFeasibleSet below the minimum power.
double two_point_a_for_power(double P, const ProblemParams& params);

/// Unique positive root of P^2 (P + Q + N) = Q N^2.
double p_star(const ProblemParams& params);

/// Dirty-paper cost: N (N sqrt(Q) - P sqrt(P+Q+N))^2 / ((P+N)^2 (P+Q+N)) up
/// to p_star, 0 beyond.
double mmse_dpc(double P, const ProblemParams& params);

/// Costa-type coefficient P (sqrt(Q) + sqrt(P+Q+N)) / (sqrt(Q) (P+N)).
double dpc_alpha_star(double P, const ProblemParams& params);

/// P(P+Q+N) - PQ(1-alpha)^2 - N(P + alpha^2 Q); zero when the rate constraint is tight.
double dpc_constraint_residual(double P, double alpha, const ProblemParams& params);

struct LinDpcOptimum {
  double mmse = 0.0;
  double rho_star = 0.0;
};

/// Number of rho samples scanned by mmse_lin_dpc; includes rho = -1, 0, 1.
inline constexpr std::size_t kLinDpcRhoGrid = 2001;

/// Linear state shaping followed by dirty-paper coding: the DPC cost with
/// P -> P(1 - rho^2) and Q -> (sqrt(Q) + rho sqrt(P))^2, minimized over rho.
LinDpcOptimum mmse_lin_dpc(double P, const ProblemParams& params,
                           Execution ex = Execution::Serial);

namespace detail {
/// p_star and mmse_dpc for a raw state variance Qs >= 0 (Qs = 0 allowed).
double p_star_raw(double Qs, double N);
double mmse_dpc_raw(double P, double Qs, double N);
}  // namespace detail

/// Evaluates one strategy on a sorted, nonnegative power grid. Infeasible
/// points (coord without a feasible rho, two-point below its minimum power,
/// gaussian/coord with P > Q) are kept with S absent and a reason.
/// Rows are always in grid order.
TradeoffCurve curve(Strategy strategy, const ProblemParams& params, std::span<const double> P_grid,
                    const QuadratureConfig& cfg = {}, Execution ex = Execution::Parallel);

/// The (P_two(a), MMSE_two(a)) locus over a sorted, nonnegative grid of a.
TradeoffCurve two_point_locus(const ProblemParams& params, std::span<const double> a_grid,
                              const QuadratureConfig& cfg = {}, Execution ex = Execution::Parallel);

/// One column per strategy on a shared power grid.
struct CompareTable {
  std::vector<double> P;
  std::vector<TradeoffCurve> columns;
};

CompareTable compare(const ProblemParams& params, std::span<const double> P_grid,
                     const QuadratureConfig& cfg = {}, Execution ex = Execution::Parallel);

}  // namespace wits
