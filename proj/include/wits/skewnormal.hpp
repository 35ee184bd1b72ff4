#pragma once

#include "wits/core.hpp"
#include "wits/numerics.hpp"

namespace wits {

/// Hybrid policy with sign auxiliary W2 = sign(X1): the channel input
/// U1 = rho sqrt(P/Q) X0 + X~, X~ ~ N(0, P(1 - rho^2)) independent of X0,
/// so that X1 = X0 + U1 ~ N(0, T) with T = P + Q + 2 rho sqrt(PQ).
class CoordParams {
 public:
  /// Requires 0 <= P <= Q and |rho| <= 1.
  static CoordParams make(double P, double rho, const ProblemParams& params);

  double P() const noexcept { return P_; }
  double rho() const noexcept { return rho_; }
  double Q() const noexcept { return Q_; }
  double N() const noexcept { return N_; }
  /// Var(X1).
  double T() const noexcept { return T_; }
  /// sqrt(Q) + rho sqrt(P): standard deviation of the effective channel state.
  double state_amplitude() const noexcept { return amp_; }
  /// P(1 - rho^2): power left for the dirty-paper input X~.
  double effective_power() const noexcept { return power_eff_; }
  /// Costa coefficient P(1 - rho^2) / (P(1 - rho^2) + N).
  double costa_alpha() const noexcept { return power_eff_ / (power_eff_ + N_); }
  /// Skewness of Y1 given W2: sqrt(T / N).
  double skew_y() const;
  /// Skewness of (Y1, W1) given W2; +inf when the state amplitude vanishes.
  double skew_yw() const;

 private:
  CoordParams() = default;
  double P_ = 0.0, rho_ = 0.0, Q_ = 0.0, N_ = 0.0, T_ = 0.0, amp_ = 0.0, power_eff_ = 0.0;
};

/// Psi(alpha) = int 2 Phi(alpha x) log2(2 Phi(alpha x)) phi(x) dx, the entropy
/// deficit (in bits) of a skew-normal variable with skewness alpha.
/// Even in alpha; Psi(0) = 0 and Psi(+-inf) = 1.
double psi(double alpha, const QuadratureConfig& cfg = {});

struct Lemma8Entropies {
  double h_x0w1_given_w2 = 0.0;
  double h_y_given_w2 = 0.0;
  double h_yw1_given_w2 = 0.0;
};

/// Conditional entropies (bits) given the sign variable.
/// Throws Errc::DegenerateInput if P(1 - rho^2) == 0 or sqrt(Q) + rho sqrt(P) == 0.
Lemma8Entropies lemma8_entropies(const CoordParams& cp, const QuadratureConfig& cfg = {});

/// Information-constraint slack (bits) of the hybrid scheme:
/// 1/2 log2(1 + P(1 - rho^2)/N) - Psi(skew_y) + Psi(skew_yw) - 1.
/// The policy is feasible iff the result is >= 0.
double coord_ic(const CoordParams& cp, const QuadratureConfig& cfg = {});

/// Density of Y1 = X1 + Z1 given X1 >= 0, with X1 ~ N(0, T), Z1 ~ N(0, N).
double skew_density(double y1, double T, double N);

/// E[X1 | Y1 = y1, X1 >= 0].
double skew_cond_mean(double y1, double T, double N);

/// Var(X1 | Y1 = y1, X1 >= 0) = (TN/(T+N)) (1 - u m(u) - m(u)^2), with
/// u = y1 sqrt(T/(N(T+N))) and m the Mills ratio. Stable for u << 0.
double skew_cond_variance(double y1, double T, double N);

/// Estimation cost of the hybrid scheme for a fixed rho:
/// (TN/(T+N)) (1 - 2/sqrt(T+N) / (2 pi) int phi(y c1) / Phi(y c2) dy).
double coord_mmse_at_rho(const CoordParams& cp, const QuadratureConfig& cfg = {});

struct CoordOptimum {
  double mmse = 0.0;
  double rho_star = 0.0;
};

/// Number of rho samples scanned by mmse_coord before refinement.
inline constexpr std::size_t kCoordRhoGrid = 2001;

/// Minimum of coord_mmse_at_rho over rho in [-1, 1] subject to coord_ic >= 0.
/// Throws Errc::EmptyFeasibleSet when no rho satisfies the constraint.
CoordOptimum mmse_coord(double P, const ProblemParams& params, const QuadratureConfig& cfg = {},
                        Execution ex = Execution::Parallel);

}  // namespace wits
