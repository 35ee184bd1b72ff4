#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wits {

enum class Errc {
  NonPositiveVariance,
  InvalidCorrelation,
  NonConvergence,
  NoBracket,
  EmptyFeasibleSet,
  InfeasibleRho,
  NegativeEffectiveVariance,
  ZeroScale,
  DegenerateChannel,
  DegenerateInput,
  RegimeNotApplicable,
  UnknownStrategy,
  InvalidArgument,
};

std::string_view to_string(Errc code);

/// Error raised by every numerical routine in the library. The code is part of
/// the contract; the message names the operation that failed.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

/// Variances of the state X0 ~ N(0, Q) and the channel noise Z1 ~ N(0, N).
class ProblemParams {
 public:
  /// Throws Errc::NonPositiveVariance unless Q > 0 and N > 0.
  static ProblemParams make(double Q, double N);

  double Q() const noexcept { return Q_; }
  double N() const noexcept { return N_; }

 private:
  ProblemParams(double Q, double N) : Q_(Q), N_(N) {}
  double Q_;
  double N_;
};

ProblemParams validate_params(double Q, double N);

/// A point on the power/estimation plane: P = E[U1^2], S = E[(X1 - U2)^2].
struct CostPoint {
  double P = 0.0;
  double S = 0.0;
};

/// Correlations of (X0, W2, U1). The constructor enforces the
/// positive-semidefinite condition 1 - r1^2 - r2^2 - r3^2 + 2 r1 r2 r3 >= 0,
/// accepting up to -1e-12 of rounding and clamping the margin to zero.
class CorrelationTriple {
 public:
  static constexpr double kPsdTolerance = 1e-12;

  static CorrelationTriple make(double rho1, double rho2, double rho3);

  double rho1() const noexcept { return rho1_; }
  double rho2() const noexcept { return rho2_; }
  double rho3() const noexcept { return rho3_; }

  /// 1 - r1^2 - r2^2 - r3^2 + 2 r1 r2 r3, clamped at zero.
  double psd_margin() const noexcept { return margin_; }

 private:
  CorrelationTriple(double r1, double r2, double r3, double m)
      : rho1_(r1), rho2_(r2), rho3_(r3), margin_(m) {}
  double rho1_;
  double rho2_;
  double rho3_;
  double margin_;
};

double correlation_psd_margin(double rho1, double rho2, double rho3);

enum class Strategy { Linear, Gaussian, TwoPoint, Dpc, LinDpc, Coord };

std::string_view to_string(Strategy s);
/// Accepts the CLI spellings: linear, gaussian, two-point, dpc, lin-dpc, coord.
Strategy parse_strategy(std::string_view name);

/// Whether a grid is traversed by power P or by the two-point amplitude a.
enum class SweepParameter { Power, Amplitude };

struct CurvePoint {
  double P = 0.0;
  std::optional<double> S;     // absent when the strategy is infeasible here
  std::optional<double> aux1;  // rho*, a or alpha*, depending on the strategy
  std::optional<double> aux2;
  bool feasible = true;
  std::string reason;  // set when !feasible
  double sweep = 0.0;  // value of the sweep parameter (P or a)
};

/// Samples of one strategy's trade-off. Points are strictly increasing in the
/// sweep parameter; for power sweeps that is P itself.
struct TradeoffCurve {
  Strategy strategy;
  ProblemParams params;
  SweepParameter sweep = SweepParameter::Power;
  std::vector<CurvePoint> points;
};

/// Monte-Carlo estimate of (power, MMSE) with standard errors.
struct EmpiricalCost {
  double power_mean = 0.0;
  double power_stderr = 0.0;
  double mmse_mean = 0.0;
  double mmse_stderr = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

}  // namespace wits
