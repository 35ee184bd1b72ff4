#include "wits/core.hpp"

#include <cmath>
#include <sstream>

namespace wits {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NonPositiveVariance: return "NonPositiveVariance";
    case Errc::InvalidCorrelation: return "InvalidCorrelation";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::NoBracket: return "NoBracket";
    case Errc::EmptyFeasibleSet: return "EmptyFeasibleSet";
    case Errc::InfeasibleRho: return "InfeasibleRho";
    case Errc::NegativeEffectiveVariance: return "NegativeEffectiveVariance";
    case Errc::ZeroScale: return "ZeroScale";
    case Errc::DegenerateChannel: return "DegenerateChannel";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::RegimeNotApplicable: return "RegimeNotApplicable";
    case Errc::UnknownStrategy: return "UnknownStrategy";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

ProblemParams ProblemParams::make(double Q, double N) {
  if (!(Q > 0.0) || !(N > 0.0) || !std::isfinite(Q) || !std::isfinite(N)) {
    std::ostringstream os;
    os << "validate_params: need Q > 0 and N > 0, got Q=" << Q << ", N=" << N;
    throw Error(Errc::NonPositiveVariance, os.str());
  }
  return ProblemParams(Q, N);
}

ProblemParams validate_params(double Q, double N) { return ProblemParams::make(Q, N); }

double correlation_psd_margin(double r1, double r2, double r3) {
  return 1.0 - r1 * r1 - r2 * r2 - r3 * r3 + 2.0 * r1 * r2 * r3;
}

CorrelationTriple CorrelationTriple::make(double r1, double r2, double r3) {
  for (double r : {r1, r2, r3}) {
    if (!(std::abs(r) <= 1.0)) {
      std::ostringstream os;
      os << "CorrelationTriple: component " << r << " outside [-1, 1]";
      throw Error(Errc::InvalidCorrelation, os.str());
    }
  }
  double margin = correlation_psd_margin(r1, r2, r3);
  if (margin < -kPsdTolerance) {
    std::ostringstream os;
    os << "CorrelationTriple: covariance not PSD, margin " << margin;
    throw Error(Errc::InvalidCorrelation, os.str());
  }
  return CorrelationTriple(r1, r2, r3, margin < 0.0 ? 0.0 : margin);
}

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::Linear: return "linear";
    case Strategy::Gaussian: return "gaussian";
    case Strategy::TwoPoint: return "two-point";
    case Strategy::Dpc: return "dpc";
    case Strategy::LinDpc: return "lin-dpc";
    case Strategy::Coord: return "coord";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view name) {
  for (Strategy s : {Strategy::Linear, Strategy::Gaussian, Strategy::TwoPoint, Strategy::Dpc,
                     Strategy::LinDpc, Strategy::Coord}) {
    if (name == to_string(s)) return s;
  }
  if (name == "two_point" || name == "twopoint") return Strategy::TwoPoint;
  if (name == "lin+dpc" || name == "lin_dpc") return Strategy::LinDpc;
  throw Error(Errc::UnknownStrategy, "unknown strategy '" + std::string(name) + "'");
}

}  // namespace wits
