#include "wits/skewnormal.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace wits {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;
constexpr double kInf = std::numeric_limits<double>::infinity();

// k0 / (t + (k0+1) / (t + (k0+2) / (t + ...))), modified Lentz on the denominator.
double mills_cf_tail(double t, double k0) {
  constexpr double tiny = 1e-300;
  double g = t;
  double c = t;
  double d = 0.0;
  for (int k = 1; k < 4000; ++k) {
    const double a = k0 + static_cast<double>(k);
    d = t + a * d;
    if (d == 0.0) d = tiny;
    c = t + a / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    g *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return k0 / g;
}

// 1 - u m(u) - m(u)^2 with m = phi/Phi, the variance factor of a standard
// normal truncated to values above -u.
double truncated_variance_factor(double u) {
  if (u >= -5.0) {
    const double m = mills_ratio(u);
    return 1.0 - u * m - m * m;
  }
  // With t = -u: m = t + w, w = 1/(t + v), v = 2/(t + 3/(t + ...)).
  // Then 1 - u m - m^2 = w (v - w), free of cancellation.
  const double t = -u;
  const double v = mills_cf_tail(t, 2.0);
  const double w = 1.0 / (t + v);
  return w * (v - w);
}

}  // namespace

CoordParams CoordParams::make(double P, double rho, const ProblemParams& params) {
  const double Q = params.Q();
  if (!(P >= 0.0) || P > Q * (1.0 + 1e-12) || !(std::abs(rho) <= 1.0)) {
    std::ostringstream os;
    os << "CoordParams: need 0 <= P <= Q and |rho| <= 1, got P=" << P << ", rho=" << rho;
    throw Error(Errc::InvalidArgument, os.str());
  }
  CoordParams cp;
  cp.P_ = std::min(P, Q);
  cp.rho_ = rho;
  cp.Q_ = Q;
  cp.N_ = params.N();
  cp.amp_ = std::sqrt(Q) + rho * std::sqrt(cp.P_);
  cp.power_eff_ = cp.P_ * (1.0 - rho * rho);
  // (sqrt(Q) + rho sqrt(P))^2 + P(1 - rho^2), which equals P + Q + 2 rho sqrt(PQ).
  cp.T_ = std::max(cp.amp_ * cp.amp_ + cp.power_eff_, 0.0);
  return cp;
}

double CoordParams::skew_y() const { return std::sqrt(T_ / N_); }

double CoordParams::skew_yw() const {
  if (power_eff_ == 0.0) return skew_y();
  if (amp_ == 0.0) return kInf;
  const double a2 = amp_ * amp_;
  return std::sqrt((T_ * a2 * N_ + power_eff_ * (T_ + N_) * (T_ + N_)) / (a2 * N_ * N_));
}

double psi(double alpha, const QuadratureConfig& cfg) {
  if (alpha == 0.0) return 0.0;
  if (!std::isfinite(alpha)) return 1.0;
  const double a = std::abs(alpha);
  if (a <= 1.0) {
    auto integrand = [a](double x) {
      // t log2 t with t = 2 Phi(a x), evaluated through log t.
      const double log_t = std::numbers::ln2 + log_normal_cdf(a * x);
      const double t = std::exp(log_t);
      return t == 0.0 ? 0.0 : t * log_t / std::numbers::ln2;
    };
    return gauss_weighted_integral(integrand, cfg);
  }
  // For large a the integrand steps from 0 to 2 over a width 1/a around x = 0.
  // With s = a x, psi = 1 + (1/a) * int [g(s) - 2 step(s)] phi(s / a) ds, whose
  // integrand decays like Phi(-|s|) on both sides.
  auto left = [a](double s) {
    const double log_t = std::numbers::ln2 + log_normal_cdf(s);
    const double t = std::exp(log_t);
    return t == 0.0 ? 0.0 : t * log_t / std::numbers::ln2 * normal_pdf(s / a);
  };
  auto right = [a](double s) {
    // t = 2 - 2q with q = Phi(-s); t log2 t - 2 = -2q + (2 - 2q) log2(1 - q).
    const double q = normal_cdf(-s);
    return (-2.0 * q + (2.0 - 2.0 * q) * std::log1p(-q) / std::numbers::ln2) * normal_pdf(s / a);
  };
  const double correction = integrate_interval(left, -40.0, 0.0, cfg, 8).value +
                            integrate_interval(right, 0.0, 40.0, cfg, 8).value;
  return 1.0 + correction / a;
}

Lemma8Entropies lemma8_entropies(const CoordParams& cp, const QuadratureConfig& cfg) {
  const double pe = cp.effective_power();
  if (pe == 0.0 || cp.state_amplitude() == 0.0) {
    throw Error(Errc::DegenerateInput,
                "lemma8_entropies: need P(1 - rho^2) > 0 and sqrt(Q) + rho sqrt(P) != 0");
  }
  const double T = cp.T(), N = cp.N();
  Lemma8Entropies h;
  h.h_x0w1_given_w2 = 0.5 * std::log2(kTwoPiE * kTwoPiE * cp.P() * cp.Q() * (1.0 - cp.rho() * cp.rho())) - 1.0;
  h.h_y_given_w2 = 0.5 * std::log2(kTwoPiE * (T + N)) - psi(cp.skew_y(), cfg);
  h.h_yw1_given_w2 = 0.5 * std::log2(kTwoPiE * kTwoPiE * (T + N) * N * pe / (pe + N)) -
                     psi(cp.skew_yw(), cfg);
  return h;
}

double coord_ic(const CoordParams& cp, const QuadratureConfig& cfg) {
  const double capacity = 0.5 * std::log2(1.0 + cp.effective_power() / cp.N());
  return capacity - psi(cp.skew_y(), cfg) + psi(cp.skew_yw(), cfg) - 1.0;
}

double skew_density(double y1, double T, double N) {
  const double u = y1 * std::sqrt(T / (N * (T + N)));
  return 2.0 / std::sqrt(T + N) * normal_cdf(u) * normal_pdf(y1 / std::sqrt(T + N));
}

double skew_cond_mean(double y1, double T, double N) {
  const double u = y1 * std::sqrt(T / (N * (T + N)));
  const double sigma = std::sqrt(T * N / (T + N));
  return y1 * T / (T + N) + sigma * mills_ratio(u);
}

double skew_cond_variance(double y1, double T, double N) {
  const double u = y1 * std::sqrt(T / (N * (T + N)));
  return T * N / (T + N) * std::max(truncated_variance_factor(u), 0.0);
}

double coord_mmse_at_rho(const CoordParams& cp, const QuadratureConfig& cfg) {
  const double T = cp.T(), N = cp.N();
  if (T == 0.0) return 0.0;
  const double c1 = std::sqrt((2.0 * T + N) / (N * (T + N)));
  const double c2 = std::sqrt(T / (N * (T + N)));
  const double r = c2 / c1;  // < 1/sqrt(2)
  // After t = c1 y the integrand decays like exp(-(1 - r^2) t^2 / 2).
  QuadratureConfig wide = cfg;
  wide.truncation_radius = cfg.truncation_radius / std::sqrt(1.0 - r * r);
  auto integrand = [r](double t) { return std::exp(log_normal_pdf(t) - log_normal_cdf(r * t)); };
  const double integral = integral_real_line(integrand, wide) / c1;
  const double factor = 1.0 - 2.0 / std::sqrt(T + N) / (2.0 * std::numbers::pi) * integral;
  return T * N / (T + N) * factor;
}

CoordOptimum mmse_coord(double P, const ProblemParams& params, const QuadratureConfig& cfg,
                        Execution ex) {
  if (!(P >= 0.0) || P > params.Q() * (1.0 + 1e-12)) {
    throw Error(Errc::InvalidArgument, "mmse_coord: need 0 <= P <= Q");
  }
  auto objective = [&](double rho) {
    const auto cp = CoordParams::make(P, rho, params);
    if (coord_ic(cp, cfg) < 0.0) return kInf;
    return coord_mmse_at_rho(cp, cfg);
  };
  try {
    const auto best = minimize_1d(objective, -1.0, 1.0, kCoordRhoGrid, 1e-9, ex);
    return {best.value, best.argmin};
  } catch (const Error& e) {
    if (e.code() != Errc::EmptyFeasibleSet) throw;
    std::ostringstream os;
    os << "mmse_coord: no rho in [-1, 1] satisfies the information constraint at P=" << P;
    throw Error(Errc::EmptyFeasibleSet, os.str());
  }
}

}  // namespace wits
