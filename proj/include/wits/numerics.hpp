#pragma once

#include <cstddef>
#include <functional>

#include "wits/parallel.hpp"

namespace wits {

using RealFn = std::function<double(double)>;

/// Controls the adaptive Gauss-Kronrod integrator. The whole-line integrals
/// are truncated to [-R, R] with R = truncation_radius (in units of the
/// integrand's Gaussian scale); callers rescale their variable accordingly.
struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 4000;
  double truncation_radius = 12.0;

  /// Throws Errc::InvalidArgument on nonpositive tolerances or R < 8.
  void validate() const;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t subdivisions = 0;
};

/// Adaptive 7/15-point Gauss-Kronrod on [a, b], starting from `initial_panels`
/// equal panels. Throws Errc::NonConvergence when the tolerance is not met
/// within cfg.max_subdivisions.
QuadratureResult integrate_interval(const RealFn& f, double a, double b,
                                    const QuadratureConfig& cfg,
                                    std::size_t initial_panels = 2);

/// Integral of f(x) * phi(x) over the real line, phi the standard normal density.
double gauss_weighted_integral(const RealFn& f, const QuadratureConfig& cfg = {});

/// Integral of f over the real line for integrands with Gaussian decay.
double integral_real_line(const RealFn& f, const QuadratureConfig& cfg = {});

double normal_pdf(double x);
double log_normal_pdf(double x);
double normal_cdf(double x);
/// log Phi(x), accurate deep into the left tail.
double log_normal_cdf(double x);

/// phi(x) / Phi(x). Direct evaluation for x >= -10; for x < -10 the ratio is
/// obtained from the continued fraction of the upper-tail Mills ratio.
double mills_ratio(double x);

/// Root of f in [lo, hi] by Brent's method; bracket width on return <= tol.
/// Throws Errc::NoBracket if f(lo) and f(hi) have the same strict sign.
double find_root(const RealFn& f, double lo, double hi, double tol = 1e-12);

struct Minimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Scans `grid` evenly spaced points of [lo, hi], then refines by golden
/// section on the two cells around the best sample. Infeasible points are
/// signalled by f returning +inf; this assumes the feasible set is an
/// interval (or a few intervals) so that the best cell contains the local
/// optimum, which holds for every constraint handled in this library.
/// Throws Errc::EmptyFeasibleSet when no grid sample is finite.
Minimum minimize_1d(const RealFn& f, double lo, double hi, std::size_t grid, double tol = 1e-9,
                    Execution ex = Execution::Serial);

}  // namespace wits
