#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "wits/core.hpp"

namespace wits {

/// Symmetric covariance of at most four jointly Gaussian variables.
class CovarianceMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  explicit CovarianceMatrix(std::size_t dim);
  /// Row-major entries; throws Errc::InvalidArgument unless rows form a
  /// square, symmetric matrix of dimension 1..4.
  CovarianceMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t dim() const noexcept { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * kMaxDim + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * kMaxDim + j]; }

  /// Determinant by cofactor expansion.
  double det() const;
  /// Sub-covariance of the listed components, in the given order.
  CovarianceMatrix marginal(std::initializer_list<std::size_t> idx) const;

 private:
  std::size_t dim_;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

/// A centred Gaussian vector. Construction checks symmetry and that every
/// eigenvalue is >= -1e-12; slightly negative eigenvalues are clamped to zero.
class GaussianVector {
 public:
  GaussianVector(CovarianceMatrix cov, std::vector<std::string> labels = {});

  const CovarianceMatrix& cov() const noexcept { return cov_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t dim() const noexcept { return cov_.dim(); }

 private:
  CovarianceMatrix cov_;
  std::vector<std::string> labels_;
};

/// h = 1/2 log2((2 pi e)^k det K) in bits; -inf when det K <= 0.
double gaussian_entropy_bits(const GaussianVector& g);
double gaussian_entropy_bits(const CovarianceMatrix& cov);

/// Covariance of (X0, W2, U1) parameterized by the correlation triple.
/// V is the W2 variance; none of the closed forms depend on it.
CovarianceMatrix covariance_x0_w2_u1(const CorrelationTriple& rho, double P,
                                     const ProblemParams& params, double V = 1.0);

/// I(U1; Y1 | X0, W2) - I(X0; W2) for jointly Gaussian (X0, W2, U1):
/// 1/2 log2((P/N) margin + (1 - r1^2)); -inf if the argument is <= 0.
double lemma4_ic(const CorrelationTriple& rho, double P, const ProblemParams& params);

/// The channel term I(U1; Y1 | X0, W2) alone.
double lemma4_channel_term(const CorrelationTriple& rho, double P, const ProblemParams& params);

/// I(X0; W2) = 1/2 log2(1 / (1 - r1^2)); +inf at |r1| = 1.
double info_state_quantizer(double rho1);

/// E[(X1 - E[X1 | W2, Y1])^2] = N s / (N + s), with
/// s = Q(1 - r1^2) + P(1 - r3^2) + 2 sqrt(QP)(r2 - r1 r3).
/// Throws Errc::NegativeEffectiveVariance if s < -1e-12.
double lemma4_mmse(const CorrelationTriple& rho, double P, const ProblemParams& params);

/// Best r2 for given (r1, r3): r1 r3 - sqrt((1 - r1^2)(1 - r3^2) - (N/P) r1^2).
/// Throws Errc::InfeasibleRho when the radicand is negative.
double rho2_star(double rho1, double rho3, double P, double N);

/// Closed-form optimum over Gaussian policies at power P in [0, Q].
CorrelationTriple optimal_rho_triple(double P, const ProblemParams& params);

/// Entropy of g after scaling one component by beta (= h(g) + log2|beta|).
/// Throws Errc::ZeroScale for beta == 0.
double lemma6_entropy_shift(const GaussianVector& g, std::size_t component, double beta);

/// Channel Y = X0~ + W2~ + U0~ + Z~ with state (X0~, W2~) known to the encoder,
/// W2~ also known to the decoder, and Costa auxiliary W1~ = U0~ + alpha X0~.
struct StateChannelParams {
  double q = 0.0;
  double v = 0.0;
  double mu = 0.0;
  double P0 = 0.0;
  double alpha = 0.0;
  double N = 0.0;

  void validate() const;
};

/// I(W1~; Y~, W2~) - I(W1~; X0~, W2~) in bits.
/// Throws Errc::DegenerateChannel if the log argument's denominator is <= 0.
double state_dep_ic(const StateChannelParams& p);

/// Feasibility of an information constraint value, with 1e-12 slack.
bool theorem1_feasible(double ic_bits);

namespace detail {

/// Optimal r3^2 for fixed r1^2 once r2 is set to rho2_star.
double lemma5_rho3_sq(double rho1_sq, double P, const ProblemParams& params);
/// Objective Q(1 - r1^2) + P(1 - r3^2) - 2 sqrt(QP) sqrt(...) at the optimal r3^2.
double lemma5_objective(double rho1_sq, double P, const ProblemParams& params);
/// Piecewise breakpoints rho_a <= rho_b of the objective (NaN if complex).
std::array<double, 2> lemma5_breakpoints(double P, const ProblemParams& params);

}  // namespace detail

}  // namespace wits
