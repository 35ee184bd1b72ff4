#include "wits/gaussian_info.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

namespace wits {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;
constexpr double kSlack = 1e-12;

double det_recursive(const std::array<double, 16>& a, std::size_t stride, std::size_t n,
                     const std::array<std::size_t, 4>& rows,
                     const std::array<std::size_t, 4>& cols) {
  if (n == 1) return a[rows[0] * stride + cols[0]];
  if (n == 2) {
    return a[rows[0] * stride + cols[0]] * a[rows[1] * stride + cols[1]] -
           a[rows[0] * stride + cols[1]] * a[rows[1] * stride + cols[0]];
  }
  // Expand along the first remaining row.
  std::array<std::size_t, 4> sub_rows{};
  for (std::size_t i = 1; i < n; ++i) sub_rows[i - 1] = rows[i];
  double det = 0.0;
  double sign = 1.0;
  for (std::size_t j = 0; j < n; ++j) {
    std::array<std::size_t, 4> sub_cols{};
    for (std::size_t k = 0, m = 0; k < n; ++k) {
      if (k != j) sub_cols[m++] = cols[k];
    }
    const double entry = a[rows[0] * stride + cols[j]];
    if (entry != 0.0) det += sign * entry * det_recursive(a, stride, n - 1, sub_rows, sub_cols);
    sign = -sign;
  }
  return det;
}

}  // namespace

CovarianceMatrix::CovarianceMatrix(std::size_t dim) : dim_(dim) {
  if (dim == 0 || dim > kMaxDim) {
    throw Error(Errc::InvalidArgument, "CovarianceMatrix: dimension must be 1..4");
  }
}

CovarianceMatrix::CovarianceMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : CovarianceMatrix(rows.size()) {
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != dim_) {
      throw Error(Errc::InvalidArgument, "CovarianceMatrix: rows must form a square matrix");
    }
    std::size_t j = 0;
    for (double v : row) (*this)(i, j++) = v;
    ++i;
  }
}

double CovarianceMatrix::det() const {
  return det_recursive(a_, kMaxDim, dim_, {0, 1, 2, 3}, {0, 1, 2, 3});
}

CovarianceMatrix CovarianceMatrix::marginal(std::initializer_list<std::size_t> idx) const {
  CovarianceMatrix m(idx.size());
  std::size_t i = 0;
  for (std::size_t r : idx) {
    std::size_t j = 0;
    for (std::size_t c : idx) {
      if (r >= dim_ || c >= dim_) {
        throw Error(Errc::InvalidArgument, "CovarianceMatrix::marginal: index out of range");
      }
      m(i, j++) = (*this)(r, c);
    }
    ++i;
  }
  return m;
}

GaussianVector::GaussianVector(CovarianceMatrix cov, std::vector<std::string> labels)
    : cov_(cov), labels_(std::move(labels)) {
  const std::size_t k = cov_.dim();
  if (!labels_.empty() && labels_.size() != k) {
    throw Error(Errc::InvalidArgument, "GaussianVector: one label per component");
  }
  Eigen::MatrixXd m(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double aij = cov_(i, j), aji = cov_(j, i);
      if (!std::isfinite(aij) ||
          std::abs(aij - aji) > 1e-12 * std::max({1.0, std::abs(aij), std::abs(aji)})) {
        throw Error(Errc::InvalidArgument, "GaussianVector: covariance must be symmetric");
      }
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = aij;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -kSlack) {
    std::ostringstream os;
    os << "GaussianVector: covariance has eigenvalue " << lambda.minCoeff();
    throw Error(Errc::InvalidArgument, os.str());
  }
  if (lambda.minCoeff() < 0.0) {
    const Eigen::MatrixXd clamped = eig.eigenvectors() * lambda.cwiseMax(0.0).asDiagonal() *
                                    eig.eigenvectors().transpose();
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        cov_(i, j) = clamped(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
}

double gaussian_entropy_bits(const CovarianceMatrix& cov) {
  const double det = cov.det();
  if (!(det > 0.0)) return -std::numeric_limits<double>::infinity();
  return 0.5 * (static_cast<double>(cov.dim()) * std::log2(kTwoPiE) + std::log2(det));
}

double gaussian_entropy_bits(const GaussianVector& g) { return gaussian_entropy_bits(g.cov()); }

CovarianceMatrix covariance_x0_w2_u1(const CorrelationTriple& rho, double P,
                                     const ProblemParams& params, double V) {
  const double Q = params.Q();
  const double qv = rho.rho1() * std::sqrt(Q * V);
  const double qp = rho.rho2() * std::sqrt(Q * P);
  const double vp = rho.rho3() * std::sqrt(V * P);
  return CovarianceMatrix{{Q, qv, qp}, {qv, V, vp}, {qp, vp, P}};
}

double lemma4_ic(const CorrelationTriple& rho, double P, const ProblemParams& params) {
  const double arg = (P / params.N()) * rho.psd_margin() + (1.0 - rho.rho1() * rho.rho1());
  if (!(arg > 0.0)) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log2(arg);
}

double info_state_quantizer(double rho1) {
  const double rest = 1.0 - rho1 * rho1;
  if (!(rest > 0.0)) return std::numeric_limits<double>::infinity();
  return -0.5 * std::log2(rest);
}

double lemma4_channel_term(const CorrelationTriple& rho, double P, const ProblemParams& params) {
  const double rest = 1.0 - rho.rho1() * rho.rho1();
  if (!(rest > 0.0)) return 0.0;  // W2 determines X0; nothing left for U1 to convey
  return 0.5 * std::log2(1.0 + (P / params.N()) * rho.psd_margin() / rest);
}

double lemma4_mmse(const CorrelationTriple& rho, double P, const ProblemParams& params) {
  const double Q = params.Q();
  const double r1 = rho.rho1(), r2 = rho.rho2(), r3 = rho.rho3();
  double s = Q * (1.0 - r1 * r1) + P * (1.0 - r3 * r3) + 2.0 * std::sqrt(Q * P) * (r2 - r1 * r3);
  if (s < -kSlack) {
    std::ostringstream os;
    os << "lemma4_mmse: effective variance " << s << " < 0";
    throw Error(Errc::NegativeEffectiveVariance, os.str());
  }
  if (s < 0.0) s = 0.0;
  return params.N() * s / (params.N() + s);
}

double rho2_star(double rho1, double rho3, double P, double N) {
  if (!(P > 0.0)) throw Error(Errc::InvalidArgument, "rho2_star: need P > 0");
  double radicand = (1.0 - rho1 * rho1) * (1.0 - rho3 * rho3) - (N / P) * rho1 * rho1;
  if (radicand < -kSlack) {
    std::ostringstream os;
    os << "rho2_star: radicand " << radicand << " < 0";
    throw Error(Errc::InfeasibleRho, os.str());
  }
  if (radicand < 0.0) radicand = 0.0;
  return rho1 * rho3 - std::sqrt(radicand);
}

CorrelationTriple optimal_rho_triple(double P, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  if (Q > 4.0 * N && P > 0.0) {
    const double root = std::sqrt(Q * (Q - 4.0 * N));
    const double p1 = 0.5 * (Q - 2.0 * N - root);
    const double p2 = 0.5 * (Q - 2.0 * N + root);
    if (P >= p1 && P <= p2) {
      const double num = P * Q - (P + N) * (P + N);
      const double rho1 = std::sqrt(std::max(num, 0.0) / (Q * (P + N)));
      const double rho2 = std::max(-1.0, -(P + N) / std::sqrt(P * Q));
      return CorrelationTriple::make(rho1, rho2, 0.0);
    }
  }
  return CorrelationTriple::make(0.0, -1.0, 0.0);
}

double lemma6_entropy_shift(const GaussianVector& g, std::size_t component, double beta) {
  if (beta == 0.0) throw Error(Errc::ZeroScale, "lemma6_entropy_shift: beta must be nonzero");
  if (component >= g.dim()) {
    throw Error(Errc::InvalidArgument, "lemma6_entropy_shift: component out of range");
  }
  CovarianceMatrix scaled = g.cov();
  for (std::size_t j = 0; j < scaled.dim(); ++j) {
    scaled(component, j) *= beta;
    scaled(j, component) *= beta;
  }
  return gaussian_entropy_bits(scaled);
}

void StateChannelParams::validate() const {
  if (!(q >= 0.0) || !(v >= 0.0) || !(P0 >= 0.0) || !(N >= 0.0) || !(std::abs(mu) <= 1.0) ||
      !std::isfinite(alpha)) {
    throw Error(Errc::InvalidArgument,
                "StateChannelParams: need q, v, P0, N >= 0, |mu| <= 1, finite alpha");
  }
}

double state_dep_ic(const StateChannelParams& p) {
  p.validate();
  const double qe = p.q * (1.0 - p.mu * p.mu);
  const double denom =
      p.P0 * p.N + qe * ((1.0 - p.alpha) * (1.0 - p.alpha) * p.P0 + p.alpha * p.alpha * p.N);
  if (!(denom > 0.0)) {
    throw Error(Errc::DegenerateChannel, "state_dep_ic: nonpositive denominator");
  }
  const double num = p.P0 * (qe + p.P0 + p.N);
  if (!(num > 0.0)) return -std::numeric_limits<double>::infinity();
  return 0.5 * std::log2(num / denom);
}

bool theorem1_feasible(double ic_bits) { return ic_bits >= -kSlack; }

namespace detail {

double lemma5_rho3_sq(double rho1_sq, double P, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  const double r = 1.0 - ((Q / P) * (1.0 - rho1_sq) + (N / P) * rho1_sq / (1.0 - rho1_sq));
  return std::max(r, 0.0);
}

double lemma5_objective(double rho1_sq, double P, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  const double r3sq = lemma5_rho3_sq(rho1_sq, P, params);
  double radicand = (1.0 - rho1_sq) * (1.0 - r3sq) - (N / P) * rho1_sq;
  if (radicand < -kSlack) return std::numeric_limits<double>::infinity();
  radicand = std::max(radicand, 0.0);
  return Q * (1.0 - rho1_sq) + P * (1.0 - r3sq) - 2.0 * std::sqrt(Q * P) * std::sqrt(radicand);
}

std::array<double, 2> lemma5_breakpoints(double P, const ProblemParams& params) {
  const double Q = params.Q(), N = params.N();
  const double disc = (P + N) * (P + N) - 4.0 * Q * N;
  if (disc < 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  const double root = std::sqrt(disc);
  return {(2.0 * Q - (P + N) - root) / (2.0 * Q), (2.0 * Q - (P + N) + root) / (2.0 * Q)};
}

}  // namespace detail

}  // namespace wits
