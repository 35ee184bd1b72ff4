#include "wits/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

namespace wits {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

struct Accum {
  Welford power;
  Welford err;
  Welford err_pos;
  Welford err_neg;

  void merge(const Accum& o) noexcept {
    power.merge(o.power);
    err.merge(o.err);
    err_pos.merge(o.err_pos);
    err_neg.merge(o.err_neg);
  }
};

// Runs `body(rng, count, acc)` per batch and merges the batches pairwise in
// batch order, so the result is independent of scheduling.
template <class Body>
Accum run_batches(const SimConfig& cfg, Execution ex, Body&& body) {
  cfg.validate();
  const std::uint64_t nb = (cfg.n_samples + cfg.batch_size - 1) / cfg.batch_size;
  auto parts = parallel_map_index<Accum>(
      static_cast<std::size_t>(nb),
      [&](std::size_t b) {
        Rng rng(cfg.seed, b);
        const std::uint64_t begin = b * cfg.batch_size;
        const std::uint64_t count = std::min(cfg.batch_size, cfg.n_samples - begin);
        Accum acc;
        body(rng, count, acc);
        return acc;
      },
      ex);
  for (std::size_t width = 1; width < parts.size(); width *= 2) {
    for (std::size_t i = 0; i + width < parts.size(); i += 2 * width) parts[i].merge(parts[i + width]);
  }
  return parts.front();
}

struct NoiseDraw {
  double z;
  double weight;
};

// Z ~ N(0, (scale sn)^2) with weight phi_sn(z) / phi_{scale sn}(z).
NoiseDraw draw_noise(Rng& rng, double sn, double scale) {
  const double g = rng.normal();
  if (scale == 1.0) return {sn * g, 1.0};
  return {scale * sn * g, scale * std::exp(-0.5 * g * g * (scale * scale - 1.0))};
}

EmpiricalCost to_cost(const Welford& power, const Welford& err, const SimConfig& cfg) {
  return {power.mean, power.stderr_of_mean(), err.mean, err.stderr_of_mean(), err.n, cfg.seed};
}

}  // namespace

void SimConfig::validate() const {
  if (n_samples < kMinSamples) {
    std::ostringstream os;
    os << "SimConfig: n_samples=" << n_samples << " is below the minimum " << kMinSamples;
    throw Error(Errc::InvalidArgument, os.str());
  }
  if (batch_size == 0) throw Error(Errc::InvalidArgument, "SimConfig: batch_size must be > 0");
  if (!(noise_scale >= 1.0) || !std::isfinite(noise_scale)) {
    throw Error(Errc::InvalidArgument, "SimConfig: noise_scale must be finite and >= 1");
  }
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0xD1B54A32D192ED03ull * (stream + 1));
  for (auto& w : s_) w = splitmix64(x);
}

std::uint64_t Rng::next() noexcept {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() noexcept {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * uniform());
}

void Welford::add(double x) noexcept {
  ++n;
  const double d = x - mean;
  mean += d / static_cast<double>(n);
  m2 += d * (x - mean);
}

void Welford::merge(const Welford& o) noexcept {
  if (o.n == 0) return;
  if (n == 0) {
    *this = o;
    return;
  }
  const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
  const double total = na + nb;
  const double d = o.mean - mean;
  mean += d * nb / total;
  m2 += o.m2 + d * d * na * nb / total;
  n += o.n;
}

double Welford::stderr_of_mean() const noexcept {
  return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
}

EmpiricalCost simulate_linear(const LinearPolicy& policy, const ProblemParams& params,
                              const SimConfig& cfg, Execution ex) {
  const double sq = std::sqrt(params.Q()), sn = std::sqrt(params.N());
  const double g2 = (1.0 + policy.a) * (1.0 + policy.a) * params.Q();
  const double gain = g2 / (g2 + params.N());
  const double offset = policy.b * params.N() / (g2 + params.N());
  const auto acc = run_batches(cfg, ex, [&](Rng& rng, std::uint64_t count, Accum& a) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x0 = sq * rng.normal();
      const auto [z, w] = draw_noise(rng, sn, cfg.noise_scale);
      const double u1 = policy.a * x0 + policy.b;
      const double x1 = x0 + u1;
      const double u2 = gain * (x1 + z) + offset;
      a.power.add(u1 * u1);
      a.err.add(w * (x1 - u2) * (x1 - u2));
    }
  });
  return to_cost(acc.power, acc.err, cfg);
}

EmpiricalCost simulate_two_point(const TwoPointPolicy& policy, const ProblemParams& params,
                                 const SimConfig& cfg, Execution ex) {
  const double sq = std::sqrt(params.Q()), sn = std::sqrt(params.N());
  const double a = policy.a, N = params.N();
  const auto acc = run_batches(cfg, ex, [&](Rng& rng, std::uint64_t count, Accum& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x0 = sq * rng.normal();
      const auto [z, w] = draw_noise(rng, sn, cfg.noise_scale);
      const double x1 = x0 >= 0.0 ? a : -a;
      const double u1 = x1 - x0;
      const double u2 = two_point_decoder(x1 + z, a, N);
      s.power.add(u1 * u1);
      s.err.add(w * (x1 - u2) * (x1 - u2));
    }
  });
  return to_cost(acc.power, acc.err, cfg);
}

namespace {

Accum hybrid_accum(const CoordParams& cp, const ProblemParams& params, const SimConfig& cfg,
                   Execution ex) {
  const double T = cp.T(), N = params.N();
  if (!(T > 0.0)) throw Error(Errc::InvalidArgument, "simulate_hybrid: need T > 0");
  const double sq = std::sqrt(params.Q()), sn = std::sqrt(N);
  const double shape = cp.rho() * std::sqrt(cp.P() / params.Q());
  const double sx = std::sqrt(cp.effective_power());
  return run_batches(cfg, ex, [&](Rng& rng, std::uint64_t count, Accum& s) {
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x0 = sq * rng.normal();
      const double xt = sx * rng.normal();
      const auto [z, w] = draw_noise(rng, sn, cfg.noise_scale);
      const double u1 = shape * x0 + xt;
      const double x1 = x0 + u1;
      const double y = x1 + z;
      const bool positive = x1 >= 0.0;
      const double u2 = positive ? skew_cond_mean(y, T, N) : -skew_cond_mean(-y, T, N);
      const double e = w * (x1 - u2) * (x1 - u2);
      s.power.add(u1 * u1);
      s.err.add(e);
      (positive ? s.err_pos : s.err_neg).add(e);
    }
  });
}

}  // namespace

EmpiricalCost simulate_hybrid_conditional(const CoordParams& cp, const ProblemParams& params,
                                          const SimConfig& cfg, Execution ex) {
  const auto acc = hybrid_accum(cp, params, cfg, ex);
  return to_cost(acc.power, acc.err, cfg);
}

SignSplitCost simulate_hybrid_by_sign(const CoordParams& cp, const ProblemParams& params,
                                      const SimConfig& cfg, Execution ex) {
  const auto acc = hybrid_accum(cp, params, cfg, ex);
  return {to_cost(acc.power, acc.err_pos, cfg), to_cost(acc.power, acc.err_neg, cfg)};
}

}  // namespace wits
