#pragma once

#include <array>
#include <cstdint>

#include "wits/core.hpp"
#include "wits/parallel.hpp"
#include "wits/skewnormal.hpp"
#include "wits/strategies.hpp"

namespace wits {

struct SimConfig {
  static constexpr std::uint64_t kMinSamples = 1000;

  std::uint64_t n_samples = 1'000'000;
  std::uint64_t seed = 0x5eed;
  /// Samples per independently seeded batch. Results depend on the batch
  /// size but never on the number of threads.
  std::uint64_t batch_size = 1u << 16;
  /// Importance sampling of the channel noise: Z is drawn with standard
  /// deviation noise_scale * sqrt(N) and each squared error is weighted by the
  /// likelihood ratio. 1 is plain Monte Carlo. Values > 1 keep rare decoding
  /// errors (e.g. two-point with a >> sqrt(N)) visible at moderate sample sizes.
  double noise_scale = 1.0;

  /// Throws Errc::InvalidArgument if n_samples < 1000, batch_size == 0 or
  /// noise_scale is not a finite value >= 1.
  void validate() const;
};

/// xoshiro256** seeded through SplitMix64; one stream per batch.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream);
  std::uint64_t next() noexcept;
  /// Uniform on (0, 1), never 0 or 1.
  double uniform() noexcept;
  /// Standard normal by inversion of the CDF.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
};

/// Running mean and centred second moment, mergeable (Chan et al.).
struct Welford {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) noexcept;
  void merge(const Welford& o) noexcept;
  double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double stderr_of_mean() const noexcept;
};

EmpiricalCost simulate_linear(const LinearPolicy& policy, const ProblemParams& params,
                              const SimConfig& cfg, Execution ex = Execution::Parallel);

EmpiricalCost simulate_two_point(const TwoPointPolicy& policy, const ProblemParams& params,
                                 const SimConfig& cfg, Execution ex = Execution::Parallel);

/// Hybrid policy with the sign W2 = sign(X1) handed to the decoder (genie
/// side information), decoder E[X1 | Y1, W2]. Throws Errc::InvalidArgument if T == 0.
EmpiricalCost simulate_hybrid_conditional(const CoordParams& cp, const ProblemParams& params,
                                          const SimConfig& cfg,
                                          Execution ex = Execution::Parallel);

struct SignSplitCost {
  EmpiricalCost positive;
  EmpiricalCost negative;
};

/// Same draws as simulate_hybrid_conditional, with the squared error split by W2.
SignSplitCost simulate_hybrid_by_sign(const CoordParams& cp, const ProblemParams& params,
                                      const SimConfig& cfg, Execution ex = Execution::Parallel);

}  // namespace wits
