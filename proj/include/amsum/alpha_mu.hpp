// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "amsum/errors.hpp"

namespace amsum {

/// Marginal alpha-mu fading parameters: nonlinearity alpha, inverse
/// normalized variance mu, and alpha-root mean value r_hat (envelope units).
struct AlphaMuParams {
  double alpha = 2.0;
  double mu = 1.0;
  double r_hat = 1.0;

  void validate() const;
};

/// Eq.-(2)-style envelope density. At r == 0: 0 when alpha*mu > 1, the finite
/// limit when alpha*mu == 1, +inf when alpha*mu < 1.
double marginal_pdf(const AlphaMuParams& p, double r);

/// P(mu, mu (r/r_hat)^alpha) through reg_lower_incomplete_gamma.
double marginal_cdf(const AlphaMuParams& p, double r);

/// E[R^k] = r_hat^k Gamma(mu + k/alpha) / (mu^(k/alpha) Gamma(mu)), k > 0.
double alpha_moment(const AlphaMuParams& p, double k);

/// SplitMix64: 64-bit counter-based generator. Stream s of seed x starts from
/// state x + s * 0x9E3779B97F4A7C15 (the golden-gamma increment), so parallel
/// substreams are derived by seed offsetting and never share state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMix64(seed + stream_index * 0x9E3779B97F4A7C15ULL);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on (0, 1).
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Standard normal via the polar method; the paired variate is cached.
  double next_normal();

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// Standard Gamma(shape, 1) variate; Marsaglia-Tsang squeeze/rejection for
/// shape >= 1, power boost for shape < 1.
double sample_gamma(double shape, SplitMix64& rng);

/// One alpha-mu envelope draw: r_hat * (g / mu)^(1/alpha), g ~ Gamma(mu, 1).
double sample_one(const AlphaMuParams& p, SplitMix64& rng);

/// n envelope draws; deterministic for a fixed generator state.
std::vector<double> sample(const AlphaMuParams& p, SplitMix64& rng, std::size_t n);

}  // namespace amsum
