// SPDX-License-Identifier: Apache-2.0
#include "amsum/alpha_mu.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "amsum/special.hpp"

namespace amsum {

void AlphaMuParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw DomainError("AlphaMuParams: alpha must be > 0, got " + std::to_string(alpha));
  if (!(mu > 0.0) || !std::isfinite(mu))
    throw DomainError("AlphaMuParams: mu must be > 0, got " + std::to_string(mu));
  if (!(r_hat > 0.0) || !std::isfinite(r_hat))
    throw DomainError("AlphaMuParams: r_hat must be > 0, got " + std::to_string(r_hat));
}

double marginal_pdf(const AlphaMuParams& p, double r) {
  p.validate();
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("marginal_pdf: r must be nonnegative and finite");
  const double am = p.alpha * p.mu;
  if (r == 0.0) {
    if (am > 1.0) return 0.0;
    const double limit =
        std::exp(std::log(p.alpha) + p.mu * std::log(p.mu) - ln_gamma(p.mu) - std::log(p.r_hat));
    return am == 1.0 ? limit : std::numeric_limits<double>::infinity();
  }
  const double log_pdf = std::log(p.alpha) + p.mu * std::log(p.mu) +
                         (am - 1.0) * std::log(r) - ln_gamma(p.mu) -
                         am * std::log(p.r_hat) - p.mu * std::pow(r / p.r_hat, p.alpha);
  return std::exp(log_pdf);
}

double marginal_cdf(const AlphaMuParams& p, double r) {
  p.validate();
  if (!(r >= 0.0) || !std::isfinite(r))
    throw DomainError("marginal_cdf: r must be nonnegative and finite");
  if (r == 0.0) return 0.0;
  return reg_lower_incomplete_gamma(p.mu, p.mu * std::pow(r / p.r_hat, p.alpha));
}

double alpha_moment(const AlphaMuParams& p, double k) {
  p.validate();
  if (!(k > 0.0) || !std::isfinite(k)) throw DomainError("alpha_moment: k must be > 0");
  return std::exp(k * std::log(p.r_hat) + ln_gamma(p.mu + k / p.alpha) -
                  (k / p.alpha) * std::log(p.mu) - ln_gamma(p.mu));
}

double SplitMix64::next_normal() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * next_unit() - 1.0;
    v = 2.0 * next_unit() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double scale = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * scale;
  has_cached_ = true;
  return u * scale;
}

double sample_gamma(double shape, SplitMix64& rng) {
  if (!(shape > 0.0)) throw DomainError("sample_gamma: shape must be > 0");
  if (shape < 1.0) {
    // boost: Gamma(a) = Gamma(a+1) * U^(1/a)
    const double g = sample_gamma(shape + 1.0, rng);
    return g * std::pow(rng.next_unit(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_unit();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_one(const AlphaMuParams& p, SplitMix64& rng) {
  const double g = sample_gamma(p.mu, rng);
  return p.r_hat * std::pow(g / p.mu, 1.0 / p.alpha);
}

std::vector<double> sample(const AlphaMuParams& p, SplitMix64& rng, std::size_t n) {
  p.validate();
  if (n < 1) throw DomainError("sample: n must be >= 1");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sample_one(p, rng);
  return out;
}

}  // namespace amsum
