// SPDX-License-Identifier: Apache-2.0
#include "amsum/combining.hpp"

#include <cmath>
#include <limits>

#include "amsum/oracles.hpp"
#include "amsum/special.hpp"

namespace amsum {

void SnrConfig::validate() const {
  if (!(es_n0 > 0.0) || !std::isfinite(es_n0))
    throw DomainError("SnrConfig: es_n0 must be > 0 (linear scale)");
  if (!(modulation_g > 0.0) || !std::isfinite(modulation_g))
    throw DomainError("SnrConfig: modulation_g must be > 0");
  if (!(gamma_out > 0.0) || !std::isfinite(gamma_out))
    throw DomainError("SnrConfig: gamma_out must be > 0 (linear scale)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double x) { return 10.0 * std::log10(x); }

SumSpec combiner_effective_spec(const SumSpec& spec, CombinerKind c) {
  spec.validate();
  if (c.kind == Combiner::egc) return spec;
  SumSpec eff = spec;
  eff.params.alpha = spec.params.alpha / 2.0;
  eff.params.r_hat = spec.params.r_hat * spec.params.r_hat;
  return eff;
}

double combined_envelope_pdf(const SumSpec& spec, CombinerKind c, double r,
                             double target_abs_err) {
  return sum_pdf(combiner_effective_spec(spec, c), r, target_abs_err).value;
}

namespace {

// y = L N0 psi / Es, the power-domain argument of the SNR statistics.
double power_argument(const SumSpec& spec, const SnrConfig& cfg, double psi) {
  if (!(psi > 0.0) || !std::isfinite(psi))
    throw DomainError("snr statistics: psi must be positive and finite");
  return spec.branches * psi / cfg.es_n0;
}

}  // namespace

double snr_pdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg, double psi,
               double target_abs_err) {
  cfg.validate();
  const double y = power_argument(spec, cfg, psi);
  const SumSpec eff = combiner_effective_spec(spec, c);
  if (c.kind == Combiner::egc) {
    const double r = std::sqrt(y);
    return sum_pdf(eff, r, target_abs_err).value * 0.5 *
           std::sqrt(spec.branches / (cfg.es_n0 * psi));
  }
  return sum_pdf(eff, y, target_abs_err).value * spec.branches / cfg.es_n0;
}

double snr_cdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg, double psi,
               double target_abs_err) {
  cfg.validate();
  const double y = power_argument(spec, cfg, psi);
  const SumSpec eff = combiner_effective_spec(spec, c);
  const double r = c.kind == Combiner::egc ? std::sqrt(y) : y;
  return sum_cdf(eff, r, target_abs_err).value;
}

double outage_probability(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                          double target_abs_err) {
  return snr_cdf(spec, c, cfg, cfg.gamma_out, target_abs_err);
}

namespace {

// ASER series term exponents live on the effective spec: k_i = a_e (i + mu L).
// EGC kernel: w^(-k/2) / Gamma(k/2 + 1)    (amplitude variable)
// MRC kernel: binom(2k, k) w^(-k)          (power variable)
double aser_log_term_scale(const SumSpec& eff, CombinerKind c, int i, double log_w) {
  const AlphaMuParams& p = eff.params;
  const double k = p.alpha * i + p.alpha * p.mu * eff.branches;
  if (c.kind == Combiner::egc)
    return -0.5 * k * log_w - std::lgamma(0.5 * k + 1.0);
  return -k * log_w + std::lgamma(2.0 * k + 1.0) - 2.0 * std::lgamma(k + 1.0);
}

}  // namespace

AserResult aser(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                double target_abs_err) {
  spec.validate();
  cfg.validate();
  const double target = target_abs_err == 0.0 ? kDefaultTargetAbsErr : target_abs_err;
  const double quad_tol = 1e-10;

  // The series decays through (4 Es G / L N0)^(-k); at and below 0 dB it is
  // slow or divergent-asymptotic, so go straight to the certified quadrature.
  if (cfg.es_n0 < 1.0)
    return {aser_quadrature(spec, c, cfg, quad_tol), AserMethod::quadrature, quad_tol};

  const SumSpec eff = combiner_effective_spec(spec, c);
  const double log_w = std::log(4.0 * cfg.es_n0 * cfg.modulation_g / spec.branches);
  auto table = coefficient_cache().get(eff, kDefaultTermCap);
  const double lp = table->log_prefactor();

  SignedLogSum acc;
  const double log_tol = std::log(1e-16);
  int below = 0;
  int growing = 0;
  double prev_log = std::numeric_limits<double>::infinity();
  bool converged = false;
  int used = 0;
  double last_log = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < table->size(); ++i) {
    const SignedLog& d = table->deltas()[i];
    if (d.is_zero()) continue;
    const double lt = d.log_mag + aser_log_term_scale(eff, c, i, log_w);
    acc.add(SignedLog::from_log(lt, d.sign));
    used = i + 1;
    last_log = lt;
    const SignedLog partial = acc.total();
    if (!partial.is_zero() && lt < partial.log_mag + log_tol) {
      if (++below >= 3) {
        converged = true;
        break;
      }
    } else {
      below = 0;
    }
    // Divergent-asymptotic regime: terms rising again before the rule fires.
    if (i >= 4 && lt > prev_log) {
      if (++growing >= 3) break;
    } else {
      growing = 0;
    }
    prev_log = lt;
  }

  if (converged) {
    const SignedLog total = acc.total();
    const double value = total.is_zero() ? 0.0 : total.sign * std::exp(lp - std::log(2.0) + total.log_mag);
    const double est = std::exp(lp - std::log(2.0) + last_log);
    if (value >= 0.0 && est <= target) return {value, AserMethod::series, est};
  }
  return {aser_quadrature(spec, c, cfg, quad_tol), AserMethod::quadrature, quad_tol};
}

std::pair<double, GainSummary> aser_asymptotic(const SumSpec& spec, CombinerKind c,
                                               const SnrConfig& cfg) {
  spec.validate();
  cfg.validate();
  const SumSpec eff = combiner_effective_spec(spec, c);
  const AlphaMuParams& p = eff.params;
  const double L = spec.branches;
  const double k0 = p.alpha * p.mu * L;  // leading exponent on the effective spec
  const double d_gain = spec.params.alpha * spec.params.mu * L / 2.0;  // == k0/2 (EGC), k0 (MRC)
  CoefficientTable head(eff, 1);
  const double lp = head.log_prefactor();
  // leading term: (1/2) e^lp * kernel(k0) * w^(-d_gain), w = 4 G snr / L
  double log_kernel;
  if (c.kind == Combiner::egc)
    log_kernel = -std::lgamma(0.5 * k0 + 1.0);
  else
    log_kernel = std::lgamma(2.0 * k0 + 1.0) - 2.0 * std::lgamma(k0 + 1.0);
  const double log_k = lp - std::log(2.0) + log_kernel;
  const double log_c =
      -log_k / d_gain + std::log(4.0 * cfg.modulation_g / spec.branches);
  const double log_p = -d_gain * (log_c + std::log(cfg.es_n0));
  return {std::exp(log_p), GainSummary{d_gain, std::exp(log_c)}};
}

std::pair<double, GainSummary> op_asymptotic(const SumSpec& spec, CombinerKind c,
                                             const SnrConfig& cfg) {
  spec.validate();
  cfg.validate();
  const SumSpec eff = combiner_effective_spec(spec, c);
  const AlphaMuParams& p = eff.params;
  const double L = spec.branches;
  const double k0 = p.alpha * p.mu * L;
  const double d_gain = spec.params.alpha * spec.params.mu * L / 2.0;
  CoefficientTable head(eff, 1);
  // leading term of F at r0: e^lp r0^k0 / Gamma(k0+1);
  // EGC r0 = sqrt(L g / snr), MRC r0 = L g / snr -> both give snr^(-d_gain).
  const double log_k = head.log_prefactor() - std::lgamma(k0 + 1.0) +
                       (c.kind == Combiner::egc ? 0.5 : 1.0) * k0 *
                           std::log(L * cfg.gamma_out);
  const double log_c = -log_k / d_gain;
  const double log_p = -d_gain * (log_c + std::log(cfg.es_n0));
  return {std::exp(log_p), GainSummary{d_gain, std::exp(log_c)}};
}

}  // namespace amsum
