// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "amsum/sum_series.hpp"

namespace amsum {

/// Modulation parameter presets (BPSK family).
inline constexpr double kModGBpsk = 1.0;
inline constexpr double kModGOrthogonalBpsk = 0.5;
inline constexpr double kModGMinCorrBpsk = 0.715;

enum class Combiner { egc, mrc };

struct CombinerKind {
  Combiner kind = Combiner::egc;
  int theta() const { return kind == Combiner::mrc ? 2 : 1; }
};

/// Mean SNR per symbol Es/N0, modulation parameter G, outage threshold
/// gamma_out. All linear scale; dB conversion happens at the CLI boundary.
struct SnrConfig {
  double es_n0 = 1.0;
  double modulation_g = kModGBpsk;
  double gamma_out = 1.0;

  void validate() const;
};

struct GainSummary {
  double diversity_gain = 0.0;
  double coding_gain = 0.0;  // linear scale
};

double db_to_linear(double db);
double linear_to_db(double x);

/// The sum spec whose envelope statistics equal those of the combined
/// variable: EGC keeps the spec (sum of envelopes); for MRC the summed
/// branch powers R_n^2 are themselves alpha/2-mu variates with alpha-root
/// mean r_hat^2.
SumSpec combiner_effective_spec(const SumSpec& spec, CombinerKind c);

/// Density of the combined variable R_nu (sum of envelopes for EGC, sum of
/// branch powers for MRC). EGC reduces to sum_pdf exactly.
double combined_envelope_pdf(const SumSpec& spec, CombinerKind c, double r,
                             double target_abs_err = 0.0);

/// Density / distribution of the instantaneous SNR Psi = (Es / L N0) R_nu^(2/theta),
/// evaluated through the exact monotone change of variables.
double snr_pdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg, double psi,
               double target_abs_err = 0.0);
double snr_cdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg, double psi,
               double target_abs_err = 0.0);

enum class AserMethod { series, quadrature };

struct AserResult {
  double value = 0.0;
  AserMethod method = AserMethod::series;
  /// Estimated absolute error: last-term scale for the series path, the
  /// quadrature tolerance otherwise.
  double est_abs_err = 0.0;
  operator double() const { return value; }
};

/// Average symbol error rate E[Q(sqrt(2 G Psi))]. Closed series when it
/// converges cleanly; certified quadrature of Q(sqrt(2 G psi)) f_Psi(psi)
/// below 0 dB or whenever the series is in its divergent-asymptotic regime.
AserResult aser(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                double target_abs_err = 0.0);

/// High-SNR asymptote (C_e Es/N0)^(-D_e) from the leading series term;
/// D_e = alpha mu L / 2 for both combiners (same diversity order, different
/// coding gain).
std::pair<double, GainSummary> aser_asymptotic(const SumSpec& spec, CombinerKind c,
                                               const SnrConfig& cfg);

/// Outage probability: snr_cdf evaluated at gamma_out (single code path).
double outage_probability(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                          double target_abs_err = 0.0);

/// (C_out Es/N0)^(-D_out) with D_out = alpha mu L / 2 for both combiners.
std::pair<double, GainSummary> op_asymptotic(const SumSpec& spec, CombinerKind c,
                                             const SnrConfig& cfg);

}  // namespace amsum
