// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "amsum/alpha_mu.hpp"
#include "amsum/numerics.hpp"

namespace amsum {

inline constexpr int kDefaultTermCap = 500;
inline constexpr double kDefaultTargetAbsErr = 1e-12;

/// Sum of `branches` iid alpha-mu envelopes.
struct SumSpec {
  AlphaMuParams params;
  int branches = 1;

  void validate() const;
};

enum class SeriesKind { pdf, cdf };

/// Which closed-form truncation bound certified the evaluation:
/// dagger (Mittag-Leffler form, 0 < alpha < 1), star (incomplete-gamma form,
/// alpha >= 1), or none.
enum class BoundKind { dagger, star, none };

struct SeriesEval {
  double value = 0.0;
  int terms_used = 0;
  std::optional<double> certified_bound;
  BoundKind bound_kind = BoundKind::none;
};

/// Normalized recursion coefficients delta~_i = delta_i / Gamma(alpha mu)^L,
/// stored in signed-log form, plus the log-scale prefactor
/// L [ln alpha + mu ln mu + ln Gamma(alpha mu) - ln Gamma(mu) - alpha mu ln r_hat].
/// delta~_0 = 1; extending a table never changes existing entries.
class CoefficientTable {
 public:
  CoefficientTable(const SumSpec& spec, int n_terms);

  /// Prefix-stable: appends coefficients until size() >= n_terms.
  void extend(int n_terms);

  const SumSpec& spec() const { return spec_; }
  double log_prefactor() const { return log_prefactor_; }
  std::span<const SignedLog> deltas() const { return deltas_; }
  int size() const { return static_cast<int>(deltas_.size()); }

 private:
  SumSpec spec_;
  double log_prefactor_ = 0.0;
  double log_gamma_alpha_mu_ = 0.0;  // ln Gamma(alpha mu)
  double log_x0_ = 0.0;              // ln(mu r_hat^-alpha)
  std::vector<SignedLog> deltas_;
};

CoefficientTable delta_coefficients(const SumSpec& spec, int n_terms);

/// Shared build-once table cache keyed by (alpha, mu, r_hat, L). Duplicate
/// concurrent builds are allowed; tables are immutable once published.
class CoefficientCache {
 public:
  std::shared_ptr<const CoefficientTable> get(const SumSpec& spec, int min_terms);
  void clear();

 private:
  struct Impl;
  std::shared_ptr<Impl> impl_ = make_impl();
  static std::shared_ptr<Impl> make_impl();
};

CoefficientCache& coefficient_cache();

/// f_R(r) with N_T picked by required_terms against target_abs_err
/// (0 means the 1e-12 default); falls back to the empirical stopping rule
/// when the bound cannot certify the target within term_cap.
SeriesEval sum_pdf(const SumSpec& spec, double r, double target_abs_err = 0.0,
                   int term_cap = kDefaultTermCap);

/// F_R(r); same machinery with exponent alpha i + alpha mu L and
/// denominator Gamma(i alpha + L mu alpha + 1). Clamped to [0, 1] only when
/// the excursion is within the certified bound plus accumulated roundoff.
SeriesEval sum_cdf(const SumSpec& spec, double r, double target_abs_err = 0.0,
                   int term_cap = kDefaultTermCap);

/// Closed-form tail bounds after n_t terms: the Mittag-Leffler (dagger) form
/// for 0 < alpha < 1, the incomplete-gamma (star) form for alpha >= 1.
double pdf_truncation_bound(const SumSpec& spec, double r, int n_t);
double cdf_truncation_bound(const SumSpec& spec, double r, int n_t);

/// Smallest n_t <= cap with bound(n_t) <= target, by doubling then bisection.
int required_terms(const SumSpec& spec, double r, double target, SeriesKind kind,
                   int cap = kDefaultTermCap);

/// |sum of terms n_t .. n_t+199|, the reference truncation error used to
/// validate that the closed-form bounds dominate the true error.
double truncation_error_reference(const SumSpec& spec, double r, int n_t, SeriesKind kind);

}  // namespace amsum
