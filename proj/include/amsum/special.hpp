// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "amsum/errors.hpp"
#include "amsum/numerics.hpp"

namespace amsum {

/// Governs all internal series evaluations.
struct SeriesControl {
  double rel_tol = 1e-14;
  int max_terms = 10000;

  void validate() const {
    if (!(rel_tol > 0.0)) throw DomainError("SeriesControl: rel_tol must be > 0");
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  }
};

/// ln Gamma(x) for x > 0.
double ln_gamma(double x);

/// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
/// Series for x < a + 1, continued-fraction complement otherwise.
double reg_lower_incomplete_gamma(double a, double x);

/// ln P(a, x); usable where P underflows (x << a).
double log_reg_lower_incomplete_gamma(double a, double x);

/// Complementary error function.
double erfc(double x);

/// Gaussian tail Q(x) = erfc(x / sqrt(2)) / 2.
double gaussian_q(double x);

/// Mittag-Leffler E_{a,b}(z) = sum_k z^k / Gamma(a k + b) for z >= 0,
/// summed in log-magnitude space with compensated accumulation.
double mittag_leffler(double a, double b, double z, SeriesControl ctrl = {});

/// ln of the tail sum_{k >= start} z^k / Gamma(a k + b), with z given as
/// ln z (z > 0 assumed; pass -inf for z == 0). The tail is evaluated
/// directly rather than as full function minus partial sum, so it stays
/// meaningful when the two would cancel. With certified_closure the
/// remainder past the stopping point is closed with a geometric majorant
/// (term ratios are decreasing), so the result is an upper bound on the
/// true tail within ~rel_tol.
double log_mittag_leffler_tail(double a, double b, double log_z, int start,
                               SeriesControl ctrl = {}, bool certified_closure = false);

}  // namespace amsum
