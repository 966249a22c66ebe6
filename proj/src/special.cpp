// SPDX-License-Identifier: Apache-2.0
#include "amsum/special.hpp"

#include <cmath>
#include <string>

namespace amsum {

double ln_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x))
    throw DomainError("ln_gamma: argument must be positive and finite, got " + std::to_string(x));
  return std::lgamma(x);
}

namespace {

// gamma(a,x) series: x^a e^-x sum_k x^k / (a (a+1) ... (a+k)).
// Returns ln of the bracketed sum (first term 1/a).
double log_lower_gamma_series_sum(double a, double x) {
  double term = 1.0 / a;
  StableSum sum;
  sum.add(term);
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum.add(term);
    if (term < sum.value() * 1e-17) break;
  }
  return std::log(sum.value());
}

// Q(a,x) by modified Lentz continued fraction; valid for x >= a + 1.
double upper_gamma_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(a * std::log(x) - x - std::lgamma(a)) * h;
}

}  // namespace

double reg_lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("reg_lower_incomplete_gamma: a must be positive");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("reg_lower_incomplete_gamma: x must be nonnegative and finite");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    const double lp =
        a * std::log(x) - x - std::lgamma(a) + log_lower_gamma_series_sum(a, x);
    return std::exp(lp);
  }
  return 1.0 - upper_gamma_cf(a, x);
}

double log_reg_lower_incomplete_gamma(double a, double x) {
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("log_reg_lower_incomplete_gamma: a must be positive");
  if (!(x >= 0.0) || !std::isfinite(x))
    throw DomainError("log_reg_lower_incomplete_gamma: x must be nonnegative and finite");
  if (x == 0.0) return -std::numeric_limits<double>::infinity();
  if (x < a + 1.0)
    return a * std::log(x) - x - std::lgamma(a) + log_lower_gamma_series_sum(a, x);
  return std::log1p(-upper_gamma_cf(a, x));
}

double erfc(double x) {
  if (!std::isfinite(x)) throw DomainError("erfc: argument must be finite");
  return std::erfc(x);
}

double gaussian_q(double x) { return 0.5 * erfc(x / std::sqrt(2.0)); }

double log_mittag_leffler_tail(double a, double b, double log_z, int start, SeriesControl ctrl,
                               bool certified_closure) {
  if (!(a > 0.0) || !(b > 0.0))
    throw DomainError("mittag_leffler: a and b must be positive");
  if (start < 0) throw DomainError("mittag_leffler tail: start must be >= 0");
  ctrl.validate();
  if (log_z == -std::numeric_limits<double>::infinity())  // z == 0
    return start == 0 ? -std::lgamma(b) : -std::numeric_limits<double>::infinity();

  // Large-argument shortcut: the term peak sits at a k + b ~ S := z^(1/a)
  // with peak magnitude ~ exp(S - b ln S). When the tail still contains the
  // peak and that magnitude clears the double range, the sum is +inf.
  const double s_peak = std::exp(log_z / a);
  if (start * a + b < s_peak && s_peak - b * std::log(s_peak) > 709.0)
    return std::numeric_limits<double>::infinity();

  SignedLogSum acc;
  const double log_tol = std::log(ctrl.rel_tol);
  int below = 0;
  double prev = std::numeric_limits<double>::quiet_NaN();
  double last = -std::numeric_limits<double>::infinity();
  for (int k = start; k < start + ctrl.max_terms; ++k) {
    const double lt = k * log_z - std::lgamma(a * k + b);
    acc.add(SignedLog::from_log(lt, 1));
    last = lt;
    const double log_partial = acc.total().log_mag;
    if (certified_closure && k > start) {
      // Term ratios z / prod(a k + b ...) are decreasing, so the remainder is
      // below t_k ratio / (1 - ratio); close the sum once that majorant is
      // negligible against the partial.
      const double ratio = std::exp(lt - prev);
      if (ratio < 1.0) {
        const double log_rest = lt + std::log(ratio / (1.0 - ratio));
        if (log_rest < log_partial + log_tol) {
          acc.add(SignedLog::from_log(log_rest, 1));
          return acc.total().log_mag;
        }
      }
    }
    prev = lt;
    if (lt < log_partial + log_tol) {
      if (++below >= 3) return log_partial;
    } else {
      below = 0;
    }
  }
  throw ConvergenceError("mittag_leffler: max_terms reached before convergence",
                         std::exp(acc.total().log_mag), std::exp(last), ctrl.max_terms);
}

double mittag_leffler(double a, double b, double z, SeriesControl ctrl) {
  if (!(z >= 0.0) || !std::isfinite(z))
    throw DomainError("mittag_leffler: z must be nonnegative and finite");
  const double log_z = z == 0.0 ? -std::numeric_limits<double>::infinity() : std::log(z);
  return std::exp(log_mittag_leffler_tail(a, b, log_z, 0, ctrl, false));
}

}  // namespace amsum
