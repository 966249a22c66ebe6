// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <vector>

namespace amsum {

/// A signed real stored as (sign, ln|x|). Exact zero has sign == 0.
/// Keeps quantities like Gamma(alpha(i+mu)) * x^i / i! representable far
/// beyond the range of double.
struct SignedLog {
  double log_mag = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static SignedLog zero() { return {}; }

  static SignedLog from_value(double v) {
    if (v == 0.0) return {};
    return {std::log(std::fabs(v)), v > 0 ? 1 : -1};
  }

  static SignedLog from_log(double log_mag, int sign) { return {log_mag, sign}; }

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mag); }
  bool is_zero() const { return sign == 0; }

  friend SignedLog operator*(SignedLog a, SignedLog b) {
    if (a.sign == 0 || b.sign == 0) return zero();
    return {a.log_mag + b.log_mag, a.sign * b.sign};
  }
};

/// Neumaier-compensated accumulator.
class StableSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated signed accumulation of (sign, log) terms. The partial sum is
/// kept rescaled by the running maximum exponent so no intermediate value
/// overflows; the sum of |terms| is tracked for condition-number estimates.
class SignedLogSum {
 public:
  void add(SignedLog t) {
    ++count_;
    if (t.sign == 0) return;
    if (!(t.log_mag <= shift_)) {
      const double scale = std::exp(shift_ - t.log_mag);  // 0 on first term
      sum_ *= scale;
      comp_ *= scale;
      abs_sum_ *= scale;
      shift_ = t.log_mag;
    }
    const double term = t.sign * std::exp(t.log_mag - shift_);
    abs_sum_ += std::fabs(term);
    const double s = sum_ + term;
    if (std::fabs(sum_) >= std::fabs(term))
      comp_ += (sum_ - s) + term;
    else
      comp_ += (term - s) + sum_;
    sum_ = s;
  }

  SignedLog total() const {
    const double v = sum_ + comp_;
    if (v == 0.0 || shift_ == -std::numeric_limits<double>::infinity()) return SignedLog::zero();
    return {shift_ + std::log(std::fabs(v)), v > 0 ? 1 : -1};
  }

  /// ln of sum of |terms|; -inf when empty.
  double log_abs_terms() const {
    if (abs_sum_ == 0.0) return -std::numeric_limits<double>::infinity();
    return shift_ + std::log(abs_sum_);
  }

  /// sum |t_i| / |sum t_i|; the cancellation condition number.
  double condition() const {
    const double v = std::fabs(sum_ + comp_);
    if (v == 0.0) return std::numeric_limits<double>::infinity();
    return abs_sum_ / v;
  }

  int count() const { return count_; }

 private:
  double shift_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;
  double comp_ = 0.0;
  double abs_sum_ = 0.0;
  int count_ = 0;
};

/// Recursive adaptive Simpson with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 50);

/// Gauss-Legendre rule on [-1, 1]; nodes found by Newton iteration on the
/// Legendre recurrence, cached per order.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre_rule(int order);

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b,
                            const GaussLegendreRule& rule);

/// Composite Gauss-Legendre on [a, b] with panel-count doubling until two
/// successive refinements agree within abs_tol. Throws ResolutionError on
/// failure to settle.
double integrate_composite_gl(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int order = 32, int max_panels = 4096);

}  // namespace amsum
