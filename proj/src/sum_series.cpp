// SPDX-License-Identifier: Apache-2.0
#include "amsum/sum_series.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "amsum/special.hpp"

namespace amsum {

void SumSpec::validate() const {
  params.validate();
  if (branches < 1) throw DomainError("SumSpec: branches must be >= 1");
}

CoefficientTable::CoefficientTable(const SumSpec& spec, int n_terms) : spec_(spec) {
  spec_.validate();
  if (n_terms < 1) throw DomainError("CoefficientTable: n_terms must be >= 1");
  const AlphaMuParams& p = spec_.params;
  log_gamma_alpha_mu_ = ln_gamma(p.alpha * p.mu);
  log_x0_ = std::log(p.mu) - p.alpha * std::log(p.r_hat);
  log_prefactor_ =
      spec_.branches * (std::log(p.alpha) + p.mu * std::log(p.mu) + log_gamma_alpha_mu_ -
                        ln_gamma(p.mu) - p.alpha * p.mu * std::log(p.r_hat));
  deltas_.push_back(SignedLog::from_value(1.0));
  extend(n_terms);
}

void CoefficientTable::extend(int n_terms) {
  const double alpha = spec_.params.alpha;
  const double mu = spec_.params.mu;
  const double L = spec_.branches;
  for (int i = static_cast<int>(deltas_.size()); i < n_terms; ++i) {
    SignedLogSum acc;
    for (int l = 1; l <= i; ++l) {
      const double weight = l * L + l - i;  // can be negative or zero
      if (weight == 0.0) continue;
      const SignedLog& prev = deltas_[i - l];
      if (prev.is_zero()) continue;
      const double lm = prev.log_mag + std::log(std::fabs(weight)) +
                        std::lgamma(alpha * (l + mu)) + l * log_x0_ - std::lgamma(l + 1.0);
      const int sign = prev.sign * (weight > 0.0 ? 1 : -1) * (l % 2 == 0 ? 1 : -1);
      acc.add(SignedLog::from_log(lm, sign));
    }
    SignedLog d = acc.total();
    if (!d.is_zero()) {
      d.log_mag -= std::log(static_cast<double>(i)) + log_gamma_alpha_mu_;
      if (!std::isfinite(d.log_mag) && d.log_mag > 0)
        throw NumericRangeError("delta coefficient overflow at index " + std::to_string(i));
    }
    deltas_.push_back(d);
  }
}

CoefficientTable delta_coefficients(const SumSpec& spec, int n_terms) {
  return CoefficientTable(spec, n_terms);
}

struct CoefficientCache::Impl {
  std::mutex mtx;
  std::map<std::tuple<double, double, double, int>, std::shared_ptr<const CoefficientTable>> map;
};

std::shared_ptr<CoefficientCache::Impl> CoefficientCache::make_impl() {
  return std::make_shared<Impl>();
}

std::shared_ptr<const CoefficientTable> CoefficientCache::get(const SumSpec& spec, int min_terms) {
  spec.validate();
  const auto key = std::make_tuple(spec.params.alpha, spec.params.mu, spec.params.r_hat,
                                   spec.branches);
  {
    std::lock_guard<std::mutex> lock(impl_->mtx);
    auto it = impl_->map.find(key);
    if (it != impl_->map.end() && it->second->size() >= min_terms) return it->second;
  }
  // Single-writer extension under the lock; the recursion is prefix-stable,
  // so an extended copy replaces the published table without changing any
  // existing entry. Last write wins; results are identical either way.
  std::lock_guard<std::mutex> lock(impl_->mtx);
  auto it = impl_->map.find(key);
  if (it != impl_->map.end() && it->second->size() >= min_terms) return it->second;
  auto table = it != impl_->map.end() ? std::make_shared<CoefficientTable>(*it->second)
                                      : std::make_shared<CoefficientTable>(spec, 1);
  table->extend(min_terms);
  std::shared_ptr<const CoefficientTable> built = table;
  impl_->map[key] = built;
  return built;
}

void CoefficientCache::clear() {
  std::lock_guard<std::mutex> lock(impl_->mtx);
  impl_->map.clear();
}

CoefficientCache& coefficient_cache() {
  static CoefficientCache cache;
  return cache;
}

namespace {

SignedLog series_term(const CoefficientTable& table, int i, double log_r, SeriesKind kind) {
  const SignedLog& d = table.deltas()[i];
  if (d.is_zero()) return SignedLog::zero();
  const AlphaMuParams& p = table.spec().params;
  const double k = p.alpha * i + p.alpha * p.mu * table.spec().branches;
  const double lt = kind == SeriesKind::pdf
                        ? d.log_mag + (k - 1.0) * log_r - std::lgamma(k)
                        : d.log_mag + k * log_r - std::lgamma(k + 1.0);
  return SignedLog::from_log(lt, d.sign);
}

struct PartialSum {
  double value = 0.0;
  double log_abs_terms = -std::numeric_limits<double>::infinity();
  int terms = 0;
};

PartialSum sum_first_terms(const CoefficientTable& table, double r, int n, SeriesKind kind) {
  const double log_r = std::log(r);
  SignedLogSum acc;
  for (int i = 0; i < n; ++i) acc.add(series_term(table, i, log_r, kind));
  const SignedLog t = acc.total();
  PartialSum out;
  out.value = t.is_zero() ? 0.0 : t.sign * std::exp(table.log_prefactor() + t.log_mag);
  out.log_abs_terms = table.log_prefactor() + acc.log_abs_terms();
  out.terms = n;
  return out;
}

// Empirical stopping: three consecutive terms below 1e-16 x |partial sum|.
// Returns the number of terms consumed, or 0 if the rule never fired.
int empirical_terms(const CoefficientTable& table, double r, int cap, SeriesKind kind) {
  const double log_r = std::log(r);
  const double log_tol = std::log(1e-16);
  SignedLogSum acc;
  int below = 0;
  for (int i = 0; i < cap; ++i) {
    const SignedLog t = series_term(table, i, log_r, kind);
    acc.add(t);
    const SignedLog partial = acc.total();
    if (!t.is_zero() && !partial.is_zero() && t.log_mag < partial.log_mag + log_tol) {
      if (++below >= 3) return i + 1;
    } else {
      below = 0;
    }
  }
  return 0;
}

double truncation_bound(const SumSpec& spec, double r, int n_t, SeriesKind kind) {
  spec.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("truncation bound: r must be > 0");
  if (n_t < 1) throw DomainError("truncation bound: n_t must be >= 1");
  const AlphaMuParams& p = spec.params;
  const double L = spec.branches;
  const double log_ratio = std::log(r) - std::log(p.r_hat);
  const double log_a =
      L * (std::log(p.alpha) + p.mu * std::log(p.mu) + ln_gamma(p.alpha * p.mu) +
           p.alpha * p.mu * log_ratio - ln_gamma(p.mu));
  double log_bound;
  if (p.alpha < 1.0) {
    // Mittag-Leffler tail with argument 2 mu L (r/r_hat)^alpha Gamma(alpha(mu+1))
    const double log_z = std::log(2.0 * p.mu * L) + p.alpha * log_ratio +
                         ln_gamma(p.alpha * (p.mu + 1.0));
    const double b = p.alpha * p.mu * L + (kind == SeriesKind::cdf ? 1.0 : 0.0);
    // small alpha pushes the tail peak far out; allow long tails here and
    // close the remainder geometrically once it is negligible
    const SeriesControl tail_ctrl{1e-9, 300000};
    log_bound = log_a + log_mittag_leffler_tail(p.alpha, b, log_z, n_t, tail_ctrl, true);
  } else {
    const double x = p.mu * std::exp(p.alpha * log_ratio);
    if (!std::isfinite(x))
      throw NumericRangeError("truncation bound: mu (r/r_hat)^alpha overflows");
    log_bound = std::log(2.0 * L) + log_a + x +
                log_reg_lower_incomplete_gamma(static_cast<double>(n_t), x);
  }
  if (kind == SeriesKind::pdf) log_bound -= std::log(r);
  return std::exp(log_bound);  // +inf is a valid (useless) upper bound
}

SeriesEval evaluate(const SumSpec& spec, double r, double target_abs_err, int term_cap,
                    SeriesKind kind) {
  spec.validate();
  if (!(r > 0.0) || !std::isfinite(r))
    throw DomainError("sum series: r must be positive and finite");
  if (!(target_abs_err >= 0.0)) throw DomainError("sum series: target_abs_err must be >= 0");
  if (term_cap < 1) throw DomainError("sum series: term cap must be >= 1");
  const double target = target_abs_err == 0.0 ? kDefaultTargetAbsErr : target_abs_err;
  const BoundKind bkind = spec.params.alpha < 1.0 ? BoundKind::dagger : BoundKind::star;

  SeriesEval eval;
  int n_t = 0;
  try {
    n_t = required_terms(spec, r, target, kind, term_cap);
  } catch (const ConvergenceError&) {
    n_t = 0;  // bound cannot certify the target within the cap
  }

  auto table = coefficient_cache().get(spec, n_t > 0 ? n_t : term_cap);
  if (n_t == 0) {
    n_t = empirical_terms(*table, r, term_cap, kind);
    if (n_t == 0) {
      const PartialSum best = sum_first_terms(*table, r, term_cap, kind);
      throw ConvergenceError("sum series: term cap reached with bound above target",
                             best.value, truncation_bound(spec, r, term_cap, kind), term_cap);
    }
  }

  const PartialSum part = sum_first_terms(*table, r, n_t, kind);
  eval.value = part.value;
  eval.terms_used = n_t;
  eval.certified_bound = truncation_bound(spec, r, n_t, kind);
  eval.bound_kind = bkind;

  if (kind == SeriesKind::cdf && (eval.value < 0.0 || eval.value > 1.0)) {
    // roundoff allowance: accumulated |terms| scaled to the working precision
    const double noise = 8.0 * std::numeric_limits<double>::epsilon() *
                         std::exp(part.log_abs_terms);
    const double allowance = *eval.certified_bound + noise;
    const double excess = eval.value < 0.0 ? -eval.value : eval.value - 1.0;
    if (excess > allowance)
      throw NumericRangeError("sum_cdf: value " + std::to_string(eval.value) +
                              " outside [0,1] beyond certified bound");
    eval.value = eval.value < 0.0 ? 0.0 : 1.0;
  }
  return eval;
}

}  // namespace

SeriesEval sum_pdf(const SumSpec& spec, double r, double target_abs_err, int term_cap) {
  return evaluate(spec, r, target_abs_err, term_cap, SeriesKind::pdf);
}

SeriesEval sum_cdf(const SumSpec& spec, double r, double target_abs_err, int term_cap) {
  return evaluate(spec, r, target_abs_err, term_cap, SeriesKind::cdf);
}

double pdf_truncation_bound(const SumSpec& spec, double r, int n_t) {
  return truncation_bound(spec, r, n_t, SeriesKind::pdf);
}

double cdf_truncation_bound(const SumSpec& spec, double r, int n_t) {
  return truncation_bound(spec, r, n_t, SeriesKind::cdf);
}

int required_terms(const SumSpec& spec, double r, double target, SeriesKind kind, int cap) {
  spec.validate();
  if (!(target > 0.0)) throw DomainError("required_terms: target must be > 0");
  if (cap < 1) throw DomainError("required_terms: cap must be >= 1");
  auto bound = [&](int n) { return truncation_bound(spec, r, n, kind); };
  if (bound(1) <= target) return 1;
  int lo = 1;
  int hi = 1;
  while (true) {
    if (hi >= cap)
      throw ConvergenceError("required_terms: bound above target at term cap",
                             std::numeric_limits<double>::quiet_NaN(), bound(cap), cap);
    lo = hi;
    hi = std::min(2 * hi, cap);
    if (bound(hi) <= target) break;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    if (bound(mid) <= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double truncation_error_reference(const SumSpec& spec, double r, int n_t, SeriesKind kind) {
  spec.validate();
  if (!(r > 0.0) || !std::isfinite(r))
    throw DomainError("truncation_error_reference: r must be > 0");
  if (n_t < 1) throw DomainError("truncation_error_reference: n_t must be >= 1");
  const int n_ref = n_t + 200;
  auto table = coefficient_cache().get(spec, n_ref);
  // Tail accumulated directly: identical to (N_ref partial - n_t partial) in
  // exact arithmetic, but accurate relative to the tail itself.
  const double log_r = std::log(r);
  SignedLogSum acc;
  for (int i = n_t; i < n_ref; ++i) acc.add(series_term(*table, i, log_r, kind));
  const SignedLog t = acc.total();
  return t.is_zero() ? 0.0 : std::exp(table->log_prefactor() + t.log_mag);
}

}  // namespace amsum
