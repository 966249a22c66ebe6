// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace amsum {

/// Argument outside a documented domain (non-positive shape, negative r, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series hit its term cap before certifying the requested accuracy.
/// Carries the best partial value and the tightest bound achieved.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value, double bound, int terms)
      : std::runtime_error(what), best_value(best_value), bound(bound), terms(terms) {}
  double best_value;
  double bound;
  int terms;
};

/// Intermediate quantity left the representable range despite log-scale handling.
class NumericRangeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A grid-based computation cannot meet its accuracy contract at the given
/// resolution; retry with a larger domain or a finer grid.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace amsum
