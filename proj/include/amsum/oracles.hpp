// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "amsum/combining.hpp"
#include "amsum/sum_series.hpp"

namespace amsum {

/// Empirical CDF of the L-fold envelope sum with its 99% DKW band.
struct EmpiricalCdf {
  std::vector<double> grid;
  std::vector<double> values;
  std::int64_t n_samples = 0;
  double dkw_band = 0.0;  // sqrt(ln(2/0.01) / (2n))
};

/// Seeded, reproducible Monte Carlo: n_samples sums of L marginal draws.
/// Chunked over derived substreams with a deterministic reduction order, so
/// the result is bit-identical for a fixed seed regardless of thread count.
EmpiricalCdf mc_empirical_cdf(const SumSpec& spec, std::span<const double> grid,
                              std::int64_t n_samples, std::uint64_t seed);

/// Iterated-convolution sum PDF on a uniform grid (the Brennan-integral
/// route realized as L-1 trapezoid convolutions of the marginal).
struct GridPdf {
  std::vector<double> grid;
  std::vector<double> densities;
  double grid_step = 0.0;
  double mass = 0.0;  // trapezoid mass actually captured (reported, not rescaled)
};

/// Default domain L * r_hat * (1 + 8 / sqrt(alpha mu)).
double default_conv_r_max(const SumSpec& spec);

/// r_max <= 0 selects the default. Throws ResolutionError when n_grid < 2^10
/// or when the captured mass falls short of 1 - 1e-4.
GridPdf convolution_pdf(const SumSpec& spec, double r_max = 0.0, int n_grid = 1 << 13);

/// ASER by Gauss-Legendre quadrature of Q(sqrt(2 G psi)) f_Psi(psi) under the
/// psi = tan(theta) substitution; the independent cross-check for the closed
/// series route.
double aser_quadrature(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                       double abs_tol = 1e-10);

}  // namespace amsum
