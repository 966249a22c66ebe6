// SPDX-License-Identifier: Apache-2.0
#include "amsum/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <string>
#include <thread>

#include "amsum/special.hpp"

namespace amsum {

EmpiricalCdf mc_empirical_cdf(const SumSpec& spec, std::span<const double> grid,
                              std::int64_t n_samples, std::uint64_t seed) {
  spec.validate();
  if (n_samples < 1000) throw DomainError("mc_empirical_cdf: n_samples must be >= 1e3");
  if (grid.empty()) throw DomainError("mc_empirical_cdf: grid must be nonempty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0)) throw DomainError("mc_empirical_cdf: grid must be positive");
    if (i > 0 && grid[i] < grid[i - 1])
      throw DomainError("mc_empirical_cdf: grid must be sorted");
  }

  constexpr std::int64_t kChunk = 1 << 16;  // fixed so results are thread-count independent
  const std::int64_t n_chunks = (n_samples + kChunk - 1) / kChunk;

  auto run_chunk = [&](std::int64_t chunk) {
    // counts[j] = samples landing in (grid[j-1], grid[j]]
    std::vector<std::int64_t> counts(grid.size() + 1, 0);
    SplitMix64 rng = SplitMix64::stream(seed, static_cast<std::uint64_t>(chunk));
    const std::int64_t begin = chunk * kChunk;
    const std::int64_t end = std::min(begin + kChunk, n_samples);
    for (std::int64_t s = begin; s < end; ++s) {
      double sum = 0.0;
      for (int b = 0; b < spec.branches; ++b) sum += sample_one(spec.params, rng);
      const auto it = std::lower_bound(grid.begin(), grid.end(), sum);
      ++counts[static_cast<std::size_t>(it - grid.begin())];
    }
    return counts;
  };

  const unsigned n_workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(n_chunks)));
  std::vector<std::int64_t> counts(grid.size() + 1, 0);
  if (n_workers <= 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      const auto part = run_chunk(c);
      for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += part[j];
    }
  } else {
    std::vector<std::future<std::vector<std::int64_t>>> futures;
    futures.reserve(static_cast<std::size_t>(n_chunks));
    for (std::int64_t c = 0; c < n_chunks; ++c)
      futures.push_back(std::async(std::launch::async, run_chunk, c));
    for (auto& f : futures) {  // reduction in chunk order
      const auto part = f.get();
      for (std::size_t j = 0; j < counts.size(); ++j) counts[j] += part[j];
    }
  }

  EmpiricalCdf out;
  out.grid.assign(grid.begin(), grid.end());
  out.values.resize(grid.size());
  std::int64_t running = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    running += counts[j];
    out.values[j] = static_cast<double>(running) / static_cast<double>(n_samples);
  }
  out.n_samples = n_samples;
  out.dkw_band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(n_samples)));
  return out;
}

double default_conv_r_max(const SumSpec& spec) {
  spec.validate();
  const AlphaMuParams& p = spec.params;
  return spec.branches * p.r_hat * (1.0 + 8.0 / std::sqrt(p.alpha * p.mu));
}

GridPdf convolution_pdf(const SumSpec& spec, double r_max, int n_grid) {
  spec.validate();
  if (n_grid < (1 << 10))
    throw ResolutionError("convolution_pdf: n_grid below 2^10; use a finer grid");
  if (r_max <= 0.0) r_max = default_conv_r_max(spec);

  const double h = r_max / (n_grid - 1);
  std::vector<double> grid(n_grid);
  for (int i = 0; i < n_grid; ++i) grid[i] = i * h;

  std::vector<double> marginal(n_grid);
  for (int i = 1; i < n_grid; ++i) marginal[i] = marginal_pdf(spec.params, grid[i]);
  const double am = spec.params.alpha * spec.params.mu;
  if (am > 1.0) {
    marginal[0] = 0.0;
  } else {
    // Mass-preserving first cell: the analytic cell mass marginal_cdf(h)
    // replaces the (possibly infinite) endpoint density, keeping the
    // trapezoid mass over [0, h] exact despite the r^(alpha mu - 1) power law.
    marginal[0] = std::max(0.0, 2.0 * marginal_cdf(spec.params, h) / h - marginal[1]);
  }

  auto trapezoid_mass = [&](const std::vector<double>& f) {
    StableSum acc;
    for (int i = 0; i < n_grid; ++i)
      acc.add((i == 0 || i == n_grid - 1 ? 0.5 : 1.0) * h * f[i]);
    return acc.value();
  };

  std::vector<double> current = marginal;
  std::vector<double> next(n_grid);
  for (int fold = 2; fold <= spec.branches; ++fold) {
    for (int k = 0; k < n_grid; ++k) {
      StableSum acc;
      for (int j = 0; j <= k; ++j) {
        const double w = (j == 0 || j == k) ? 0.5 : 1.0;
        acc.add(w * current[j] * marginal[k - j]);
      }
      next[k] = h * acc.value();
    }
    current.swap(next);
  }

  GridPdf out;
  out.grid = std::move(grid);
  out.densities = std::move(current);
  out.grid_step = h;
  out.mass = trapezoid_mass(out.densities);
  if (out.mass < 1.0 - 1e-4)
    throw ResolutionError("convolution_pdf: captured mass " + std::to_string(out.mass) +
                          " below 1 - 1e-4; increase r_max or n_grid");
  return out;
}

double aser_quadrature(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                       double abs_tol) {
  spec.validate();
  cfg.validate();
  auto integrand = [&](double theta) {
    const double t = std::tan(theta);
    const double sec2 = 1.0 + t * t;
    const double q = gaussian_q(std::sqrt(2.0 * cfg.modulation_g * t));
    if (q == 0.0 || t == 0.0) return 0.0;
    return q * snr_pdf(spec, c, cfg, t) * sec2;
  };
  // theta -> pi/2 is cut where Q underflows; the integrand vanishes there.
  const double hi = M_PI / 2.0 * (1.0 - 1e-12);
  // The density behaves like psi^(alpha mu L / 2 - 1) at the origin for both
  // combiners; theta = v^q regrades that endpoint so the panels stay
  // high-order.
  const double kappa = spec.params.alpha * spec.params.mu * spec.branches / 2.0 - 1.0;
  const double split = 0.5;
  const double q_sub = std::max(1.0, std::ceil(4.0 / (1.0 + kappa)));
  auto graded = [&](double v) {
    return integrand(std::pow(v, q_sub)) * q_sub * std::pow(v, q_sub - 1.0);
  };
  const double head = integrate_composite_gl(graded, 0.0, std::pow(split, 1.0 / q_sub),
                                             0.5 * abs_tol, 32, 4096);
  const double tail = integrate_composite_gl(integrand, split, hi, 0.5 * abs_tol, 32, 4096);
  return head + tail;
}

}  // namespace amsum
