// SPDX-License-Identifier: Apache-2.0
#include "amsum/numerics.hpp"

#include <map>
#include <mutex>

#include "amsum/errors.hpp"

namespace amsum {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth);
}

const GaussLegendreRule& gauss_legendre_rule(int order) {
  static std::mutex mtx;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) {
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= order; ++k) {
          const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = pk;
        }
        dp = order * (x * p1 - p0) / (x * x - 1.0);
        break;
      }
    }
    rule.nodes[i] = -x;
    rule.nodes[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[order - 1 - i] = w;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

double gauss_legendre_panel(const std::function<double(double)>& f, double a, double b,
                            const GaussLegendreRule& rule) {
  const double c = 0.5 * (b - a);
  const double d = 0.5 * (a + b);
  StableSum acc;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc.add(rule.weights[i] * f(c * rule.nodes[i] + d));
  return c * acc.value();
}

double integrate_composite_gl(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, int order, int max_panels) {
  const GaussLegendreRule& rule = gauss_legendre_rule(order);
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (int panels = 4; panels <= max_panels; panels *= 2) {
    StableSum acc;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
      acc.add(gauss_legendre_panel(f, a + p * h, a + (p + 1) * h, rule));
    const double cur = acc.value();
    if (!std::isnan(prev) && std::fabs(cur - prev) <= abs_tol) return cur;
    prev = cur;
  }
  throw ResolutionError("composite Gauss-Legendre quadrature did not settle within panel budget");
}

}  // namespace amsum
