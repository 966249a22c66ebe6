// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "amsum/combining.hpp"
#include "amsum/oracles.hpp"
#include "amsum/special.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace amsum;

TEST_SUITE_BEGIN("combining");

namespace {

const CombinerKind kEgc{Combiner::egc};
const CombinerKind kMrc{Combiner::mrc};

// Literal series forms of the SNR pdf/cdf: same coefficients as the
// production path but assembled from the printed term shape. Test-only
// counterpart used to pin the production change-of-variables route inside
// the series' convergence region.
double literal_snr_pdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                       double psi, int n_terms) {
  const SumSpec eff = combiner_effective_spec(spec, c);
  const auto table = coefficient_cache().get(eff, n_terms);
  const AlphaMuParams& p = eff.params;
  const double y = spec.branches * psi / cfg.es_n0;
  const double log_y = std::log(y);
  SignedLogSum acc;
  for (int i = 0; i < n_terms; ++i) {
    const auto& d = table->deltas()[i];
    if (d.is_zero()) continue;
    const double k = p.alpha * (i + p.mu * spec.branches);
    acc.add(SignedLog::from_log(d.log_mag + (k - 1.0) * log_y - std::lgamma(k), d.sign));
  }
  const auto t = acc.total();
  const double jac = spec.branches / cfg.es_n0 *
                     (c.kind == Combiner::egc ? 0.5 / std::sqrt(y) : 1.0);
  return t.is_zero() ? 0.0
                     : t.sign * std::exp(table->log_prefactor() + t.log_mag) * jac;
}

double literal_snr_cdf(const SumSpec& spec, CombinerKind c, const SnrConfig& cfg,
                       double psi, int n_terms) {
  const SumSpec eff = combiner_effective_spec(spec, c);
  const auto table = coefficient_cache().get(eff, n_terms);
  const AlphaMuParams& p = eff.params;
  const double y = spec.branches * psi / cfg.es_n0;
  const double log_y = std::log(y);
  SignedLogSum acc;
  for (int i = 0; i < n_terms; ++i) {
    const auto& d = table->deltas()[i];
    if (d.is_zero()) continue;
    const double k = p.alpha * (i + p.mu * spec.branches);
    acc.add(SignedLog::from_log(d.log_mag + k * log_y - std::lgamma(k + 1.0), d.sign));
  }
  const auto t = acc.total();
  return t.is_zero() ? 0.0 : t.sign * std::exp(table->log_prefactor() + t.log_mag);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_THROWS_AS((SnrConfig{-1.0, 1.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((SnrConfig{1.0, 0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((SnrConfig{1.0, 1.0, -2.0}.validate()), DomainError);
  CHECK(kEgc.theta() == 1);
  CHECK(kMrc.theta() == 2);
  CHECK(db_to_linear(10.0) == doctest::Approx(10.0));
  CHECK(linear_to_db(100.0) == doctest::Approx(20.0));
}

TEST_CASE("EGC envelope pdf equals sum_pdf at every r") {
  const SumSpec spec{{1.3, 0.8, 2.0}, 3};
  for (double r : {0.5, 1.5, 3.0, 6.0, 9.0})
    CHECK(combined_envelope_pdf(spec, kEgc, r) == sum_pdf(spec, r).value);
}

TEST_CASE("MRC envelope pdf equals the transformed-spec series") {
  const SumSpec spec{{1.3, 0.8, 2.0}, 3};
  const SumSpec transformed{{0.65, 0.8, 4.0}, 3};
  for (double r : {1.0, 4.0, 9.0, 14.0})
    CHECK(combined_envelope_pdf(spec, kMrc, r) ==
          doctest::Approx(sum_pdf(transformed, r).value).epsilon(1e-13));
}

TEST_CASE("combined envelope pdf integrates to one") {
  const SumSpec spec{{1.1, 0.9, 1.5}, 3};
  for (CombinerKind c : {kEgc, kMrc}) {
    const SumSpec eff = combiner_effective_spec(spec, c);
    const double r_hi = testutil::sum_tail_cutoff(eff, 1e-10);
    const double mass = testutil::density_mass(
        [&](double r) { return r <= 0.0 ? 0.0 : combined_envelope_pdf(spec, c, r); },
        eff.params.alpha * eff.params.mu * spec.branches, eff.params.alpha,
        spec.branches * eff.params.r_hat, r_hi, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
  }
}

TEST_CASE("snr pdf integrates to one and matches the literal series") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const SnrConfig cfg{db_to_linear(10.0), kModGBpsk, 1.0};
  for (CombinerKind c : {kEgc, kMrc}) {
    // change of variables: psi = (es_n0/L) r^(2/theta) on the effective spec
    // integrate f_Psi(psi) dpsi through psi(r) so the tail substitution in
    // r-space applies; this still exercises snr_pdf's own formula + Jacobian
    const SumSpec eff = combiner_effective_spec(spec, c);
    const double r_hi = testutil::sum_tail_cutoff(eff, 1e-10);
    auto g = [&](double r) {
      if (r <= 0.0) return 0.0;
      const double psi = cfg.es_n0 / spec.branches * std::pow(r, 2.0 / c.theta());
      const double dpsi_dr = cfg.es_n0 / spec.branches * (2.0 / c.theta()) *
                             std::pow(r, 2.0 / c.theta() - 1.0);
      return snr_pdf(spec, c, cfg, psi) * dpsi_dr;
    };
    const double mass = testutil::density_mass(
        g, eff.params.alpha * eff.params.mu * spec.branches, eff.params.alpha,
        spec.branches * eff.params.r_hat, r_hi, 1e-9);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-7));
    for (double psi : {0.5, 2.0, 8.0, 20.0})
      CHECK(snr_pdf(spec, c, cfg, psi) ==
            doctest::Approx(literal_snr_pdf(spec, c, cfg, psi, 120)).epsilon(1e-10));
  }
}

TEST_CASE("snr pdf/cdf change-of-variables consistency") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const SnrConfig cfg{db_to_linear(8.0), kModGBpsk, 1.0};
  for (CombinerKind c : {kEgc, kMrc}) {
    for (double r : {1.0, 2.5, 5.0}) {
      // psi(r) = (es_n0 / L) r^(2/theta); f_Psi(psi) dpsi/dr = f_R(r)
      const double psi = cfg.es_n0 / spec.branches * std::pow(r, 2.0 / c.theta());
      const double dpsi_dr = cfg.es_n0 / spec.branches * (2.0 / c.theta()) *
                             std::pow(r, 2.0 / c.theta() - 1.0);
      CHECK(snr_pdf(spec, c, cfg, psi) * dpsi_dr ==
            doctest::Approx(combined_envelope_pdf(spec, c, r)).epsilon(1e-11));
    }
  }
}

TEST_CASE("snr cdf limits, literal-series match, and finite differences") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const SnrConfig cfg{db_to_linear(10.0), kModGBpsk, 1.0};
  for (CombinerKind c : {kEgc, kMrc}) {
    CHECK(snr_cdf(spec, c, cfg, 1e-9) < 1e-10);  // psi -> 0+ gives 0
    for (double psi : {0.5, 2.0, 8.0}) {
      CHECK(snr_cdf(spec, c, cfg, psi) ==
            doctest::Approx(literal_snr_cdf(spec, c, cfg, psi, 120)).epsilon(1e-10));
      const double h = 1e-5 * psi;
      const double fd =
          (snr_cdf(spec, c, cfg, psi + h) - snr_cdf(spec, c, cfg, psi - h)) / (2.0 * h);
      CHECK(fd == doctest::Approx(snr_pdf(spec, c, cfg, psi)).epsilon(1e-5));
    }
  }
}

TEST_CASE("EGC snr cdf equals sum_cdf at the transformed argument") {
  const SumSpec spec{{1.5, 0.7, 2.0}, 4};
  const SnrConfig cfg{db_to_linear(12.0), kModGBpsk, 1.0};
  for (double psi : {0.3, 1.0, 4.0}) {
    const double r = std::sqrt(spec.branches * psi / cfg.es_n0);
    CHECK(snr_cdf(spec, kEgc, cfg, psi) == sum_cdf(spec, r).value);
  }
}

TEST_CASE("EGC and MRC snr cdf coincide for L = 1") {
  const SumSpec spec{{1.8, 1.1, 2.5}, 1};
  const SnrConfig cfg{db_to_linear(6.0), kModGBpsk, 1.0};
  for (double psi : {0.2, 1.0, 3.0, 9.0})
    CHECK(snr_cdf(spec, kEgc, cfg, psi) ==
          doctest::Approx(snr_cdf(spec, kMrc, cfg, psi)).epsilon(1e-12));
}

TEST_CASE("aser agrees with the quadrature oracle at 10 dB (both combiners)") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const SnrConfig cfg{db_to_linear(10.0), kModGBpsk, 1.0};
  for (CombinerKind c : {kEgc, kMrc}) {
    const AserResult res = aser(spec, c, cfg);
    CHECK(res.method == AserMethod::series);
    const double oracle = aser_quadrature(spec, c, cfg);
    CHECK(res.value == doctest::Approx(oracle).epsilon(2e-8));
  }
  // frozen 30-digit references
  CHECK(aser(spec, kEgc, cfg).value ==
        doctest::Approx(0.00043561302629127262).epsilon(1e-10));
  CHECK(aser(spec, kMrc, cfg).value ==
        doctest::Approx(0.0013950490957378627).epsilon(1e-10));
}

TEST_CASE("aser: L=1 MRC Rayleigh BPSK closed form") {
  const SumSpec spec{{2.0, 1.0, 1.0}, 1};
  for (double snr_db : {0.0, 10.0, 20.0}) {
    const double g = db_to_linear(snr_db);
    const SnrConfig cfg{g, kModGBpsk, 1.0};
    const double closed = 0.5 * (1.0 - std::sqrt(g / (1.0 + g)));
    CHECK(aser(spec, kMrc, cfg).value == doctest::Approx(closed).epsilon(1e-8));
  }
}

TEST_CASE("aser monotone decreasing in SNR") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  for (CombinerKind c : {kEgc, kMrc}) {
    double prev = 1.0;
    for (double db = 2.0; db <= 30.0; db += 4.0) {
      const double v = aser(spec, c, {db_to_linear(db), kModGBpsk, 1.0}).value;
      CHECK(v < prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
}

TEST_CASE("aser falls back to quadrature below 0 dB and flags it") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const SnrConfig cfg{db_to_linear(-5.0), kModGBpsk, 1.0};
  const AserResult res = aser(spec, kEgc, cfg);
  CHECK(res.method == AserMethod::quadrature);
  CHECK(res.value > 0.05);
  CHECK(res.value < 0.5);
}

TEST_CASE("aser_asymptotic diversity gains and high-SNR ratio") {
  const SumSpec spec2{{2.0, 1.0, 1.0}, 2};
  const SnrConfig cfg{db_to_linear(30.0), kModGBpsk, 1.0};
  // Both combiners share the classical diversity order alpha mu L / 2.
  CHECK(aser_asymptotic(spec2, kEgc, cfg).second.diversity_gain == doctest::Approx(2.0));
  CHECK(aser_asymptotic(spec2, kMrc, cfg).second.diversity_gain == doctest::Approx(2.0));

  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  for (CombinerKind c : {kEgc, kMrc}) {
    const SnrConfig cfg50{db_to_linear(50.0), kModGBpsk, 1.0};
    const double exact = aser(spec, c, cfg50).value;
    const auto [asym, gains] = aser_asymptotic(spec, c, cfg50);
    CHECK(exact / asym == doctest::Approx(1.0).epsilon(0.02));
    CHECK(gains.diversity_gain == doctest::Approx(1.62));  // 1.2*0.9*3/2
    CHECK(gains.coding_gain > 0.0);
  }
}

TEST_CASE("outage probability is snr_cdf at gamma_out, bit-identically") {
  const SumSpec spec{{1.2, 1.5, 3.0}, 3};
  for (CombinerKind c : {kEgc, kMrc}) {
    const SnrConfig cfg{db_to_linear(20.0), kModGBpsk, db_to_linear(10.0)};
    CHECK(outage_probability(spec, c, cfg) == snr_cdf(spec, c, cfg, cfg.gamma_out));
  }
}

TEST_CASE("outage probability monotone increasing in gamma_out") {
  const SumSpec spec{{1.2, 1.5, 3.0}, 3};
  for (CombinerKind c : {kEgc, kMrc}) {
    double prev = -1.0;
    for (double gdb = -5.0; gdb <= 15.0; gdb += 2.5) {
      const SnrConfig cfg{db_to_linear(18.0), kModGBpsk, db_to_linear(gdb)};
      const double v = outage_probability(spec, c, cfg);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("op_asymptotic: diversity gain alpha mu L / 2 for both combiners") {
  const SumSpec spec{{0.5, 0.7, 1.0}, 4};
  const SnrConfig cfg{db_to_linear(30.0), kModGBpsk, 1.0};
  CHECK(op_asymptotic(spec, kEgc, cfg).second.diversity_gain == doctest::Approx(0.7));
  CHECK(op_asymptotic(spec, kMrc, cfg).second.diversity_gain == doctest::Approx(0.7));
}

TEST_CASE("op_asymptotic ratio -> 1 at 50 dB (fig-10-style parameters)") {
  const SumSpec spec{{1.2, 1.5, 3.0}, 3};
  const SnrConfig cfg{db_to_linear(50.0), kModGBpsk, db_to_linear(10.0)};
  for (CombinerKind c : {kEgc, kMrc}) {
    const double exact = outage_probability(spec, c, cfg);
    const auto [asym, gains] = op_asymptotic(spec, c, cfg);
    CHECK(exact / asym == doctest::Approx(1.0).epsilon(0.02));
  }
}

TEST_CASE("EGC and MRC outage asymptotes share slope, differ in coding gain") {
  const SumSpec spec{{1.2, 1.5, 3.0}, 3};
  std::vector<double> lx, ly_egc, ly_mrc;
  for (double db = 35.0; db <= 45.0; db += 1.0) {
    const SnrConfig cfg{db_to_linear(db), kModGBpsk, db_to_linear(10.0)};
    lx.push_back(std::log10(cfg.es_n0));
    ly_egc.push_back(std::log10(op_asymptotic(spec, kEgc, cfg).first));
    ly_mrc.push_back(std::log10(op_asymptotic(spec, kMrc, cfg).first));
  }
  const double s_egc = testutil::fit_slope(lx, ly_egc);
  const double s_mrc = testutil::fit_slope(lx, ly_mrc);
  CHECK(s_egc == doctest::Approx(s_mrc).epsilon(1e-9));
  const SnrConfig cfg{db_to_linear(40.0), kModGBpsk, db_to_linear(10.0)};
  CHECK(op_asymptotic(spec, kEgc, cfg).second.coding_gain !=
        doctest::Approx(op_asymptotic(spec, kMrc, cfg).second.coding_gain));
}

TEST_CASE("log-log slopes of exact curves over [35, 45] dB") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};     // fig-7-style (ASER)
  const SumSpec spec_op{{1.2, 1.5, 3.0}, 3};  // fig-10-style (OP)
  for (CombinerKind c : {kEgc, kMrc}) {
    std::vector<double> lx, ly_aser, ly_op;
    for (double db = 35.0; db <= 45.0; db += 1.0) {
      const double snr = db_to_linear(db);
      lx.push_back(std::log10(snr));
      ly_aser.push_back(std::log10(aser(spec, c, {snr, kModGBpsk, 1.0}).value));
      ly_op.push_back(
          std::log10(outage_probability(spec_op, c, {snr, kModGBpsk, db_to_linear(10.0)})));
    }
    // True ASER slope is -alpha mu L / 2 for both combiners (the classical
    // diversity order); OP slope likewise.
    CHECK(testutil::fit_slope(lx, ly_aser) ==
          doctest::Approx(-1.2 * 0.9 * 3 / 2.0).epsilon(0.03));
    CHECK(testutil::fit_slope(lx, ly_op) ==
          doctest::Approx(-1.2 * 1.5 * 3 / 2.0).epsilon(0.03));
  }
}

TEST_CASE("probability outputs stay in [0, 1] across a parameter grid") {
  for (double alpha : {0.6, 1.2, 2.0})
    for (double mu : {0.4, 1.0, 2.2})
      for (int L : {1, 3, 6})
        for (double db : {0.0, 15.0, 35.0}) {
          const SumSpec spec{{alpha, mu, 2.0}, L};
          const SnrConfig cfg{db_to_linear(db), kModGBpsk, db_to_linear(5.0)};
          for (CombinerKind c : {kEgc, kMrc}) {
            const double op = outage_probability(spec, c, cfg);
            CHECK(op >= 0.0);
            CHECK(op <= 1.0);
            const double pe = aser(spec, c, cfg).value;
            CHECK(pe >= 0.0);
            CHECK(pe <= 0.5 + 1e-12);
          }
        }
}

TEST_CASE("modulation presets accepted") {
  const SumSpec spec{{1.2, 0.9, 2.0}, 3};
  const double snr = db_to_linear(10.0);
  const double a1 = aser(spec, kMrc, {snr, kModGBpsk, 1.0}).value;
  const double a2 = aser(spec, kMrc, {snr, kModGMinCorrBpsk, 1.0}).value;
  const double a3 = aser(spec, kMrc, {snr, kModGOrthogonalBpsk, 1.0}).value;
  CHECK(a1 < a2);  // smaller G means worse error rate
  CHECK(a2 < a3);
}

TEST_SUITE_END();
