#include <cmath>

#include "doctest.h"
#include "dnls/errors.hpp"
#include "dnls/experiments.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

RunConfig small_config() {
  RunConfig c;
  c.n = 1024;
  c.length = 256.0;
  c.t_final = 24.0;
  c.epsilons = {0.1};
  return c;
}

}  // namespace

TEST_SUITE("experiments") {
  TEST_CASE("run_case fills the record") {
    const auto c = small_config();
    const auto res = run_case(c, 0.2);
    CHECK(res.epsilon == 0.2);
    CHECK(res.spectra.size() == res.run.snapshots.size());
    CHECK(res.m_end.t_final == doctest::Approx(24.0));
    CHECK(res.m_int.t_final == doctest::Approx(24.0));
    CHECK(res.threshold == doctest::Approx(default_threshold(res.m_int.quadrature_error, 0.2)));
    CHECK(res.record.epsilon == 0.2);
    CHECK(res.record.lemma_defect[0] > 0.0);
    CHECK(res.record.lemma_defect[1] > 0.0);
    CHECK(res.record.theorem_defect > 0.0);
    CHECK(res.record.quadrature_error == res.m_int.quadrature_error);
    CHECK(res.record.runtime_seconds > 0.0);
    CHECK(res.late_snapshots().front().t == doctest::Approx(2.0));
    CHECK(res.spectrum_at(2.0).t == doctest::Approx(2.0));
    CHECK_THROWS_AS(res.spectrum_at(2.5), InvalidArgument);

    auto fixed = c;
    fixed.threshold = 1e-3;
    CHECK(run_case(fixed, 0.2).threshold == 1e-3);
    CHECK_THROWS_AS(run_case(c, -0.1), InvalidArgument);
    auto short_run = c;
    short_run.t_final = 1.0;
    CHECK_THROWS_AS(run_case(short_run, 0.1), InvalidArgument);
  }

  TEST_CASE("lemma defect") {
    const auto res = run_case(small_config(), 0.1);
    const auto& s2 = res.spectrum_at(2.0);
    const auto d = lemma_defect(s2, res.psi_hat1, res.psi_hat2, 0.1);
    double ref = 0.0;
    for (std::size_t j = 0; j < s2.alpha1.size(); ++j) ref = std::max(ref, std::abs(s2.alpha1[j] - 0.1 * res.psi_hat1[j]));
    CHECK(d[0] == ref);
    CHECK(d == res.record.lemma_defect);
    CHECK_THROWS_AS(lemma_defect(res.spectra.back(), res.psi_hat1, res.psi_hat2, 0.1), InvalidArgument);
  }

  TEST_CASE("epsilon zero gives exact zeros") {
    const auto res = run_case(small_config(), 0.0);
    CHECK(res.record.lemma_defect[0] == 0.0);
    CHECK(res.record.theorem_defect == 0.0);
    const auto ap = apriori_diagnostics(res.run.records, 0.0);
    CHECK(ap.c_inf == 0.0);
    CHECK(ap.growth_exponent == 0.0);
  }

  TEST_CASE("resolved band, theorem defect and tail") {
    const Grid g = make_grid(16, 8.0);
    ComplexField p1(g, Side::frequency), p2(g, Side::frequency);
    p1[4] = {1.0, 0.0};
    p2[5] = {0.5, 0.0};
    p2[6] = {1e-12, 0.0};
    const auto band = resolved_band(p1, p2, 1e-8);
    CHECK(band[4]);
    CHECK(band[5]);
    CHECK_FALSE(band[6]);
    CHECK_FALSE(band[0]);

    MProfile m{g, std::vector<double>(16, 0.0), MMethod::endpoint, 2.0, 10.0, 0.0};
    m.values[4] = 0.01;
    m.values[5] = 0.0;
    m.values[0] = 5.0;  // outside the band
    const double eps = 0.1;
    CHECK(theorem_defect(m, p1, p2, eps, band) == doctest::Approx(eps * eps * 0.25));
    CHECK(theorem_defect(m, p1, p2, eps) == doctest::Approx(5.0));

    TailEstimate tail{2.0, std::vector<double>(16, 0.5)};
    const auto sum = with_tail(m, tail);
    CHECK(sum.values[4] == doctest::Approx(0.51));
    CHECK(sum.method == MMethod::endpoint);
  }

  TEST_CASE("order fit") {
    const std::vector<double> eps{0.05, 0.0707, 0.1, 0.1414, 0.2};
    std::vector<double> d;
    for (double e : eps) d.push_back(2.0 * std::pow(e, 3));
    const auto fit = fit_order(eps, d);
    CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(fit.log_intercept == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(fit.residual < 1e-12);

    const std::vector<double> three{0.05, 0.1, 0.2};
    CHECK_THROWS_AS(fit_order(three, std::vector<double>{1, 2, 3}), InvalidArgument);
    const std::vector<double> dup{0.05, 0.05, 0.1, 0.2};
    CHECK_THROWS_AS(fit_order(dup, std::vector<double>{1, 2, 3, 4}), InvalidArgument);
    const std::vector<double> negative{-0.1, 0.1, 0.2, 0.3};
    CHECK_THROWS_AS(fit_order(negative, std::vector<double>{1, 2, 3, 4}), InvalidArgument);
    CHECK_THROWS_AS(fit_order(eps, std::vector<double>{1, 2, 0, 4, 5}), InvalidArgument);
    CHECK_THROWS_AS(fit_order(eps, std::vector<double>{1, 2}), InvalidArgument);
  }

  TEST_CASE("sweep is deterministic and keeps epsilon order") {
    auto c = small_config();
    c.t_final = 10.0;
    c.epsilons = {0.2, 0.05, 0.1, 0.0707};
    const auto a = sweep(c, 1);
    const auto b = sweep(c, 3);
    REQUIRE(a.records.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(a.records[i].epsilon == c.epsilons[i]);
      CHECK(a.records[i].same_values(b.records[i]));
    }
    CHECK(a.lemma1.slope == b.lemma1.slope);
    CHECK(a.theorem.slope == b.theorem.slope);

    c.epsilons = {0.1, -1.0};
    CHECK_THROWS_AS(sweep(c, 2), InvalidArgument);
  }

  TEST_CASE("a-priori diagnostics on free evolution") {
    auto c = small_config();
    c.n = 4096;
    c.length = 1024.0;
    c.u2.kind = ProfileSpec::Kind::zero;
    c.t_final = 40.0;
    const double eps = 0.1;
    const auto run = evolve(initial_state(c, eps), Schedule(c.schedule_spec()));
    const auto rep = apriori_diagnostics(run.records, eps);
    const oracle::Gaussian ref{{1.0, 0.0}, 1.0, 0.0, 0.0};
    double expect = 0.0;
    for (const auto& r : run.records) expect = std::max(expect, ref.free_sup(r.t) * std::sqrt(1.0 + r.t));
    CHECK(rep.c_inf == doctest::Approx(expect).epsilon(1e-9));
    CHECK(rep.t_at_max == doctest::Approx(1.0).epsilon(0.02));
    // ||u|| and ||J u|| are both conserved, so the fitted growth vanishes.
    CHECK(std::abs(rep.growth_exponent) < 1e-6);
  }

  TEST_CASE("swapping components swaps the scenario report") {
    auto c = small_config();
    c.u1 = ProfileSpec{ProfileSpec::Kind::gaussian, 1.0, 0.0, 1.5, 0.0, 1.5};
    c.u2 = ProfileSpec{ProfileSpec::Kind::gaussian, 0.7, 0.0, 1.5, 0.0, -1.5};
    auto swapped = c;
    std::swap(swapped.u1, swapped.u2);
    const auto a = scenario_report(run_case(c, 0.2), Scenario::A);
    const auto b = scenario_report(run_case(swapped, 0.2), Scenario::A);
    CHECK(a.threshold == b.threshold);
    CHECK(a.tag_counts[0] == b.tag_counts[1]);
    CHECK(a.tag_counts[1] == b.tag_counts[0]);
    CHECK(a.tag_counts[2] == b.tag_counts[2]);
    CHECK(a.alpha_norm_final[0] == b.alpha_norm_final[1]);
    CHECK(a.alpha_norm_final[1] == b.alpha_norm_final[0]);
    CHECK(a.dominant_band_norm[0] == b.dominant_band_norm[1]);
    CHECK(a.mass_ratio[0] == b.mass_ratio[1]);
    CHECK(a.alpha_norm_decreasing[0] == b.alpha_norm_decreasing[1]);
    CHECK(a.orthogonality_nonincreasing == b.orthogonality_nonincreasing);
    CHECK(a.max_abs_m == b.max_abs_m);
    CHECK(a.tag_counts[0] > 0);
    CHECK(a.tag_counts[1] > 0);
  }
}
