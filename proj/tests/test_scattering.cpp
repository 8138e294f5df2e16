#include <cmath>
#include <limits>

#include "doctest.h"
#include "dnls/errors.hpp"
#include "dnls/scattering.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

SystemState pair_state(const Grid& g, double eps, double ratio = 0.8) {
  auto u1 = gaussian_profile(g, {eps, 0.0}, 1.0, 0.0, 0.0);
  auto u2 = gaussian_profile(g, {ratio * eps, 0.0}, 1.5, 0.5, 0.5);
  return SystemState(0.0, std::move(u1), std::move(u2));
}

ScheduleSpec fixed_steps(double t_final, std::vector<double> extra = {}) {
  ScheduleSpec s;
  s.t_final = t_final;
  s.growth_start = 0.0;
  s.extra_times = std::move(extra);
  return s;
}

const SystemState& at(const EvolveResult& run, double t) {
  for (const auto& s : run.snapshots) {
    if (std::abs(s.t - t) < 1e-9) return s;
  }
  throw std::runtime_error("missing snapshot");
}

std::span<const SystemState> from_two(const EvolveResult& run) {
  std::size_t i = 0;
  while (run.snapshots[i].t < 2.0 - 1e-9) ++i;
  return std::span<const SystemState>(run.snapshots).subspan(i);
}

}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("modified amplitudes are constant under free evolution") {
    const Grid g = make_grid(512, 128.0);
    const auto psi = gaussian_profile(g, {1.0, 0.0}, 1.0, 0.0, 0.4);
    const double eps = 0.1;
    auto u1 = psi;
    u1 *= eps;
    const auto run = evolve(SystemState(0.0, u1, ComplexField(g, Side::space)), Schedule(fixed_steps(10.0)));
    const auto psi_hat = forward_ft(psi);
    for (const auto& s : run.snapshots) {
      const auto a = modified_amplitudes(s);
      double err = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(a.alpha1[j] - eps * psi_hat[j]));
      CHECK(err < 1e-13);
      CHECK(orthogonality_defect(a) == 0.0);
      if (s.t > 0.0) {
        const auto r = rho(s);
        for (auto v : r.values()) CHECK(v == Complex{});
      }
    }
  }

  TEST_CASE("rho is the time derivative of |alpha1|^2 - |alpha2|^2") {
    const Grid g = make_grid(512, 128.0);
    const auto run = evolve(pair_state(g, 0.5), Schedule(fixed_steps(4.0, {2.99, 3.0, 3.01})));
    const auto lo = modified_amplitudes(at(run, 2.99));
    const auto hi = modified_amplitudes(at(run, 3.01));
    const auto r = rho(at(run, 3.0));
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      auto delta = [&](double t) {
        const auto& s = t < 3.0 ? lo : hi;
        return std::norm(s.alpha1[j]) - std::norm(s.alpha2[j]);
      };
      const double cd = oracle::centered_difference(delta, 3.0, 0.01);
      CHECK(r[j].imag() == 0.0);
      err = std::max(err, std::abs(cd - r[j].real()));
      scale = std::max(scale, std::abs(r[j].real()));
    }
    CHECK(scale > 0.0);
    CHECK(err / scale < 1e-3);
  }

  TEST_CASE("rho needs positive time") {
    const Grid g = make_grid(64, 20.0);
    CHECK_THROWS_AS(rho(pair_state(g, 0.1)), InvalidArgument);
  }

  TEST_CASE("integral and endpoint m agree") {
    const Grid g = make_grid(1024, 256.0);
    const auto run = evolve(pair_state(g, 0.3), Schedule(fixed_steps(20.0)));
    const auto late = from_two(run);
    const auto mi = m_integral(late);
    const auto me = m_endpoint(modified_amplitudes(run.snapshots.back()));
    CHECK(mi.method == MMethod::integral);
    CHECK(me.method == MMethod::endpoint);
    CHECK(mi.t_final == doctest::Approx(20.0));
    CHECK(mi.quadrature_error > 0.0);
    double diff = 0.0, peak = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      diff = std::max(diff, std::abs(mi.values[j] - me.values[j]));
      peak = std::max(peak, std::abs(me.values[j]));
    }
    CHECK(diff < 1e-2 * peak);
    CHECK(diff < 10.0 * mi.quadrature_error + 1e-12);
    // Snapshots before t = 2 are ignored.
    const auto all = m_integral(run.snapshots);
    CHECK(all.values == mi.values);
  }

  TEST_CASE("m_integral input validation") {
    const Grid g = make_grid(64, 20.0);
    const auto run = evolve(pair_state(g, 0.2), Schedule(fixed_steps(3.0)));
    std::vector<SystemState> no_anchor;
    for (const auto& s : run.snapshots) {
      if (std::abs(s.t - 2.0) > 1e-9) no_anchor.push_back(s);
    }
    CHECK_THROWS_AS(m_integral(no_anchor), InvalidArgument);
    const auto late = from_two(run);
    CHECK_THROWS_AS(m_integral(late.first(2)), InvalidArgument);
    std::vector<SystemState> shuffled(late.begin(), late.end());
    std::swap(shuffled[1], shuffled[2]);
    CHECK_THROWS_AS(m_integral(shuffled), InvalidArgument);
    CHECK_THROWS_AS(m_endpoint(modified_amplitudes(run.snapshots.front())), InvalidArgument);
    CHECK_THROWS_AS(scattering_state(modified_amplitudes(run.snapshots.front())), InvalidArgument);
  }

  TEST_CASE("swapping components flips the sign of m") {
    const Grid g = make_grid(256, 64.0);
    const auto a = pair_state(g, 0.4);
    const SystemState b(0.0, a.u2, a.u1);
    const auto ra = evolve(a, Schedule(fixed_steps(6.0)));
    const auto rb = evolve(b, Schedule(fixed_steps(6.0)));
    const auto ma = m_integral(from_two(ra));
    const auto mb = m_integral(from_two(rb));
    for (std::size_t j = 0; j < g.size(); ++j) CHECK(ma.values[j] == -mb.values[j]);
  }

  TEST_CASE("classification") {
    const Grid g = make_grid(16, 4.0);
    MProfile m{g, std::vector<double>(16, 0.0), MMethod::endpoint, 2.0, 10.0, 0.0};
    m.values[0] = 1.0;
    m.values[1] = -1.0;
    m.values[2] = 0.4;
    const auto tags = classify(m, 0.5);
    CHECK(tags[0] == SurvivalTag::first_survives);
    CHECK(tags[1] == SurvivalTag::second_survives);
    CHECK(tags[2] == SurvivalTag::both_vanish);
    CHECK(tags[3] == SurvivalTag::both_vanish);
    CHECK_THROWS_AS(classify(m, 0.0), InvalidArgument);
    CHECK(std::string(to_string(SurvivalTag::first_survives)) == "first-survives");
    CHECK(std::string(to_string(SurvivalTag::second_survives)) == "second-survives");
    CHECK(std::string(to_string(SurvivalTag::both_vanish)) == "both-vanish");
  }

  TEST_CASE("decoupled data survive exactly where the first spectrum is resolved") {
    const Grid g = make_grid(512, 128.0);
    const double eps = 0.1;
    auto u1 = gaussian_profile(g, {1.0, 0.0}, 1.0, 0.0, 0.0);
    const auto psi_hat = forward_ft(u1);
    u1 *= eps;
    const auto run = evolve(SystemState(0.0, u1, ComplexField(g, Side::space)), Schedule(fixed_steps(4.0)));
    const auto tags = classify(m_endpoint(modified_amplitudes(run.snapshots.back())), eps * eps * 1e-3);
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double p = std::norm(psi_hat[j]);
      if (std::abs(p - 1e-3) < 1e-9) continue;
      CHECK(tags[j] == (p > 1e-3 ? SurvivalTag::first_survives : SurvivalTag::both_vanish));
    }
  }

  TEST_CASE("default threshold") {
    CHECK(default_threshold(1e-6, 0.1) == doctest::Approx(1e-5));
    CHECK(default_threshold(0.0, 0.1) == doctest::Approx(1e-8));
    CHECK(default_threshold(0.0, 0.0) == std::numeric_limits<double>::min());
  }

  TEST_CASE("orthogonality defect") {
    const Grid g = make_grid(16, 4.0);
    ComplexField a(g, Side::frequency), b(g, Side::frequency);
    a[3] = {2.0, 0.0};
    b[3] = {0.0, 1.5};
    a[5] = {1.0, 0.0};
    b[6] = {9.0, 0.0};
    CHECK(orthogonality_defect(SpectralSnapshot{3.0, a, b}) == doctest::Approx(3.0));
  }

  TEST_CASE("tail estimate") {
    const Grid g = make_grid(512, 128.0);
    const auto run = evolve(pair_state(g, 0.3), Schedule(fixed_steps(40.0)));
    const auto tail = estimate_tail(from_two(run));
    CHECK(tail.values.size() == g.size());
    CHECK(tail.exponent > 1.0);
    const auto last = rho(run.snapshots.back());
    const double p = std::max(tail.exponent, 1.1);
    for (std::size_t j = 0; j < g.size(); j += 37) {
      CHECK(tail.values[j] == doctest::Approx(last[j].real() * 40.0 / (p - 1.0)));
    }
    CHECK_THROWS_AS(estimate_tail({}), InvalidArgument);
  }
}
