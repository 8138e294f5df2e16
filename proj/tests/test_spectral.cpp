#include <cmath>
#include <numbers>

#include "doctest.h"
#include "dnls/errors.hpp"
#include "dnls/spectral.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

std::vector<Complex> to_vec(const ComplexField& f) { return {f.values().begin(), f.values().end()}; }

double max_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double out = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) out = std::max(out, std::abs(a[j] - b[j]));
  return out;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid layout") {
    const Grid g = make_grid(64, 32.0);
    CHECK(g.size() == 64);
    CHECK(g.dx() == doctest::Approx(0.5));
    CHECK(g.dxi() == doctest::Approx(2.0 * std::numbers::pi / 32.0));
    CHECK(g.x()[0] == doctest::Approx(-16.0));
    CHECK(g.x()[32] == doctest::Approx(0.0));
    CHECK(g.xi()[0] == doctest::Approx(-32 * g.dxi()));
    CHECK(g.xi()[32] == doctest::Approx(0.0));
    CHECK(g.xi()[63] == doctest::Approx(31 * g.dxi()));
  }

  TEST_CASE("grid rejects bad sizes") {
    CHECK_THROWS_AS(make_grid(1000, 10.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(8, 10.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(64, 0.0), InvalidArgument);
    CHECK_THROWS_AS(make_grid(64, -1.0), InvalidArgument);
  }

  TEST_CASE("forward transform matches direct quadrature") {
    const Grid g = make_grid(64, 20.0);
    const auto f = gaussian_profile(g, {0.7, -0.3}, 1.3, 0.4, 1.1);
    const auto fast = forward_ft(f);
    CHECK(fast.side() == Side::frequency);
    const std::vector<double> x(g.x().begin(), g.x().end());
    const std::vector<double> xi(g.xi().begin(), g.xi().end());
    const auto slow = oracle::direct_ft(x, to_vec(f), xi, g.dx());
    CHECK(max_diff(fast.values(), slow) < 1e-13);
  }

  TEST_CASE("gaussian transform matches closed form") {
    const Grid g = make_grid(512, 80.0);
    const oracle::Gaussian ref{{1.2, 0.5}, 1.5, -2.0, 0.75};
    const auto fh = forward_ft(gaussian_profile(g, ref.amplitude, ref.width, ref.center, ref.wavenumber));
    double err = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(fh[j] - ref.fourier(g.xi()[j])));
    CHECK(err < 1e-12);
  }

  TEST_CASE("inverse undoes forward and Plancherel holds") {
    const Grid g = make_grid(256, 40.0);
    const auto f = gaussian_profile(g, {1.0, 0.0}, 2.0, 3.0, -0.5);
    const auto fh = forward_ft(f);
    const auto back = inverse_ft(fh);
    CHECK(back.side() == Side::space);
    CHECK(max_diff(back.values(), f.values()) < 1e-14);
    CHECK(l2_norm(fh) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
  }

  TEST_CASE("transforms check the side") {
    const Grid g = make_grid(64, 10.0);
    const ComplexField space(g, Side::space);
    CHECK_THROWS_AS(inverse_ft(space), InvalidArgument);
    CHECK_THROWS_AS(forward_ft(forward_ft(space)), InvalidArgument);
  }

  TEST_CASE("zero field transforms to zero") {
    const Grid g = make_grid(32, 10.0);
    const auto z = forward_ft(ComplexField(g, Side::space));
    for (auto v : z.values()) CHECK(v == Complex{});
  }

  TEST_CASE("free propagation of a Gaussian matches the closed form") {
    const Grid g = make_grid(2048, 400.0);
    const oracle::Gaussian ref{{1.0, 0.0}, 1.0, 0.0, 0.0};
    const auto f = gaussian_profile(g, ref.amplitude, ref.width, 0.0, 0.0);
    for (double t : {0.5, 3.0, 20.0}) {
      const auto u = free_propagate(f, t);
      double err = 0.0;
      for (std::size_t k = 0; k < g.size(); ++k) err = std::max(err, std::abs(u[k] - ref.free_solution(g.x()[k], t)));
      CHECK(err < 1e-12);
      CHECK(sup_norm(u) == doctest::Approx(ref.free_sup(t)).epsilon(1e-9));
    }
  }

  TEST_CASE("free propagation is a unitary group") {
    const Grid g = make_grid(256, 60.0);
    const auto f = gaussian_profile(g, {1.0, 0.2}, 1.0, -4.0, 2.0);
    CHECK(free_propagate(f, 0.0) == f);
    const auto a = free_propagate(free_propagate(f, 1.25), 2.5);
    const auto b = free_propagate(f, 3.75);
    CHECK(max_diff(a.values(), b.values()) < 1e-13);
    const auto back = free_propagate(free_propagate(f, 5.0), -5.0);
    CHECK(max_diff(back.values(), f.values()) < 1e-13);
    CHECK(l2_norm(a) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    CHECK_THROWS_AS(free_propagate(f, std::nan("")), InvalidArgument);
  }

  TEST_CASE("norms of a Gaussian") {
    const Grid g = make_grid(1024, 100.0);
    const oracle::Gaussian ref{{0.8, 0.0}, 1.5, 0.0, 0.0};
    const auto f = gaussian_profile(g, ref.amplitude, ref.width, 0.0, 0.0);
    CHECK(l2_norm(f) * l2_norm(f) == doctest::Approx(ref.mass()).epsilon(1e-12));
    CHECK(sup_norm(f) == doctest::Approx(0.8));
  }

  TEST_CASE("J norm is conserved by free evolution") {
    const Grid g = make_grid(4096, 800.0);
    const oracle::Gaussian ref{{1.0, 0.0}, 1.0, 0.0, 0.0};
    const auto f = gaussian_profile(g, ref.amplitude, ref.width, 0.0, 0.0);
    CHECK(j_norm(f, 0.0) == doctest::Approx(ref.x_moment_norm()).epsilon(1e-10));
    for (double t : {1.0, 10.0, 50.0}) {
      CHECK(j_norm(free_propagate(f, t), t) == doctest::Approx(ref.x_moment_norm()).epsilon(1e-9));
    }
  }

  TEST_CASE("field equality and finiteness") {
    const Grid g = make_grid(16, 4.0);
    ComplexField a(g, Side::space);
    ComplexField b(g, Side::space);
    CHECK(a == b);
    b[3] = {1.0, 0.0};
    CHECK_FALSE(a == b);
    b[3] = {std::nan(""), 0.0};
    CHECK_THROWS_AS(b.require_finite("test"), SimulationError);
    CHECK_THROWS_AS(ComplexField(g, Side::space, std::vector<Complex>(5)), InvalidArgument);
  }
}
