#include <doctest.h>

#include <numeric>

#include "hnls/errors.hpp"
#include "hnls/norms.hpp"
#include "support.hpp"

using namespace hnls;

TEST_SUITE("norms") {

TEST_CASE("windows partition unity") {
  for (double xi : {-3.7, -0.5, 0.0, 0.25, 0.5, 1.999, 12.3}) {
    double sum = 0.0;
    for (int n = -20; n <= 20; ++n) sum += smooth_window(xi - n);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(window_value(Window::sharp, sharp_cube(xi), xi) == 1.0);
  }
  CHECK(sharp_cube(0.5) == 1);
  CHECK(sharp_cube(-0.5) == 0);
}

TEST_CASE("cube projections reassemble the field") {
  const SpatialGrid grid(128, 4 * kPi);
  const auto u = test::band_field(grid, 5, 12.0);
  const auto mass = cube_masses(u);
  CHECK(std::accumulate(mass.begin(), mass.end(), 0.0) ==
        doctest::Approx(u.mass()).epsilon(1e-13));
  for (auto w : {Window::sharp, Window::smooth}) {
    auto sum = SpectralField::zero(grid);
    const int nmax = static_cast<int>(std::floor(grid.nyquist() - 1.0));
    for (int n = -nmax; n <= nmax; ++n) sum = sum + pi_n(u, n, w);
    CHECK(max_abs_difference(sum, u) < 1e-12);
  }
}

TEST_CASE("p = 2 modulation norm is the L2 norm") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 9, 10.0);
  CHECK(modulation_norm(u, {0.0, 2.0}) == doctest::Approx(u.l2_norm()).epsilon(1e-13));
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(u.l2_norm()).epsilon(1e-13));
  CHECK(fourier_lebesgue_norm(u, 0.0, 2.0) == doctest::Approx(u.l2_norm()).epsilon(1e-13));
}

TEST_CASE("sobolev and fourier-lebesgue against direct sums") {
  const SpatialGrid grid(64, 3.0);
  const auto u = test::band_field(grid, 2, 40.0);
  double h = 0.0, fl = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double w = japanese(grid.frequency(i));
    h += w * w * std::norm(u.coefficients()[i]);
    fl += std::pow(w * std::abs(u.coefficients()[i]), 3.0);
  }
  CHECK(sobolev_norm(u, 1.0) == doctest::Approx(std::sqrt(h * grid.dxi())).epsilon(1e-13));
  CHECK(fourier_lebesgue_norm(u, 1.0, 3.0) ==
        doctest::Approx(std::cbrt(fl * grid.dxi())).epsilon(1e-13));
}

TEST_CASE("lp norms of a constant") {
  const SpatialGrid grid(32, 5.0);
  const auto one = SpectralField::from_samples(grid, ComplexVector(32, Complex(1.0)));
  CHECK(lp_norm(one, 2.0) == doctest::Approx(std::sqrt(5.0)));
  CHECK(lp_norm(one, 4.0) == doctest::Approx(std::pow(5.0, 0.25)));
  CHECK(lp_norm(one, INFINITY) == doctest::Approx(1.0));
  CHECK(lp_sequence_norm({3.0, 4.0}, 2.0) == doctest::Approx(5.0));
}

TEST_CASE("modulation norms decrease in p") {
  const SpatialGrid grid(128, 2 * kPi);
  for (int f = 0; f < 10; ++f) {
    const auto u = test::band_field(grid, 100 + f, 20.0);
    double prev = INFINITY;
    for (double p : {2.0, 3.0, 4.0, 8.0}) {
      const double m = modulation_norm(u, {0.0, p});
      CHECK(m <= prev * (1 + 1e-14));
      prev = m;
    }
  }
}

TEST_CASE("tail constant") {
  // p = 2 gives q = infinity; p = 4 gives q = 2 with zeta(2) = pi^2 / 6.
  CHECK(tail_constant(2.0) == doctest::Approx(2.0));
  CHECK(tail_constant(4.0) == doctest::Approx(2.0 * std::sqrt(kPi * kPi / 3 - 1)).epsilon(1e-12));
  const SpatialGrid grid(128, 2 * kPi);
  const auto u = test::band_field(grid, 4, 15.0);
  for (double p : {2.0, 4.0, 8.0}) {
    const double m = modulation_norm(u, {0.0, p});
    for (int n = -20; n <= 20; n += 5)
      CHECK(tail_integral(u, n) <= tail_constant(p) * m * m);
  }
}

TEST_CASE("tail integral of a single mode") {
  const SpatialGrid grid(32, 2 * kPi);
  ComplexVector c(32, Complex(0.0));
  c[grid.index(3)] = 2.0;
  const auto u = SpectralField::from_coefficients(grid, c);
  CHECK(tail_integral(u, 1) == doctest::Approx(4.0 / 3.0));
  CHECK(weighted_cube_sum(u, 1) == doctest::Approx(4.0 / 9.0));
  CHECK(cube_tail_sum(u, 1) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ModulationParams({0.0, 1.0}).validate(), InvalidParameterError);
  CHECK_THROWS_AS(ModulationParams({-1.0, 2.0}).validate(), InvalidParameterError);
  const SpatialGrid grid(32, 2 * kPi);
  CHECK_THROWS_AS(bernstein_check(SpectralField::zero(grid), 2.0, 4.0, 4), InvalidParameterError);
}

TEST_CASE("space-time norm with s = 0 and p = 2 is the standard norm") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u0 = test::band_field(grid, 8, 6.0);
  const auto u = windowed_airy_evolution(u0, TimeGrid(64, 8.0));
  for (double b : {0.0, 0.5})
    CHECK(xsb_norm(u, 0.0, b, 2.0) == doctest::Approx(xsb_standard_norm(u, 0.0, b)).epsilon(1e-12));
  // Airy evolution keeps the interaction profile close to the time window,
  // so the b weight changes the norm only mildly.
  CHECK(xsb_norm(u, 0.0, 0.5, 2.0) < 3.0 * xsb_norm(u, 0.0, 0.0, 2.0));
}

}
