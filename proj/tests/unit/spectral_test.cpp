#include <doctest.h>

#include "hnls/errors.hpp"
#include "support.hpp"

using namespace hnls;

TEST_SUITE("spectral") {

TEST_CASE("gaussian coefficients match the continuous transform") {
  // (2 pi)^{-1/2} \int e^{-i x xi} e^{-x^2 / (2 s^2)} dx = s e^{-s^2 xi^2 / 2}
  const SpatialGrid grid(128, 40.0);
  const double s = 2.0;
  ComplexVector samples(grid.size());
  for (int j = 0; j < grid.size(); ++j)
    samples[j] = std::exp(-grid.node(j) * grid.node(j) / (2 * s * s));
  const auto u = SpectralField::from_samples(grid, samples);
  double err = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double xi = grid.frequency(i);
    err = std::max(err, std::abs(u.coefficients()[i] - s * std::exp(-s * s * xi * xi / 2)));
  }
  CHECK(err < 1e-13);
}

TEST_CASE("parseval and round trip") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 3, 10.0);
  double xsum = 0.0, ksum = 0.0;
  for (auto z : u.samples()) xsum += std::norm(z);
  for (auto z : u.coefficients()) ksum += std::norm(z);
  CHECK(xsum * grid.dx() == doctest::Approx(ksum * grid.dxi()).epsilon(1e-13));
  CHECK(u.mass() == doctest::Approx(xsum * grid.dx()).epsilon(1e-13));
  const auto back = dft_inverse(grid, u.coefficients());
  double err = 0.0;
  for (int j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(back[j] - u.samples()[j]));
  CHECK(err < 1e-14);
}

TEST_CASE("derivative of a trigonometric polynomial") {
  const SpatialGrid grid(32, 3.0);
  const double w = grid.mode_frequency(3);
  ComplexVector s(grid.size());
  for (int j = 0; j < grid.size(); ++j) s[j] = std::sin(w * grid.node(j));
  const auto d3 = spectral_derivative(SpectralField::from_samples(grid, s), 3);
  double err = 0.0;
  for (int j = 0; j < grid.size(); ++j)
    err = std::max(err, std::abs(d3.samples()[j] + w * w * w * std::cos(w * grid.node(j))));
  CHECK(err < 1e-10);
}

TEST_CASE("modulate and translate against pointwise formulas") {
  const SpatialGrid grid(256, 40.0);
  const auto u = test::gaussian(grid, 1.0, 1.5);
  const double xi = grid.mode_frequency(5);
  const auto m = modulate(u, xi);
  double err = 0.0;
  for (int j = 0; j < grid.size(); ++j)
    err = std::max(err, std::abs(m.samples()[j] -
                                 std::exp(Complex(0, xi * grid.node(j))) * u.samples()[j]));
  CHECK(err < 1e-13);

  const double shift = 1.2345;
  const auto t = translate(u, shift);
  err = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j) - shift;
    err = std::max(err, std::abs(t.samples()[j] - std::exp(-x * x / (2 * 1.5 * 1.5))));
  }
  CHECK(err < 1e-12);
  CHECK_THROWS_AS(modulate(u, 1.3 * grid.dxi()), InvalidParameterError);
}

TEST_CASE("resampling keeps the field") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 7, 8.0);
  const auto fine = u.resampled(256);
  CHECK(fine.grid().size() == 256);
  for (int j = 0; j < 64; ++j)
    CHECK(std::abs(fine.samples()[4 * j] - u.samples()[j]) < 1e-13);
  CHECK(max_abs_difference(fine.resampled(64), u) < 1e-13);
  CHECK_THROWS_AS(u.resampled(16), ResolutionError);
}

TEST_CASE("field recipes") {
  const SpatialGrid grid(128, 2 * kPi);
  const auto u = test::band_field(grid, 11, 10.0, 0.7);
  CHECK(u.max_abs() == doctest::Approx(0.7).epsilon(1e-14));
  for (int i = 0; i < grid.size(); ++i)
    if (std::abs(grid.frequency(i)) > 10.0) CHECK(u.coefficients()[i] == Complex(0.0));
  CHECK(max_abs_difference(test::band_field(grid, 11, 10.0, 0.7), u) == 0.0);

  FieldRecipe wide;
  wide.width = 2.0;
  CHECK_THROWS_AS(make_field(grid, wide), ResolutionError);

  FieldRecipe wave;
  wave.kind = FieldKind::planewave;
  wave.carrier = 2.2;
  FieldReport report;
  const auto p = make_field(grid, wave, &report);
  CHECK(report.carrier_snapped);
  CHECK(report.carrier == doctest::Approx(2.0));
  CHECK(p.max_abs() == doctest::Approx(1.0));
  CHECK(parse_field_kind("sech") == FieldKind::sech);
  CHECK_THROWS_AS(parse_field_kind("square"), InvalidParameterError);
}

TEST_CASE("invalid grids") {
  CHECK_THROWS_AS(SpatialGrid(0, 1.0), InvalidParameterError);
  CHECK_THROWS_AS(SpatialGrid(64, -1.0), InvalidParameterError);
  const auto u = SpectralField::zero(SpatialGrid(16, 1.0));
  const auto v = SpectralField::zero(SpatialGrid(16, 2.0));
  CHECK_THROWS_AS(u + v, GridMismatchError);
}

}
