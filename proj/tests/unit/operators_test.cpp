#include <doctest.h>

#include <random>

#include "hnls/errors.hpp"
#include "hnls/operators.hpp"
#include "support.hpp"

using namespace hnls;

namespace {

FourierOperatorMatrix random_diagonal(const SpatialGrid& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd d(operator_dimension(grid));
  for (int r = 0; r < d.size(); ++r) d(r) = Complex(normal(rng), normal(rng));
  return {grid, d.asDiagonal()};
}

}  // namespace

TEST_SUITE("operators") {

TEST_CASE("multiplication matrix entries by quadrature") {
  // T_{m,m'} = L^{-1} \int e^{-i xi_m x} u(x) e^{i xi_m' x} dx, evaluated by
  // the trapezoid rule on a finer grid (exact for trigonometric polynomials).
  const SpatialGrid grid(32, 2 * kPi);
  const auto u = test::band_field(grid, 1, 7.0);
  const auto t = multiplication_matrix(u);
  const auto fine = u.resampled(128);
  double err = 0.0;
  for (int m = -8; m <= 8; m += 3)
    for (int mp = -7; mp <= 7; mp += 2) {
      Complex sum = 0.0;
      for (int j = 0; j < 128; ++j) {
        const double x = fine.grid().node(j);
        sum += std::exp(Complex(0, (grid.mode_frequency(mp) - grid.mode_frequency(m)) * x)) *
               fine.samples()[j];
      }
      err = std::max(err, std::abs(t.entry(m, mp) - sum * fine.grid().dx() / grid.length()));
    }
  CHECK(err < 1e-13);
  CHECK(t.dimension() == 31);
}

TEST_CASE("applying a multiplication matrix multiplies pointwise") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 2, 6.0);
  const auto f = test::band_field(grid, 3, 6.0);
  CHECK(max_abs_difference(apply(multiplication_matrix(u), f), pointwise_product(u, f)) < 1e-13);
}

TEST_CASE("adjoint and conjugate of multiplication") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 4, 8.0);
  const auto t = multiplication_matrix(u);
  const auto tc = multiplication_matrix(u.conj());
  CHECK((adjoint(t).matrix() - tc.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((conjugate(t).matrix() - tc.matrix()).cwiseAbs().maxCoeff() < 1e-15);
  // Kernel conjugation of a multiplier gives the reflected conjugate symbol.
  const auto m = derivative_symbol(3);
  const auto lhs = conjugate(multiplier_matrix(m, grid));
  const auto rhs = multiplier_matrix(reflected_conjugate(m), grid);
  CHECK((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("trace and hilbert-schmidt norm of a multiplier") {
  const SpatialGrid grid(16, 2 * kPi);
  const auto m = multiplier_matrix(shifted_derivative_symbol(2.0, 1, -1), grid);
  Complex tr = 0.0;
  double hs = 0.0;
  for (int q = -7; q <= 7; ++q) {
    tr += 1.0 / Complex(2.0, q);
    hs += 1.0 / (4.0 + q * q);
  }
  CHECK(std::abs(trace(m) - tr) < 1e-14);
  CHECK(hs_norm(m) == doctest::Approx(std::sqrt(hs)).epsilon(1e-14));
  CHECK_THROWS_AS(multiplier_matrix(shifted_derivative_symbol(0.0, 1, -1), grid),
                  SingularSymbolError);
}

TEST_CASE("trace identities on random factors") {
  const SpatialGrid grid(64, 2 * kPi);
  std::mt19937_64 rng(17);
  for (int n : {2, 3, 4}) {
    std::vector<FourierOperatorMatrix> ms;
    std::vector<SpectralField> us;
    for (int i = 0; i <= n; ++i) {
      ms.push_back(random_diagonal(grid, rng));
      us.push_back(test::band_field(grid, 50 + 10 * n + i, 6.0));
    }
    const auto r = trace_identities_check(ms, us);
    CHECK(r.factors == n);
    CHECK(r.max_deviation() < 1e-12);
    CHECK(r.product_bound_ratio <= 1.0);
  }
}

TEST_CASE("multiplication identities") {
  const SpatialGrid grid(128, 2 * kPi);
  const auto u = test::band_field(grid, 5, 10.0);
  const auto f = test::band_field(grid, 6, 10.0);
  for (auto id : all_mult_identities())
    for (double k : {0.5, 1.0, 2.0}) CHECK(mult_identity_residual(id, u, k, f).relative() < 1e-8);
}

TEST_CASE("aliasing guard") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 8, 20.0);
  CHECK_THROWS_AS(multiplication_matrix(u), AliasingError);
  CHECK_NOTHROW(multiplication_matrix(u, grid.refined(2)));
}

TEST_CASE("weight convolution against closed forms") {
  // \int <x>^{-1} <x - d>^{-1} dx = 2 ln(1 + d) (1/d + 1/(2 + d)) for d > 0.
  for (double d : {0.5, 3.0, 40.0}) {
    const auto r = weight_convolution_check(1.0, 1.0, 0.0, d);
    const double exact = 2 * std::log1p(d) * (1 / d + 1 / (2 + d));
    CHECK(r.integral == doctest::Approx(exact).epsilon(1e-10));
    CHECK(r.exponent == 1.0);
  }
  CHECK(weight_convolution_check(2.0, 2.0, 1.0, 1.0).integral ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(weight_convolution_check(0.5, 0.5, 0.0, 0.0), InvalidParameterError);
}

}
