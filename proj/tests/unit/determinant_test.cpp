#include <doctest.h>

#include <random>

#include "hnls/determinant.hpp"
#include "hnls/errors.hpp"
#include "support.hpp"

using namespace hnls;

namespace {

SpectralField constant_field(const SpatialGrid& grid, Complex c) {
  return SpectralField::from_samples(grid, ComplexVector(grid.size(), c));
}

// For constant u = c the operator A is diagonal with entries
// x_q = |c|^2 / (k^2 + xi_q^2), and the lattice product gives
// alpha = 2 log(sinh(L sqrt(k^2 + |c|^2) / 2) / sinh(k L / 2)).
double constant_alpha(double k, double c2, double length) {
  return 2 * std::log(std::sinh(0.5 * length * std::sqrt(k * k + c2)) /
                      std::sinh(0.5 * length * k));
}

// The window keeps modes |q| <= m and only the first trace is completed, so
// the computed value misses sum_{|q| > m} (log(1 + x_q) - x_q).
double window_defect(double k, double c2, double length, int m) {
  double sum = 0.0;
  for (int q = 2000000; q > m; --q) {
    const double xi = 2 * kPi * q / length;
    const double x = c2 / (k * k + xi * xi);
    sum += 2 * (std::log1p(x) - x);
  }
  return sum;
}

}  // namespace

TEST_SUITE("determinant") {

TEST_CASE("log det of a rank-one perturbation") {
  // det(I + x y^*) = 1 + y^* x
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd x(12), y(12);
  for (int i = 0; i < 12; ++i) {
    x(i) = Complex(normal(rng), normal(rng)) * 0.3;
    y(i) = Complex(normal(rng), normal(rng)) * 0.3;
  }
  const Eigen::MatrixXcd a = x * y.adjoint();
  const double exact = std::log(std::abs(1.0 + y.dot(x)));
  CHECK(log_det_real(a) == doctest::Approx(exact).epsilon(1e-12));
  CHECK(log_det_real(a, true) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("log det of a triangular matrix") {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = Complex(0.0, 1.0);
  a(2, 2) = -0.5;
  a(0, 2) = 7.0;
  const double exact = std::log(2.0) + 0.5 * std::log(2.0) + std::log(0.5);
  CHECK(log_det_real(a) == doctest::Approx(exact).epsilon(1e-14));
  CHECK(log_det_real(a, true) == doctest::Approx(exact).epsilon(1e-12));
  CHECK_THROWS_AS(log_det_real(-Eigen::MatrixXcd::Identity(3, 3)), SingularDeterminantError);
}

TEST_CASE("alpha of a constant field") {
  const SpatialGrid grid(64, 2 * kPi);
  for (double k : {0.5, 1.0, 2.0})
    for (double c : {0.1, 0.4}) {
      const auto u = constant_field(grid, Complex(c * 0.6, c * 0.8));
      const double exact = constant_alpha(k, c * c, grid.length());
      const double seen = exact - window_defect(k, c * c, grid.length(), 63);
      CHECK(alpha(u, k).value == doctest::Approx(seen).epsilon(1e-12));
      AlphaOptions eig;
      eig.method = AlphaMethod::eigen;
      CHECK(alpha(u, k, eig).value == doctest::Approx(seen).epsilon(1e-12));
      CHECK(std::abs(alpha(u, k).value - exact) < 1e-6 * exact);
      // Lattice-exact Hilbert-Schmidt norm: |c|^2 L coth(kL/2) / (2k).
      const auto hb = hs_bound(u, k);
      CHECK(hb.hs_squared ==
            doctest::Approx(c * c * grid.length() / (2 * k * std::tanh(k * kPi))).epsilon(1e-6));
    }
}

TEST_CASE("zero field and invariances") {
  const SpatialGrid grid(64, 2 * kPi);
  CHECK(alpha(SpectralField::zero(grid), 1.0).value == 0.0);
  const auto u = test::band_field(grid, 3, 8.0, 0.3);
  const double a0 = alpha(u, 1.0).value;
  CHECK(alpha(translate(u, 0.77), 1.0).value == doctest::Approx(a0).epsilon(1e-12));
  CHECK(alpha(u.scaled(Complex(0.6, 0.8)), 1.0).value == doctest::Approx(a0).epsilon(1e-12));
}

TEST_CASE("series and log det agree") {
  const SpatialGrid grid(64, 2 * kPi);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto u = test::band_field(grid, seed, 8.0, 0.3);
    const auto s = alpha_series(u, 1.0);
    const auto l = alpha_logdet(u, 1.0);
    REQUIRE(s.hs_A <= 0.5);
    CHECK(s.converged);
    CHECK(std::abs(s.value - l.value) <= 1e-10 * std::max(1.0, std::abs(l.value)));
  }
}

TEST_CASE("series refuses a large operator") {
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = constant_field(grid, 3.0);
  CHECK_THROWS_AS(alpha_series(u, 0.5), NonconvergentError);
  AlphaOptions o;
  o.method = AlphaMethod::series;
  CHECK(alpha(u, 0.5, o).deferred);
}

TEST_CASE("quadratic closed form against the direct trace") {
  const SpatialGrid grid(64, 2 * kPi);
  for (double k : {0.5, 1.0, 3.0}) {
    const auto u = test::band_field(grid, 9, 8.0);
    const double direct = first_trace_direct(u, k, grid.refined(2));
    CHECK(alpha_quadratic(u, k) == doctest::Approx(direct).epsilon(1e-6));
  }
  CHECK(periodic_trace_factor(1.0, 2.0) == doctest::Approx(1.0 / std::tanh(1.0)));
  CHECK(periodic_trace_factor(-1.0, 2.0) == doctest::Approx(-1.0 / std::tanh(1.0)));
}

TEST_CASE("quartic remainder") {
  // alpha(eps u) - eps^2 alpha_quadratic(u) = O(eps^4); least-squares slope.
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 12, 8.0);
  std::vector<double> lx, ly;
  for (double eps : {0.01, 0.02, 0.04}) {
    const auto v = u.scaled(eps);
    lx.push_back(std::log(eps));
    ly.push_back(std::log(std::abs(alpha(v, 1.0).value - alpha_quadratic(v, 1.0))));
  }
  const double mx = (lx[0] + lx[1] + lx[2]) / 3, my = (ly[0] + ly[1] + ly[2]) / 3;
  double sxy = 0.0, sxx = 0.0;
  for (int i = 0; i < 3; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  CHECK(sxy / sxx == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("hilbert-schmidt bound constant") {
  const SpatialGrid grid(64, 2 * kPi);
  for (double k : {0.25, 1.0, 4.0}) {
    const double c = hs_bound_constant(grid, k, 31);
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
      CHECK(hs_bound(test::band_field(grid, seed, 15.0), k).ratio() <= c);
  }
}

TEST_CASE("boost family") {
  const SpatialGrid grid(128, 8 * kPi);
  const auto u = test::gaussian(grid, 0.1, 1.0);
  const auto fam = alpha_boost_family(u, 1.0, -1, 1, 4.0);
  REQUIRE(fam.entries.size() == 3);
  CHECK(fam.entries[1].n == 0);
  CHECK(fam.entries[1].alpha.value == doctest::Approx(alpha(u, 1.0).value).epsilon(1e-13));
  const auto minus = modulate(u, 1.0);
  CHECK(fam.entries[0].alpha.value == doctest::Approx(alpha(minus, 1.0).value).epsilon(1e-13));
  CHECK(fam.entries[2].quadratic == doctest::Approx(alpha_quadratic(modulate(u, -1.0), 1.0)));
}

TEST_CASE("resolvent symbols") {
  const auto half = resolvent_symbol(ResolventSign::minus, -0.5, 2.0);
  const Complex z = half(3.0);
  CHECK(std::abs(z * z * Complex(2.0, -3.0) - 1.0) < 1e-14);
  CHECK(z.real() > 0.0);
  CHECK_THROWS_AS(resolvent_symbol(ResolventSign::plus, -1.0, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(resolvent_symbol(ResolventSign::plus, 2.0, 1.0), InvalidParameterError);
}

}
