#include <doctest.h>

#include <random>

#include "hnls/solver.hpp"
#include "support.hpp"

using namespace hnls;

namespace {

SpectralField plane_wave(const SpatialGrid& grid, double amp, double xi, double phase) {
  ComplexVector s(grid.size());
  for (int j = 0; j < grid.size(); ++j)
    s[j] = amp * std::exp(Complex(0.0, xi * grid.node(j) + phase));
  return SpectralField::from_samples(grid, s);
}

// A e^{i(xi x - omega t)} solves the equation iff
// omega = -a xi^2 - b xi^3 - 2 a A^2 - 6 b A^2 xi.
double plane_wave_omega(const EquationParams& e, double amp, double xi) {
  return -e.a * xi * xi - e.b * xi * xi * xi - 2 * e.a * amp * amp - 6 * e.b * amp * amp * xi;
}

double plane_wave_error(double dt) {
  const SpatialGrid grid(256, 2 * kPi);
  const EquationParams e{1.0, 1.0};
  const auto u0 = plane_wave(grid, 0.2, 2.0, 0.0);
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.horizon = 1.0;
  const auto tr = integrate(u0, e, cfg);
  const auto exact = plane_wave(grid, 0.2, 2.0, -plane_wave_omega(e, 0.2, 2.0));
  return max_abs_difference(tr.snapshots.back(), exact);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("propagator is unitary with a group law") {
  const EquationParams e{0.7, -1.3};
  for (double xi : {-5.0, -0.5, 0.0, 2.0, 11.0}) {
    const Complex s = linear_propagator(0.3, e)(xi);
    const Complex t = linear_propagator(0.45, e)(xi);
    CHECK(std::abs(s) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(s * t - linear_propagator(0.75, e)(xi)) < 1e-12);
  }
  const SpatialGrid grid(64, 2 * kPi);
  const auto u = test::band_field(grid, 1, 10.0);
  CHECK(propagate_linear(u, 2.5, e).mass() == doctest::Approx(u.mass()).epsilon(1e-13));
}

TEST_CASE("nonlinearity of a plane wave") {
  // F(A e^{i xi x}) = (2 i a + 6 i b xi) A^2 u
  const SpatialGrid grid(64, 2 * kPi);
  const EquationParams e{1.5, 0.5};
  const auto u = plane_wave(grid, 0.3, 3.0, 0.4);
  const auto expected = u.scaled(Complex(0.0, (2 * e.a + 6 * e.b * 3.0) * 0.09));
  for (auto d : {Dealias::pad_double, Dealias::two_thirds})
    CHECK(max_abs_difference(nonlinearity(u, e, d), expected) < 1e-14);
}

TEST_CASE("nonlinearity is orthogonal to u") {
  // Re <u, F(u)> = 6 b \int |u|^2 Re(conj(u) u_x) = (3/2) b \int (|u|^4)_x = 0.
  const SpatialGrid grid(128, 2 * kPi);
  const auto u = test::band_field(grid, 3, 10.0);
  for (const EquationParams e : {EquationParams{0.0, 1.0}, EquationParams{2.0, -0.5}}) {
    const auto f = nonlinearity(u, e);
    double dot = 0.0, scale = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      dot += (std::conj(u.coefficients()[i]) * f.coefficients()[i]).real();
      scale += std::abs(u.coefficients()[i]) * std::abs(f.coefficients()[i]);
    }
    CHECK(std::abs(dot) < 1e-13 * scale);
  }
}

TEST_CASE("dealiasing modes agree on resolved data") {
  const SpatialGrid grid(128, 2 * kPi);
  const auto u = test::band_field(grid, 4, 6.0);
  CHECK(max_abs_difference(nonlinearity(u, {}, Dealias::pad_double),
                           nonlinearity(u, {}, Dealias::two_thirds)) < 1e-12);
  CHECK(parse_dealias("two-thirds") == Dealias::two_thirds);
}

TEST_CASE("zero data stays zero") {
  const SpatialGrid grid(64, 2 * kPi);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.monitors.alpha_k = {1.0};
  const auto tr = integrate(SpectralField::zero(grid), {}, cfg);
  CHECK(tr.snapshots.back().max_abs() == 0.0);
  CHECK(tr.monitor("mass").values.back() == 0.0);
  CHECK(tr.monitor("alpha[k=1]").values.back() == 0.0);
}

TEST_CASE("plane wave converges at fourth order") {
  const double e1 = plane_wave_error(0.02), e2 = plane_wave_error(0.01);
  CHECK(e1 <= 1e-8);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("mass is conserved") {
  const SpatialGrid grid(256, 16 * kPi);
  const auto u0 = test::gaussian(grid, 0.1, 2.0);
  SolverConfig cfg;
  cfg.dt = 0.01;
  cfg.snapshot_stride = 25;
  const auto tr = integrate(u0, {}, cfg);
  CHECK(tr.times.size() == 5);
  for (double m : tr.monitor("mass").values) CHECK(std::abs(m - u0.mass()) <= 1e-10 * u0.mass());
}

TEST_CASE("blow-up aborts with the partial trace") {
  const SpatialGrid grid(128, 2 * kPi);
  const auto u0 = plane_wave(grid, 0.1, 1.0, 0.0) + test::band_field(grid, 1, 20.0, 4.0);
  SolverConfig cfg;
  cfg.dt = 0.05;
  cfg.horizon = 5.0;
  cfg.snapshot_stride = 1;
  try {
    integrate(u0, {}, cfg);
    FAIL("expected a blow-up");
  } catch (const BlowUpError& e) {
    CHECK(!e.partial().snapshots.empty());
    CHECK(e.partial().times.front() == 0.0);
  }
}

TEST_CASE("default time step rule") {
  const SpatialGrid grid(256, 2 * kPi);
  const auto u = plane_wave(grid, 1.0, 1.0, 0.0);
  CHECK(default_time_step(u, {}) == doctest::Approx(0.05 / (6 * grid.nyquist())));
  CHECK(default_time_step(plane_wave(grid, 0.001, 1.0, 0.0), {}) == 0.01);
}

TEST_CASE("galilean boost") {
  const SpatialGrid grid(256, 16 * kPi);
  const auto u = test::gaussian(grid, 0.1, 2.0);
  CHECK(max_abs_difference(galilean_boost(u, 0, 0.7, {}), u) < 1e-15);
  const auto b = boosted_params({1.0, 2.0}, -2);
  CHECK(b.a == -11.0);
  CHECK(b.b == 2.0);
  // The boost only shifts and rephases the spectrum.
  const auto v = galilean_boost(u, 2, 0.3, {});
  for (int m = -20; m <= 20; ++m)
    CHECK(std::abs(std::abs(v.coefficient(m - 16)) - std::abs(u.coefficient(m))) < 1e-15);
}

TEST_CASE("gauge coefficients") {
  // Direct substitution of u = v(x + d1 t, t) e^{i(d2 x + d3 t)}.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = uni(rng), b = uni(rng), c1 = uni(rng), c2 = uni(rng);
    const GaugeParams g{uni(rng), uni(rng), uni(rng)};
    const auto r = gauge_coefficients(a, b, c1, c2, g);
    CHECK(r.second == doctest::Approx(a + 3 * b * g.d2));
    CHECK(r.first == doctest::Approx(g.d1 - 2 * a * g.d2 - 3 * b * g.d2 * g.d2));
    CHECK(r.zeroth == doctest::Approx(g.d3 - a * g.d2 * g.d2 - b * g.d2 * g.d2 * g.d2));
    CHECK(r.cubic == doctest::Approx(c1 + c2 * g.d2));
    CHECK(r.derivative_cubic == doctest::Approx(c2));
  }
  const EquationParams e{1.2, 0.8};
  const auto r = gauge_coefficients(e.a, e.b, -2 * e.a, -6 * e.b, reduction_params(e));
  CHECK(std::abs(r.second) < 1e-15);
  CHECK(std::abs(r.first) < 1e-15);
  CHECK(std::abs(r.zeroth) < 1e-15);
  CHECK(std::abs(r.cubic) < 1e-15);
  CHECK(reduced_params(e).a == 0.0);
}

TEST_CASE("gauge maps invert each other") {
  const SpatialGrid grid(256, 48 * kPi);
  const auto u = test::gaussian(grid, 0.1, 4.0);
  const auto g = snap_gauge(grid, reduction_params({1.0, 1.0}));
  CHECK(max_abs_difference(gauge_to_u(gauge_to_v(u, g, 0.4), g, 0.4), u) < 1e-14);
}

TEST_CASE("scaling transform") {
  const SpatialGrid grid(256, 16 * kPi);
  const auto u = test::gaussian(grid, 0.5, 2.0);
  for (int lambda : {2, 4}) {
    const auto v = scaling_transform(u, lambda);
    CHECK(v.grid().length() == doctest::Approx(lambda * grid.length()));
    CHECK(v.mass() == doctest::Approx(u.mass() / lambda).epsilon(1e-13));
    CHECK(v.samples()[77] == u.samples()[77] / double(lambda));
    const auto w = scaling_transform(u, lambda, 512);
    CHECK(w.grid().size() == 512);
    CHECK(std::abs(w.samples()[154] - v.samples()[77]) < 1e-14);
  }
  CHECK(scaled_params({2.0, 3.0}, 4).a == 0.5);
}

}
