#include "hnls/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fft.hpp"
#include "hnls/errors.hpp"

namespace hnls {
namespace {

double bump_h(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

void ModulationParams::validate() const {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw InvalidParameterError("modulation exponent p must satisfy 2 <= p < inf");
  if (!(s >= 0.0) || !std::isfinite(s))
    throw InvalidParameterError("regularity s must be finite and >= 0");
}

double smooth_window(double xi) {
  const double a = std::abs(xi);
  if (a >= 1.0) return 0.0;
  const double num = bump_h(1.0 - a);
  return num / (num + bump_h(a));
}

int sharp_cube(double xi) { return static_cast<int>(std::floor(xi + 0.5)); }

double window_value(Window window, int n, double xi) {
  if (window == Window::sharp) return sharp_cube(xi) == n ? 1.0 : 0.0;
  return smooth_window(xi - n);
}

int max_cube_index(const SpatialGrid& grid) {
  return static_cast<int>(std::floor(grid.nyquist() + 1.5));
}

SpectralField pi_n(const SpectralField& u, int n, Window window) {
  const auto& grid = u.grid();
  if (std::abs(n) > grid.nyquist() - 1.0)
    throw InvalidParameterError("cube index " + std::to_string(n) +
                                " outside the resolved band");
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < grid.size(); ++i)
    c[i] *= window_value(window, n, grid.frequency(i));
  return SpectralField::from_coefficients(grid, std::move(c));
}

std::vector<double> cube_masses(const SpectralField& u, Window window) {
  const auto& grid = u.grid();
  const int nmax = max_cube_index(grid);
  std::vector<double> mass(2 * nmax + 1, 0.0);
  const double dxi = grid.dxi();
  for (int i = 0; i < grid.size(); ++i) {
    const double xi = grid.frequency(i);
    const double w = std::norm(u.coefficients()[i]) * dxi;
    if (w == 0.0) continue;
    if (window == Window::sharp) {
      mass[sharp_cube(xi) + nmax] += w;
    } else {
      const int lo = static_cast<int>(std::floor(xi));
      for (int n = lo; n <= lo + 1; ++n) {
        const double psi = smooth_window(xi - n);
        mass[n + nmax] += psi * psi * w;
      }
    }
  }
  return mass;
}

double lp_sequence_norm(const std::vector<double>& values, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  // Scale by the maximum to keep large p from underflowing.
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  if (m == 0.0) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += std::pow(std::abs(v) / m, p);
  return m * std::pow(sum, 1.0 / p);
}

double modulation_norm(const SpectralField& u, const ModulationParams& params) {
  params.validate();
  const auto mass = cube_masses(u, params.window);
  const int nmax = (static_cast<int>(mass.size()) - 1) / 2;
  std::vector<double> terms(mass.size());
  for (std::size_t i = 0; i < mass.size(); ++i) {
    const int n = static_cast<int>(i) - nmax;
    terms[i] = std::pow(japanese(n), params.s) * std::sqrt(mass[i]);
  }
  return lp_sequence_norm(terms, params.p);
}

double sobolev_norm(const SpectralField& u, double s) {
  const auto& grid = u.grid();
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    sum += std::pow(japanese(grid.frequency(i)), 2.0 * s) *
           std::norm(u.coefficients()[i]);
  return std::sqrt(sum * grid.dxi());
}

double fourier_lebesgue_norm(const SpectralField& u, double s, double p) {
  if (!(p >= 1.0)) throw InvalidParameterError("p must be >= 1");
  const auto& grid = u.grid();
  if (std::isinf(p)) {
    double m = 0.0;
    for (int i = 0; i < grid.size(); ++i)
      m = std::max(m, std::pow(japanese(grid.frequency(i)), s) *
                          std::abs(u.coefficients()[i]));
    return m;
  }
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    sum += std::pow(std::pow(japanese(grid.frequency(i)), s) *
                        std::abs(u.coefficients()[i]),
                    p);
  return std::pow(sum * grid.dxi(), 1.0 / p);
}

double lp_norm(const SpectralField& u, double p) {
  if (std::isinf(p)) return u.max_abs();
  if (!(p >= 1.0)) throw InvalidParameterError("p must be >= 1");
  double sum = 0.0;
  for (const auto& z : u.samples()) sum += std::pow(std::abs(z), p);
  return std::pow(sum * u.grid().dx(), 1.0 / p);
}

SpectralField littlewood_paley(const SpectralField& u, int dyadic) {
  const auto& grid = u.grid();
  if (dyadic < 1 || !is_power_of_two(dyadic))
    throw InvalidParameterError("Littlewood-Paley index must be dyadic");
  if (dyadic > grid.nyquist())
    throw ResolutionError("dyadic block exceeds the grid band");
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < grid.size(); ++i) {
    const double a = std::abs(grid.frequency(i));
    if (!(a >= 0.5 * dyadic && a < dyadic)) c[i] = 0.0;
  }
  return SpectralField::from_coefficients(grid, std::move(c));
}

BernsteinReport bernstein_check(const SpectralField& u, double p, double q,
                                int dyadic) {
  if (!(p >= q) || !(q >= 1.0))
    throw InvalidParameterError("Bernstein check needs p >= q >= 1");
  BernsteinReport report;
  const double uq = lp_norm(u, q);
  if (uq == 0.0) return report;
  const double exponent = std::isinf(p) ? 1.0 / q : 1.0 / q - 1.0 / p;
  report.lp_ratio = lp_norm(littlewood_paley(u, dyadic), p) /
                    (std::pow(static_cast<double>(dyadic), exponent) * uq);
  const auto& grid = u.grid();
  const int nmax = static_cast<int>(std::floor(grid.nyquist() - 1.0));
  for (int n = -nmax; n <= nmax; ++n)
    report.pi_ratio =
        std::max(report.pi_ratio, lp_norm(pi_n(u, n), p) / uq);
  return report;
}

double tail_integral(const SpectralField& u, int n) {
  const auto& grid = u.grid();
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    sum += std::norm(u.coefficients()[i]) / japanese(grid.frequency(i) - n);
  return sum * grid.dxi();
}

double cube_tail_sum(const SpectralField& u, int n) {
  const auto mass = cube_masses(u, Window::sharp);
  const int nmax = (static_cast<int>(mass.size()) - 1) / 2;
  double sum = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i)
    sum += mass[i] / japanese(static_cast<int>(i) - nmax - n);
  return sum;
}

double weighted_cube_sum(const SpectralField& u, int n) {
  const auto& grid = u.grid();
  double sum = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double w = japanese(grid.frequency(i) - n);
    sum += std::norm(u.coefficients()[i]) / (w * w);
  }
  return sum * grid.dxi();
}

double tail_constant(double p) {
  if (!(p >= 2.0) || !std::isfinite(p))
    throw InvalidParameterError("tail constant needs 2 <= p < inf");
  if (p == 2.0) return 2.0;
  const double q = 1.0 / (1.0 - 2.0 / p);
  return 2.0 * std::pow(2.0 * std::riemann_zeta(q) - 1.0, 1.0 / q);
}

// ---------------------------------------------------------------------------

TimeGrid::TimeGrid(int points, double length)
    : points_(points), length_(length) {
  if (points < 8 || !is_power_of_two(points))
    throw InvalidParameterError("time grid needs a power-of-two size >= 8");
  if (!(length > 0.0)) throw InvalidParameterError("time box must be positive");
}

SpaceTimeField::SpaceTimeField(const SpatialGrid& space, const TimeGrid& time,
                               ComplexVector samples)
    : space_(space), time_(time), samples_(std::move(samples)) {
  if (samples_.size() != static_cast<std::size_t>(space.size()) * time.size())
    throw SizeMismatchError("space-time sample count mismatch");
}

SpectralField SpaceTimeField::slice(int time_index) const {
  const auto n = static_cast<std::size_t>(space_.size());
  auto begin = samples_.begin() + time_index * n;
  return SpectralField::from_samples(space_, ComplexVector(begin, begin + n));
}

SpaceTimeField SpaceTimeField::littlewood_paley(int dyadic) const {
  ComplexVector out;
  out.reserve(samples_.size());
  for (int i = 0; i < time_.size(); ++i) {
    auto s = hnls::littlewood_paley(slice(i), dyadic);
    out.insert(out.end(), s.samples().begin(), s.samples().end());
  }
  return SpaceTimeField(space_, time_, std::move(out));
}

SpaceTimeField windowed_airy_evolution(const SpectralField& u0,
                                       const TimeGrid& time) {
  const auto& grid = u0.grid();
  const double centre = 0.5 * time.length();
  const double width = time.length() / 16.0;
  ComplexVector out;
  out.reserve(static_cast<std::size_t>(grid.size()) * time.size());
  for (int i = 0; i < time.size(); ++i) {
    const double t = time.node(i);
    const double eta = std::exp(-0.5 * std::pow((t - centre) / width, 2));
    ComplexVector c(u0.coefficients().begin(), u0.coefficients().end());
    for (int m = 0; m < grid.size(); ++m) {
      const double xi = grid.frequency(m);
      c[m] *= eta * std::polar(1.0, t * xi * xi * xi);
    }
    auto s = dft_inverse(grid, c);
    out.insert(out.end(), s.begin(), s.end());
  }
  return SpaceTimeField(grid, time, std::move(out));
}

namespace {

// |U^(xi_m, sigma_r + xi_m^3)|^2 with sigma on the time-frequency grid.
// Returns a [space mode][sigma index] table.
std::vector<std::vector<double>> interaction_spectrum(const SpaceTimeField& u) {
  const auto& grid = u.space();
  const auto& time = u.time();
  const int nx = grid.size();
  const int nt = time.size();
  std::vector<ComplexVector> profile(nx, ComplexVector(nt));
  for (int i = 0; i < nt; ++i) {
    const auto slice = u.slice(i);
    const auto c = slice.coefficients();
    const double t = time.node(i);
    for (int m = 0; m < nx; ++m) {
      const double xi = grid.frequency(m);
      profile[m][i] = c[m] * std::polar(1.0, -t * xi * xi * xi);
    }
  }
  const double scale = time.dt() / std::sqrt(2.0 * kPi);
  std::vector<std::vector<double>> out(nx, std::vector<double>(nt));
  for (int m = 0; m < nx; ++m) {
    detail::fft_forward(profile[m]);
    for (int r = 0; r < nt; ++r) {
      // Storage index r <-> sigma mode r - nt/2; t_0 = 0 so no phase sign.
      const int mode = r - nt / 2;
      out[m][r] = std::norm(profile[m][((mode % nt) + nt) % nt] * scale);
    }
  }
  return out;
}

}  // namespace

double xsb_norm(const SpaceTimeField& u, double s, double b, double p) {
  if (!(p >= 1.0)) throw InvalidParameterError("p must be >= 1");
  const auto& grid = u.space();
  const auto& time = u.time();
  const auto spec = interaction_spectrum(u);
  const double measure = grid.dxi() * time.dtau();
  const int nmax = static_cast<int>(std::ceil(grid.nyquist())) + 1;
  std::vector<double> cube(2 * nmax + 1, 0.0);
  for (int m = 0; m < grid.size(); ++m) {
    const int n = static_cast<int>(std::floor(grid.frequency(m)));
    double sum = 0.0;
    for (int r = 0; r < time.size(); ++r) {
      const double sigma = (r - time.size() / 2) * time.dtau();
      sum += std::pow(japanese(sigma), 2.0 * b) * spec[m][r];
    }
    cube[n + nmax] += sum * measure;
  }
  std::vector<double> terms(cube.size());
  for (std::size_t i = 0; i < cube.size(); ++i) {
    const int n = static_cast<int>(i) - nmax;
    terms[i] = std::pow(japanese(n), s) * std::sqrt(cube[i]);
  }
  return lp_sequence_norm(terms, p);
}

double xsb_standard_norm(const SpaceTimeField& u, double s, double b) {
  const auto& grid = u.space();
  const auto& time = u.time();
  const auto spec = interaction_spectrum(u);
  double total = 0.0;
  for (int m = 0; m < grid.size(); ++m) {
    const double w = std::pow(japanese(grid.frequency(m)), 2.0 * s);
    for (int r = 0; r < time.size(); ++r) {
      const double sigma = (r - time.size() / 2) * time.dtau();
      total += w * std::pow(japanese(sigma), 2.0 * b) * spec[m][r];
    }
  }
  return std::sqrt(total * grid.dxi() * time.dtau());
}

}  // namespace hnls
