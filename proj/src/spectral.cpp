#include "hnls/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "fft.hpp"
#include "hnls/errors.hpp"

namespace hnls {
namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

int wrap(int m, int n) { return ((m % n) + n) % n; }

double sign_of_mode(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

SpatialGrid::SpatialGrid(int points, double length)
    : points_(points), length_(length) {
  if (points < 8 || !is_power_of_two(points))
    throw InvalidParameterError("grid point count must be a power of two >= 8, got " +
                                std::to_string(points));
  if (!(length > 0.0) || !std::isfinite(length))
    throw InvalidParameterError("grid length must be positive and finite");
}

std::vector<double> SpatialGrid::nodes() const {
  std::vector<double> x(points_);
  for (int j = 0; j < points_; ++j) x[j] = node(j);
  return x;
}

std::vector<double> SpatialGrid::frequencies() const {
  std::vector<double> xi(points_);
  for (int i = 0; i < points_; ++i) xi[i] = frequency(i);
  return xi;
}

SpatialGrid SpatialGrid::refined(int factor) const {
  if (!is_power_of_two(factor))
    throw InvalidParameterError("refinement factor must be a power of two");
  return SpatialGrid(points_ * factor, length_);
}

void require_same_grid(const SpatialGrid& a, const SpatialGrid& b) {
  if (!(a == b))
    throw GridMismatchError("fields live on different grids (N=" +
                            std::to_string(a.size()) + " vs " +
                            std::to_string(b.size()) + ")");
}

ComplexVector dft_forward(const SpatialGrid& grid,
                          std::span<const Complex> samples) {
  const int n = grid.size();
  if (static_cast<int>(samples.size()) != n)
    throw SizeMismatchError("sample count does not match grid");
  for (const auto& z : samples)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidFieldError("non-finite sample");
  ComplexVector buffer(samples.begin(), samples.end());
  detail::fft_forward(buffer);
  const double scale = grid.dx() / std::sqrt(2.0 * kPi);
  ComplexVector coefficients(n);
  for (int i = 0; i < n; ++i) {
    const int m = grid.mode(i);
    coefficients[i] = buffer[wrap(m, n)] * (scale * sign_of_mode(m));
  }
  return coefficients;
}

ComplexVector dft_inverse(const SpatialGrid& grid,
                          std::span<const Complex> coefficients) {
  const int n = grid.size();
  if (static_cast<int>(coefficients.size()) != n)
    throw SizeMismatchError("coefficient count does not match grid");
  ComplexVector buffer(n);
  for (int i = 0; i < n; ++i) {
    const int m = grid.mode(i);
    buffer[wrap(m, n)] = coefficients[i] * sign_of_mode(m);
  }
  detail::fft_backward(buffer);
  const double scale = std::sqrt(2.0 * kPi) / grid.length();
  for (auto& z : buffer) z *= scale;
  return buffer;
}

SpectralField::SpectralField(const SpatialGrid& grid, ComplexVector samples,
                             ComplexVector coefficients)
    : grid_(grid),
      samples_(std::move(samples)),
      coefficients_(std::move(coefficients)) {}

SpectralField SpectralField::from_samples(const SpatialGrid& grid,
                                          ComplexVector samples) {
  auto coefficients = dft_forward(grid, samples);
  return SpectralField(grid, std::move(samples), std::move(coefficients));
}

SpectralField SpectralField::from_coefficients(const SpatialGrid& grid,
                                               ComplexVector coefficients) {
  for (const auto& z : coefficients)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw InvalidFieldError("non-finite coefficient");
  auto samples = dft_inverse(grid, coefficients);
  return SpectralField(grid, std::move(samples), std::move(coefficients));
}

SpectralField SpectralField::zero(const SpatialGrid& grid) {
  return SpectralField(grid, ComplexVector(grid.size()),
                       ComplexVector(grid.size()));
}

Complex SpectralField::coefficient(int mode) const {
  return grid_.has_mode(mode) ? coefficients_[grid_.index(mode)] : Complex{};
}

SpectralField SpectralField::resampled(int points) const {
  SpatialGrid target(points, grid_.length());
  if (points == grid_.size()) return *this;
  ComplexVector c(points);
  double dropped = 0.0;
  double total = 0.0;
  for (int i = 0; i < grid_.size(); ++i) {
    const int m = grid_.mode(i);
    const double w = std::norm(coefficients_[i]);
    total += w;
    // The Nyquist mode of the finer grid has no partner on a coarser one;
    // when shrinking, its mass counts as dropped like any other lost mode.
    if (target.has_mode(m) && !(points < grid_.size() && m == -points / 2))
      c[target.index(m)] = coefficients_[i];
    else
      dropped += w;
  }
  if (dropped > 1e-12 * total)
    throw ResolutionError("resampling drops resolved spectral content");
  return from_coefficients(target, std::move(c));
}

SpectralField SpectralField::conj() const {
  ComplexVector s(samples_.size());
  std::transform(samples_.begin(), samples_.end(), s.begin(),
                 [](Complex z) { return std::conj(z); });
  return from_samples(grid_, std::move(s));
}

SpectralField SpectralField::scaled(Complex factor) const {
  ComplexVector s(samples_), c(coefficients_);
  for (auto& z : s) z *= factor;
  for (auto& z : c) z *= factor;
  return SpectralField(grid_, std::move(s), std::move(c));
}

double SpectralField::mass() const {
  double sum = 0.0;
  for (const auto& z : samples_) sum += std::norm(z);
  return sum * grid_.dx();
}

double SpectralField::l2_norm() const { return std::sqrt(mass()); }

double SpectralField::max_abs() const {
  double m = 0.0;
  for (const auto& z : samples_) m = std::max(m, std::abs(z));
  return m;
}

SpectralField operator+(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid());
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += v.coefficients()[i];
  return SpectralField::from_coefficients(u.grid(), std::move(c));
}

SpectralField operator-(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid());
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= v.coefficients()[i];
  return SpectralField::from_coefficients(u.grid(), std::move(c));
}

SpectralField pointwise_product(const SpectralField& u,
                                const SpectralField& v) {
  require_same_grid(u.grid(), v.grid());
  ComplexVector s(u.samples().begin(), u.samples().end());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] *= v.samples()[i];
  return SpectralField::from_samples(u.grid(), std::move(s));
}

SpectralField dft_inverse(std::span<const Complex> coefficients,
                          const SpatialGrid& grid) {
  return SpectralField::from_coefficients(
      grid, ComplexVector(coefficients.begin(), coefficients.end()));
}

SpectralField spectral_derivative(const SpectralField& u, int order) {
  if (order < 0) throw InvalidParameterError("derivative order must be >= 0");
  const auto& grid = u.grid();
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < grid.size(); ++i) {
    const Complex ixi(0.0, grid.frequency(i));
    Complex factor(1.0, 0.0);
    for (int r = 0; r < order; ++r) factor *= ixi;
    c[i] *= factor;
  }
  if (order % 2 == 1) c[0] = 0.0;
  return SpectralField::from_coefficients(grid, std::move(c));
}

SpectralField modulate(const SpectralField& u, double xi) {
  const auto& grid = u.grid();
  const double shift = xi / grid.dxi();
  const int q = static_cast<int>(std::lround(shift));
  if (std::abs(shift - q) > 1e-9)
    throw InvalidParameterError("modulation frequency is not a grid frequency");
  if (q == 0) return u;
  ComplexVector c(grid.size());
  double total = 0.0;
  double lost = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    const double w = std::norm(u.coefficients()[i]);
    total += w;
    const int m = grid.mode(i) + q;
    if (grid.has_mode(m) && m != -grid.size() / 2)
      c[grid.index(m)] = u.coefficients()[i];
    else
      lost += w;
  }
  if (lost > 1e-20 * total)
    throw ResolutionError("modulation pushes the spectrum off the grid");
  return SpectralField::from_coefficients(grid, std::move(c));
}

SpectralField translate(const SpectralField& u, double shift) {
  const auto& grid = u.grid();
  const double s = std::remainder(shift, grid.length());
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < grid.size(); ++i)
    c[i] *= std::polar(1.0, -grid.frequency(i) * s);
  // The Nyquist mode has no symmetric partner; keep it real-phase neutral.
  c[0] = u.coefficients()[0] * std::cos(grid.frequency(0) * s);
  return SpectralField::from_coefficients(grid, std::move(c));
}

double max_abs_difference(const SpectralField& u, const SpectralField& v) {
  require_same_grid(u.grid(), v.grid());
  double m = 0.0;
  for (std::size_t i = 0; i < u.samples().size(); ++i)
    m = std::max(m, std::abs(u.samples()[i] - v.samples()[i]));
  return m;
}

// ---------------------------------------------------------------------------

FieldKind parse_field_kind(std::string_view name) {
  if (name == "gaussian") return FieldKind::gaussian;
  if (name == "sech") return FieldKind::sech;
  if (name == "planewave") return FieldKind::planewave;
  if (name == "random_bandlimited") return FieldKind::random_bandlimited;
  throw InvalidParameterError("unknown field kind: " + std::string(name));
}

std::string_view to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::gaussian: return "gaussian";
    case FieldKind::sech: return "sech";
    case FieldKind::planewave: return "planewave";
    case FieldKind::random_bandlimited: return "random_bandlimited";
  }
  return "?";
}

double snap_to_grid_frequency(const SpatialGrid& grid, double xi,
                              bool* snapped) {
  const double m = std::round(xi / grid.dxi());
  const double snapped_xi = m * grid.dxi();
  if (snapped) *snapped = std::abs(snapped_xi - xi) > 1e-12 * (1.0 + std::abs(xi));
  if (!grid.has_mode(static_cast<int>(m)) || static_cast<int>(m) == -grid.size() / 2)
    throw ResolutionError("carrier frequency outside the resolved band");
  return snapped_xi;
}

namespace {

void check_localised(const SpectralField& u, double amplitude) {
  const auto s = u.samples();
  const double edge = std::max(std::abs(s.front()), std::abs(s.back()));
  if (edge > 1e-12 * std::abs(amplitude))
    throw ResolutionError("field does not decay at the box edge");
  const int n = u.grid().size();
  double peak = 0.0;
  for (const auto& z : u.coefficients()) peak = std::max(peak, std::abs(z));
  const int outer = n / 8;
  for (int i = 0; i < n; ++i) {
    const int m = u.grid().mode(i);
    if (std::abs(m) >= n / 2 - outer &&
        std::abs(u.coefficients()[i]) > 1e-10 * peak)
      throw ResolutionError("field is not resolved by the grid spectrum");
  }
}

}  // namespace

SpectralField make_field(const SpatialGrid& grid, const FieldRecipe& recipe,
                         FieldReport* report) {
  if (!std::isfinite(recipe.amplitude))
    throw InvalidParameterError("amplitude must be finite");
  bool snapped = false;
  const double carrier = snap_to_grid_frequency(grid, recipe.carrier, &snapped);
  if (report) {
    report->carrier = carrier;
    report->carrier_snapped = snapped;
  }
  const int n = grid.size();
  ComplexVector s(n);
  switch (recipe.kind) {
    case FieldKind::gaussian:
    case FieldKind::sech: {
      if (!(recipe.width > 0.0))
        throw InvalidParameterError("width must be positive");
      for (int j = 0; j < n; ++j) {
        const double x = grid.node(j);
        const double y = (x - recipe.center) / recipe.width;
        const double envelope = recipe.kind == FieldKind::gaussian
                                    ? std::exp(-0.5 * y * y)
                                    : 1.0 / std::cosh(y);
        s[j] = recipe.amplitude * envelope *
               std::polar(1.0, carrier * x);
      }
      auto u = SpectralField::from_samples(grid, std::move(s));
      check_localised(u, recipe.amplitude);
      return u;
    }
    case FieldKind::planewave: {
      for (int j = 0; j < n; ++j)
        s[j] = recipe.amplitude * std::polar(1.0, carrier * grid.node(j));
      return SpectralField::from_samples(grid, std::move(s));
    }
    case FieldKind::random_bandlimited: {
      if (!(recipe.band_low < recipe.band_high))
        throw InvalidParameterError("empty frequency band");
      const int m_lo = static_cast<int>(std::ceil(recipe.band_low / grid.dxi() - 1e-9));
      const int m_hi = static_cast<int>(std::floor(recipe.band_high / grid.dxi() + 1e-9));
      if (!grid.has_mode(m_lo) || !grid.has_mode(m_hi) || m_lo == -n / 2 ||
          std::max(std::abs(m_lo), std::abs(m_hi)) > n / 2 - n / 8)
        throw ResolutionError("band exceeds the resolved spectrum");
      std::mt19937_64 rng(recipe.seed);
      std::normal_distribution<double> normal(0.0, 1.0);
      ComplexVector c(n);
      for (int m = m_lo; m <= m_hi; ++m) {
        const double re = normal(rng);
        const double im = normal(rng);
        c[grid.index(m)] = Complex(re, im);
      }
      auto u = SpectralField::from_coefficients(grid, std::move(c));
      const double peak = u.max_abs();
      if (peak == 0.0) return u;
      return u.scaled(recipe.amplitude / peak);
    }
  }
  throw InvalidParameterError("unhandled field kind");
}

}  // namespace hnls
