#pragma once

// Periodic grid, discrete Fourier analysis and spectral fields.
//
// Fourier convention (fixed throughout the library):
//
//   u^(xi) = (2 pi)^{-1/2} \int e^{-i x xi} u(x) dx
//
// discretised on the torus [-L/2, L/2) with N nodes x_j = -L/2 + j L/N and
// frequencies xi_m = 2 pi m / L, m in [-N/2, N/2):
//
//   u^_m = (2 pi)^{-1/2} (L/N) sum_j e^{-i x_j xi_m} u(x_j)
//   u(x_j) = (2 pi)^{-1/2} (2 pi/L) sum_m e^{i x_j xi_m} u^_m
//
// so that (L/N) sum_j |u_j|^2 = (2 pi/L) sum_m |u^_m|^2 (Parseval). Norms
// use the measure L/N in x and 2 pi/L in xi. Coefficients are stored in
// signed order: storage index i holds mode m = i - N/2.

#include <complex>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace hnls {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

class SpatialGrid {
 public:
  SpatialGrid(int points, double length);

  int size() const { return points_; }
  double length() const { return length_; }
  double dx() const { return length_ / points_; }
  double dxi() const { return 2.0 * kPi / length_; }

  double node(int j) const { return -0.5 * length_ + j * dx(); }
  // Signed mode number of storage index i.
  int mode(int index) const { return index - points_ / 2; }
  int index(int mode) const { return mode + points_ / 2; }
  bool has_mode(int mode) const {
    return mode >= -points_ / 2 && mode < points_ / 2;
  }
  double frequency(int index) const { return dxi() * mode(index); }
  double mode_frequency(int mode) const { return dxi() * mode; }
  // |xi| of the Nyquist mode m = -N/2.
  double nyquist() const { return kPi * points_ / length_; }

  std::vector<double> nodes() const;
  std::vector<double> frequencies() const;

  // Same length, points multiplied by factor (power of two).
  SpatialGrid refined(int factor) const;

  bool operator==(const SpatialGrid& other) const {
    return points_ == other.points_ && length_ == other.length_;
  }

 private:
  int points_;
  double length_;
};

void require_same_grid(const SpatialGrid& a, const SpatialGrid& b);

// Transforms between samples and coefficients under the convention above.
ComplexVector dft_forward(const SpatialGrid& grid,
                          std::span<const Complex> samples);
ComplexVector dft_inverse(const SpatialGrid& grid,
                          std::span<const Complex> coefficients);

// Immutable sampled field together with its Fourier coefficients.
class SpectralField {
 public:
  static SpectralField from_samples(const SpatialGrid& grid,
                                    ComplexVector samples);
  static SpectralField from_coefficients(const SpatialGrid& grid,
                                         ComplexVector coefficients);
  static SpectralField zero(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }
  std::span<const Complex> samples() const { return samples_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  // Coefficient of a signed mode, zero outside the grid.
  Complex coefficient(int mode) const;

  // Same length, different point count: zero-pads or truncates the spectrum.
  // Truncation that drops more than a 1e-12 fraction of the L2 mass throws
  // ResolutionError.
  SpectralField resampled(int points) const;

  SpectralField conj() const;
  SpectralField scaled(Complex factor) const;

  double mass() const;      // ||u||_{L^2}^2
  double l2_norm() const;   // ||u||_{L^2}
  double max_abs() const;   // max_j |u(x_j)|

 private:
  SpectralField(const SpatialGrid& grid, ComplexVector samples,
                ComplexVector coefficients);

  SpatialGrid grid_;
  ComplexVector samples_;
  ComplexVector coefficients_;
};

SpectralField operator+(const SpectralField& u, const SpectralField& v);
SpectralField operator-(const SpectralField& u, const SpectralField& v);
// Pointwise product on the grid (no dealiasing).
SpectralField pointwise_product(const SpectralField& u, const SpectralField& v);
SpectralField dft_inverse(std::span<const Complex> coefficients,
                          const SpatialGrid& grid);

// Multiplies coefficients by (i xi)^order; the Nyquist mode is zeroed for odd
// orders so derivatives of real fields stay real.
SpectralField spectral_derivative(const SpectralField& u, int order);

// e^{i xi x} u for a grid frequency xi (exact coefficient shift). Spectral
// content pushed off the grid raises ResolutionError.
SpectralField modulate(const SpectralField& u, double xi);
// u(x - shift) via the Fourier phase e^{-i xi shift}; shift is taken mod L.
SpectralField translate(const SpectralField& u, double shift);

// Max |u_j - v_j| over the grid.
double max_abs_difference(const SpectralField& u, const SpectralField& v);

// ---------------------------------------------------------------------------
// Test-field generators.

enum class FieldKind { gaussian, sech, planewave, random_bandlimited };

FieldKind parse_field_kind(std::string_view name);
std::string_view to_string(FieldKind kind);

struct FieldRecipe {
  FieldKind kind = FieldKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;    // sigma for gaussian, w for sech
  double center = 0.0;
  double carrier = 0.0;  // snapped to the nearest grid frequency
  double band_low = -10.0;   // random_bandlimited only, in xi units
  double band_high = 10.0;
  std::uint64_t seed = 1;
};

struct FieldReport {
  double carrier = 0.0;
  bool carrier_snapped = false;
};

// Snaps xi to the nearest grid frequency; `snapped` reports whether it moved.
double snap_to_grid_frequency(const SpatialGrid& grid, double xi,
                              bool* snapped = nullptr);

// Localised kinds must decay to 1e-12 of their amplitude at the box edge and
// keep the outer eighth of the spectrum below 1e-10 of its peak; otherwise
// ResolutionError. random_bandlimited draws complex normal coefficients on
// the grid modes inside [band_low, band_high] and is scaled so that
// max |u| = amplitude.
SpectralField make_field(const SpatialGrid& grid, const FieldRecipe& recipe,
                         FieldReport* report = nullptr);

}  // namespace hnls
