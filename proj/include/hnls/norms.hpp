#pragma once

// Modulation, Sobolev, Fourier-Lebesgue and Bourgain-type norms on the
// periodic grid. All frequency integrals use the measure 2 pi / L per mode
// and all spatial integrals L / N per node. <x> = 1 + |x| throughout.

#include <functional>
#include <vector>

#include "hnls/spectral.hpp"

namespace hnls {

inline double japanese(double x) { return 1.0 + (x < 0 ? -x : x); }

enum class Window { sharp, smooth };

struct ModulationParams {
  double s = 0.0;
  double p = 2.0;
  Window window = Window::sharp;

  void validate() const;
};

// Smooth bump used for Window::smooth: supported in [-1, 1] with integer
// translates summing to one.
double smooth_window(double xi);

// Index n of the sharp cube I_n = [n - 1/2, n + 1/2) containing xi.
int sharp_cube(double xi);

// Window value psi_n(xi).
double window_value(Window window, int n, double xi);

// Range of cube indices n whose window meets the grid spectrum.
int max_cube_index(const SpatialGrid& grid);

SpectralField pi_n(const SpectralField& u, int n, Window window = Window::sharp);

// ||Pi_n u||_{L^2}^2 for every n in [-max_cube_index, max_cube_index]; entry
// i corresponds to n = i - max_cube_index.
std::vector<double> cube_masses(const SpectralField& u,
                                Window window = Window::sharp);

double modulation_norm(const SpectralField& u, const ModulationParams& params);
double sobolev_norm(const SpectralField& u, double s);
double fourier_lebesgue_norm(const SpectralField& u, double s, double p);
// (L/N sum |u_j|^p)^{1/p}; p = infinity gives the max.
double lp_norm(const SpectralField& u, double p);

// Elementwise l^p norm of a sequence.
double lp_sequence_norm(const std::vector<double>& values, double p);

// Dyadic annulus N/2 <= |xi| < N.
SpectralField littlewood_paley(const SpectralField& u, int dyadic);

struct BernsteinReport {
  double lp_ratio = 0.0;  // ||P_N u||_p / (N^{1/q - 1/p} ||u||_q)
  double pi_ratio = 0.0;  // max_n ||Pi_n u||_p / ||u||_q
};

BernsteinReport bernstein_check(const SpectralField& u, double p, double q,
                                int dyadic);

// r_n = \int <xi - n>^{-1} |u^(xi)|^2 dxi.
double tail_integral(const SpectralField& u, int n);

// sum_j <j - n>^{-1} ||u^||_{L^2(I_j)}^2, the cube-discretised r_n.
double cube_tail_sum(const SpectralField& u, int n);

// \int <mu>^{-2} |u_n^(mu)|^2 dmu = \int <xi - n>^{-2} |u^(xi)|^2 dxi.
double weighted_cube_sum(const SpectralField& u, int n);

// Constant C(p) with r_n <= C(p) ||u||_{M^{2,p}}^2 for every n and u:
// 2 (2 zeta(q) - 1)^{1/q}, 2/p + 1/q = 1.
double tail_constant(double p);

// ---------------------------------------------------------------------------
// Space-time fields.

class TimeGrid {
 public:
  TimeGrid(int points, double length);
  int size() const { return points_; }
  double length() const { return length_; }
  double dt() const { return length_ / points_; }
  double node(int i) const { return i * dt(); }
  double dtau() const { return 2.0 * kPi / length_; }

 private:
  int points_;
  double length_;
};

// Samples u(x_j, t_i) stored row-major by time.
class SpaceTimeField {
 public:
  SpaceTimeField(const SpatialGrid& space, const TimeGrid& time,
                 ComplexVector samples);

  const SpatialGrid& space() const { return space_; }
  const TimeGrid& time() const { return time_; }
  std::span<const Complex> samples() const { return samples_; }
  SpectralField slice(int time_index) const;

  // Applies P_N to every time slice.
  SpaceTimeField littlewood_paley(int dyadic) const;

 private:
  SpatialGrid space_;
  TimeGrid time_;
  ComplexVector samples_;
};

// eta(t) e^{-t d^3} u0 sampled on the time grid, with eta a Gaussian bump
// centred in the box whose tails vanish at both ends.
SpaceTimeField windowed_airy_evolution(const SpectralField& u0,
                                       const TimeGrid& time);

// (sum_n <n>^{sp} ||<tau - xi^3>^b U^||_{L^2(R x [n, n+1))}^p)^{1/p}.
// The tau transform is taken of the interaction profile e^{-i t xi^3} u^(xi, t),
// so that the weight becomes <sigma>^b with sigma = tau - xi^3 resolved on the
// time grid regardless of how large xi^3 is.
double xsb_norm(const SpaceTimeField& u, double s, double b, double p);

// Standard X^{s,b} norm ||<xi>^s <tau - xi^3>^b U^||_{L^2}.
double xsb_standard_norm(const SpaceTimeField& u, double s, double b);

}  // namespace hnls
