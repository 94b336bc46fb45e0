#pragma once

// Pseudo-spectral integrator for
//
//   u_t + i a u_xx + b u_xxx = 2 i a |u|^2 u + 6 b |u|^2 u_x
//
// on the periodic grid. In Fourier space u^_t = i phi(xi) u^ + F^ with
// phi(xi) = a xi^2 + b xi^3, so the linear part is integrated exactly by the
// propagator e^{i phi t} and the nonlinearity by classical RK4 in the
// interaction picture (integrating-factor RK4).

#include <string>
#include <utility>
#include <vector>

#include "hnls/determinant.hpp"
#include "hnls/errors.hpp"
#include "hnls/norms.hpp"

namespace hnls {

struct EquationParams {
  double a = 1.0;
  double b = 1.0;
  void validate() const;
};

enum class Dealias { pad_double, two_thirds };

std::string_view to_string(Dealias d);
Dealias parse_dealias(std::string_view name);

// e^{i (a xi^2 + b xi^3) t}
MultiplierSymbol linear_propagator(double t, const EquationParams& params);
SpectralField propagate_linear(const SpectralField& u, double t,
                               const EquationParams& params);

// F(u) = 2 i a |u|^2 u + 6 b |u|^2 u_x. pad_double evaluates the cubic
// products on a grid of 2N points and truncates back, which is alias-free.
SpectralField nonlinearity(const SpectralField& u, const EquationParams& params,
                           Dealias dealias = Dealias::pad_double);

struct MonitorSpec {
  bool mass = true;
  std::vector<double> alpha_k;
  std::vector<ModulationParams> modulation;
  bool tail_integrals = false;
  int tail_n_min = 0;
  int tail_n_max = 0;
  AlphaOptions alpha_options;
};

struct SolverConfig {
  double dt = 1e-3;
  double horizon = 1.0;
  Dealias dealias = Dealias::pad_double;
  int snapshot_stride = 0;  // steps between snapshots; 0 keeps first and last
  MonitorSpec monitors;
  double blowup_threshold = 1e6;
};

struct MonitorSeries {
  std::string name;
  std::vector<double> values;  // one per snapshot
};

struct TrajectoryTrace {
  double dt = 0.0;  // step actually used (horizon / steps)
  int steps = 0;
  std::vector<double> times;
  std::vector<SpectralField> snapshots;
  std::vector<MonitorSeries> monitors;

  const MonitorSeries& monitor(std::string_view name) const;
};

// Raised when max |u| exceeds the blow-up threshold; carries everything
// computed up to the last accepted snapshot.
class BlowUpError : public NumericalError {
 public:
  BlowUpError(const std::string& what, TrajectoryTrace partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const TrajectoryTrace& partial() const { return partial_; }

 private:
  TrajectoryTrace partial_;
};

TrajectoryTrace integrate(const SpectralField& u0, const EquationParams& params,
                          const SolverConfig& config);

// Evaluates the monitors of spec on each snapshot (in parallel).
std::vector<MonitorSeries> evaluate_monitors(
    const std::vector<SpectralField>& snapshots, const MonitorSpec& spec);

// Step satisfying the nonlinear-phase rule
// dt <= 0.05 / (max|u|^2 max(2|a|, 6|b| xi_max)), capped at 0.01.
double default_time_step(const SpectralField& u, const EquationParams& params);

// ---------------------------------------------------------------------------
// Symmetries.

// u_n(x, t) = e^{-inx} e^{i(a n^2 + 2 b n^3) t} u(x - (2an + 3bn^2) t, t).
SpectralField galilean_boost(const SpectralField& u, int n, double t,
                             const EquationParams& params);
// Coefficients (A, b) with A = a + 3bn of the equation u_n solves.
EquationParams boosted_params(const EquationParams& params, int n);

struct GaugeParams {
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

// (-a^2/(3b), -a/(3b), 2a^3/(27 b^2)).
GaugeParams reduction_params(const EquationParams& params);

// Coefficients of the equation v solves when u solves
// u_t + i a u_xx + b u_xxx + i c1 |u|^2 u + c2 |u|^2 u_x = 0 and
// u(x, t) = v(x + d1 t, t) e^{i(d2 x + d3 t)}:
// v_t + b v_xxx + i second v_xx + i zeroth v + first v_x
//     + i cubic |v|^2 v + derivative_cubic |v|^2 v_x = 0.
struct GaugedCoefficients {
  double second = 0.0;
  double zeroth = 0.0;
  double first = 0.0;
  double cubic = 0.0;
  double derivative_cubic = 0.0;
};

GaugedCoefficients gauge_coefficients(double a, double b, double c1, double c2,
                                      const GaugeParams& g);

// Equation solved by v under reduction_params: the same b with a = 0.
EquationParams reduced_params(const EquationParams& params);

// d2 snapped to the nearest grid frequency; `snapped` reports a move.
GaugeParams snap_gauge(const SpatialGrid& grid, GaugeParams g,
                       bool* snapped = nullptr);

// v(y, t) from u(., t), and the inverse map.
SpectralField gauge_to_v(const SpectralField& u, const GaugeParams& g, double t);
SpectralField gauge_to_u(const SpectralField& v, const GaugeParams& g, double t);

// u_lambda(x) = lambda^{-1} u(x / lambda) on the grid of length lambda L.
// With target_points = 0 the point count is kept (samples map one to one);
// a larger power of two zero-pads the spectrum.
SpectralField scaling_transform(const SpectralField& u, int lambda,
                                int target_points = 0);
// (a / lambda, b)
EquationParams scaled_params(const EquationParams& params, int lambda);

}  // namespace hnls
