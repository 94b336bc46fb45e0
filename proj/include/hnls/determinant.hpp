#pragma once

// The perturbation determinant
//
//   alpha(u, k) = Re sum_{l>=1} (-1)^{l-1}/l tr A^l,
//   A = (k - d)^{-1/2} u (k + d)^{-1} conj(u) (k - d)^{-1/2},
//
// evaluated on a finite Fourier window. The window truncates every trace,
// and the l = 1 trace converges slowly (its tail decays like k / xi_max), so
// both routes below replace the truncated first trace by its exact lattice
// value alpha_quadratic. The l >= 2 traces converge much faster and are kept
// as computed on the window.

#include <optional>
#include <vector>

#include "hnls/operators.hpp"

namespace hnls {

// Convention constant c in Re tr{(k-d)^{-1} u (k+d)^{-1} conj(u)} =
// 2kc \int |u^|^2 / (4k^2 + xi^2) on the line, under the (2 pi)^{-1/2}
// Fourier normalisation. Derived with tools/derive_convention_constant.
inline constexpr double kQuadraticConstant = 1.0;

// On the torus of length L the same trace carries an extra coth(kL/2)
// (odd in k, so 2k coth(kL/2) > 0 for either sign of k).
double periodic_trace_factor(double k, double length);

enum class ResolventSign { minus = -1, plus = +1 };

// (k + sign i xi)^{-1} for power = -1 and (k + sign i xi)^{-1/2} (principal
// branch) for power = -0.5. Requires k > 0.
MultiplierSymbol resolvent_symbol(ResolventSign sign, double power, double k);

// Operator grid used for alpha when none is given: twice the field grid,
// capped at 512 points, never smaller than the field grid.
SpatialGrid default_operator_grid(const SpatialGrid& field_grid);

FourierOperatorMatrix build_A(const SpectralField& u, double k,
                              const SpatialGrid& operator_grid);
FourierOperatorMatrix build_A(const SpectralField& u, double k);

enum class AlphaMethod { series, logdet, eigen, both };

std::string_view to_string(AlphaMethod m);
AlphaMethod parse_alpha_method(std::string_view name);

struct AlphaOptions {
  AlphaMethod method = AlphaMethod::logdet;
  int l_max = 64;
  double tol = 1e-14;
  double refuse_hs = 0.9;
  int operator_points = 0;  // 0: default_operator_grid
  bool complete_first_trace = true;
};

struct AlphaResult {
  double value = 0.0;
  AlphaMethod method = AlphaMethod::logdet;
  std::vector<double> terms;  // series: Re (-1)^{l-1}/l tr A^l, l = 1..
  double hs_A = 0.0;          // ||A|| on the operator window
  bool converged = true;
  int l_used = 0;
  double tail_bound = 0.0;    // sum_{l > l_used} hs_A^l / l
  double completion = 0.0;    // exact minus truncated first trace
  std::optional<double> series_value;
  std::optional<double> logdet_value;
  bool deferred = false;      // series refused, value came from logdet
};

AlphaResult alpha_series(const SpectralField& u, double k,
                         const AlphaOptions& options = {});
AlphaResult alpha_logdet(const SpectralField& u, double k,
                         const AlphaOptions& options = {});
AlphaResult alpha(const SpectralField& u, double k,
                  const AlphaOptions& options = {});

// Re log det(I + a). LU by default; eigenvalues when requested or when the
// LU pivots come close to zero. Eigenvalues within 1e-8 of -1 raise
// SingularDeterminantError.
double log_det_real(const Eigen::MatrixXcd& a, bool use_eigenvalues = false);

// 2 k c coth(kL/2) sum_q dxi |u^_q|^2 / (4k^2 + xi_q^2); k != 0.
double alpha_quadratic(const SpectralField& u, double k);

// Re tr{(k-d)^{-1} u (k+d)^{-1} conj(u)} computed as the matrix trace on
// operator_grid plus an explicit lattice sum over the pairs of modes the
// window leaves out (out to `extra_modes` beyond it, then an Euler-Maclaurin
// remainder). Independent of the closed form above.
double first_trace_direct(const SpectralField& u, double k,
                          const SpatialGrid& operator_grid,
                          int extra_modes = 20000);

// ---------------------------------------------------------------------------
// Hilbert-Schmidt bounds.

struct HsBoundReport {
  double hs_squared = 0.0;     // ||(k-d)^{-1/2} u (k+d)^{-1/2}||^2, lattice-exact
  double weighted_sum = 0.0;   // \int |u^|^2 / (|k| + |xi|)
  double h_minus_half = 0.0;   // ||u||_{H^{-1/2}}^2
  double ratio() const { return weighted_sum > 0 ? hs_squared / weighted_sum : 0.0; }
};

HsBoundReport hs_bound(const SpectralField& u, double k, int extra_modes = 20000);

// sup over the lattice frequencies xi_q with |q| <= max_mode of
// (|k| + |xi_q|) S_q / L, where hs_squared = sum_q dxi |u^_q|^2 S_q / L.
// Every field supported in those modes has ratio() <= this constant.
double hs_bound_constant(const SpatialGrid& grid, double k, int max_mode,
                         int extra_modes = 20000);

// ---------------------------------------------------------------------------
// Boost family alpha(u_n, k) with u_n = e^{-inx} u.

struct BoostFamilyEntry {
  int n = 0;
  AlphaResult alpha;
  double quadratic = 0.0;
  double tail = 0.0;           // r_n
  double weighted = 0.0;       // \int <xi - n>^{-2} |u^|^2
  double remainder() const { return alpha.value - quadratic; }
};

struct BoostFamily {
  std::vector<BoostFamilyEntry> entries;
  double alpha_norm = 0.0;      // ||alpha(u_n)||_{l^{p/2}}
  double quadratic_norm = 0.0;  // ||quadratic_n||_{l^{p/2}}
  double remainder_norm = 0.0;  // ||alpha - quadratic||_{l^{p/2}}
  double tail_norm = 0.0;       // ||r_n||_{l^p}
  double weighted_norm = 0.0;   // ||weighted_n||_{l^{p/2}}
};

BoostFamily alpha_boost_family(const SpectralField& u, double k, int n_min,
                               int n_max, double p,
                               const AlphaOptions& options = {});

}  // namespace hnls
