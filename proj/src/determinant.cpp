#include "hnls/determinant.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

#include "hnls/errors.hpp"
#include "hnls/norms.hpp"
#include "hnls/parallel.hpp"

namespace hnls {
namespace {

void require_positive_k(double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw InvalidParameterError("spectral parameter k must be positive, got " +
                                std::to_string(k));
}

// sum_{m > M} m^{-s} by Euler-Maclaurin, enough terms for M >= 1e3.
double zeta_tail(int s, double M) {
  return std::pow(M, 1.0 - s) / (s - 1) - 0.5 * std::pow(M, -s) +
         s / 12.0 * std::pow(M, -s - 1.0);
}

// Lattice sum over m in Z of g(xi_m) where g(xi) ~ 1/xi^2 + c4/xi^4 for
// large |xi| (odd orders cancel between the two tails). Terms with
// |m| <= M are summed explicitly.
template <class G>
Complex lattice_sum(G g, double h, int M, Complex c4) {
  Complex s = 0.0;
  for (int m = -M; m <= M; ++m) s += g(h * m);
  s += 2.0 * (zeta_tail(2, M) / (h * h) + c4 * zeta_tail(4, M) / std::pow(h, 4));
  return s;
}

}  // namespace

double periodic_trace_factor(double k, double length) {
  return 1.0 / std::tanh(k * length / 2.0);
}

MultiplierSymbol resolvent_symbol(ResolventSign sign, double power, double k) {
  require_positive_k(k);
  const double sg = static_cast<int>(sign);
  if (power == -1.0)
    return {[k, sg](double xi) { return 1.0 / Complex(k, sg * xi); },
            sg < 0 ? "R-" : "R+"};
  if (power == -0.5)
    return {[k, sg](double xi) { return 1.0 / std::sqrt(Complex(k, sg * xi)); },
            sg < 0 ? "S-" : "S+"};
  throw InvalidParameterError("resolvent power must be -1 or -1/2");
}

SpatialGrid default_operator_grid(const SpatialGrid& field_grid) {
  const int n = field_grid.size();
  return SpatialGrid(std::max(n, std::min(2 * n, 512)), field_grid.length());
}

FourierOperatorMatrix build_A(const SpectralField& u, double k,
                              const SpatialGrid& operator_grid) {
  require_positive_k(k);
  const auto s = resolvent_symbol(ResolventSign::minus, -0.5, k).sample(operator_grid);
  const auto rp = resolvent_symbol(ResolventSign::plus, -1.0, k).sample(operator_grid);
  const auto U = multiplication_matrix(u, operator_grid).matrix();
  const auto Ub = multiplication_matrix(u.conj(), operator_grid).matrix();
  Eigen::MatrixXcd a = s.asDiagonal() * U;
  a = a * (rp.asDiagonal() * Ub);
  a = a * s.asDiagonal();
  return {operator_grid, std::move(a)};
}

FourierOperatorMatrix build_A(const SpectralField& u, double k) {
  return build_A(u, k, default_operator_grid(u.grid()));
}

std::string_view to_string(AlphaMethod m) {
  switch (m) {
    case AlphaMethod::series: return "series";
    case AlphaMethod::logdet: return "logdet";
    case AlphaMethod::eigen: return "eigen";
    case AlphaMethod::both: return "both";
  }
  return "?";
}

AlphaMethod parse_alpha_method(std::string_view name) {
  if (name == "series") return AlphaMethod::series;
  if (name == "logdet") return AlphaMethod::logdet;
  if (name == "eigen") return AlphaMethod::eigen;
  if (name == "both") return AlphaMethod::both;
  throw InvalidParameterError("unknown alpha method: " + std::string(name));
}

double alpha_quadratic(const SpectralField& u, double k) {
  if (k == 0.0 || !std::isfinite(k))
    throw InvalidParameterError("alpha_quadratic needs k != 0");
  const auto& grid = u.grid();
  double sum = 0.0;
  for (int i = 1; i < grid.size(); ++i) {  // skip the unpaired Nyquist mode
    const double xi = grid.frequency(i);
    sum += std::norm(u.coefficients()[i]) / (4.0 * k * k + xi * xi);
  }
  // k coth(kL/2) is even in k, so the value is positive for either sign.
  return 2.0 * k * kQuadraticConstant * periodic_trace_factor(k, grid.length()) *
         sum * grid.dxi();
}

double first_trace_direct(const SpectralField& u, double k,
                          const SpatialGrid& operator_grid, int extra_modes) {
  require_positive_k(k);
  const auto rm = resolvent_symbol(ResolventSign::minus, -1.0, k).sample(operator_grid);
  const auto rp = resolvent_symbol(ResolventSign::plus, -1.0, k).sample(operator_grid);
  const auto U = multiplication_matrix(u, operator_grid).matrix();
  const auto Ub = multiplication_matrix(u.conj(), operator_grid).matrix();
  // tr(R- U R+ Ub) = sum_{r,s} (R- U)_{rs} (R+ Ub)_{sr}
  const Eigen::MatrixXcd left = rm.asDiagonal() * U;
  const Eigen::MatrixXcd right = rp.asDiagonal() * Ub;
  const double window = left.cwiseProduct(right.transpose()).sum().real();

  // Pairs (m' + q, m') left out by the window, per Fourier-series mode q.
  const int kmax = operator_grid.size() / 2 - 1;
  const auto& fg = u.grid();
  const double h = fg.dxi();
  const double scale = std::sqrt(2.0 * kPi) / fg.length();
  double missing = 0.0;
  for (int q = -(fg.size() / 2 - 1); q <= fg.size() / 2 - 1; ++q) {
    const double cq2 = std::norm(scale * u.coefficient(q));
    if (cq2 == 0.0) continue;
    const double zeta = h * q;
    auto f = [&](double xi) {
      return 1.0 / (Complex(k, -(xi + zeta)) * Complex(k, xi));
    };
    const int M = kmax + std::abs(q) + extra_modes;
    const Complex beta(k * k, -k * zeta);
    const Complex full = lattice_sum(f, h, M, zeta * zeta - beta);
    Complex core = 0.0;
    if (std::abs(q) <= 2 * kmax)
      for (int mp = std::max(-kmax, -kmax - q); mp <= std::min(kmax, kmax - q); ++mp)
        core += f(h * mp);
    missing += cq2 * (full - core).real();
  }
  return window + missing;
}

double log_det_real(const Eigen::MatrixXcd& a, bool use_eigenvalues) {
  const auto n = a.rows();
  const Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) + a;
  if (!use_eigenvalues) {
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const auto& packed = lu.matrixLU();
    double min_pivot = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double p = std::abs(packed(i, i));
      min_pivot = std::min(min_pivot, p);
      sum += std::log(p);
    }
    if (min_pivot > 1e-6) return sum;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(a, false);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigenvalue solver failed");
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = std::abs(1.0 + solver.eigenvalues()(i));
    if (d < 1e-8)
      throw SingularDeterminantError("eigenvalue of A within 1e-8 of -1");
    sum += std::log(d);
  }
  return sum;
}

namespace {

SpatialGrid operator_grid_for(const SpectralField& u, const AlphaOptions& o) {
  if (o.operator_points == 0) return default_operator_grid(u.grid());
  return SpatialGrid(o.operator_points, u.grid().length());
}

double first_trace_completion(const SpectralField& u, double k,
                              const Eigen::MatrixXcd& a, bool enabled) {
  if (!enabled) return 0.0;
  return alpha_quadratic(u, k) - a.trace().real();
}

}  // namespace

AlphaResult alpha_series(const SpectralField& u, double k,
                         const AlphaOptions& options) {
  const auto grid = operator_grid_for(u, options);
  const auto A = build_A(u, k, grid).matrix();
  AlphaResult r;
  r.method = AlphaMethod::series;
  r.hs_A = A.norm();
  if (r.hs_A >= options.refuse_hs)
    throw NonconvergentError("series refused: ||A||_HS = " +
                             std::to_string(r.hs_A) + " >= " +
                             std::to_string(options.refuse_hs));
  r.completion = first_trace_completion(u, k, A, options.complete_first_trace);
  Eigen::MatrixXcd power = A;
  double sum = 0.0;
  r.converged = false;
  for (int l = 1; l <= options.l_max; ++l) {
    const double sign = (l % 2 == 1) ? 1.0 : -1.0;
    double term = sign / l * power.trace().real();
    const double raw = term;
    if (l == 1) term += r.completion;
    r.terms.push_back(term);
    sum += term;
    r.l_used = l;
    if (std::abs(raw) < options.tol) {
      r.converged = true;
      break;
    }
    if (l < options.l_max) power = power * A;
  }
  // sum_{l > l_used} hs^l / l
  double tail = 0.0;
  double hp = std::pow(r.hs_A, r.l_used);
  for (int l = r.l_used + 1; l < r.l_used + 4000; ++l) {
    hp *= r.hs_A;
    const double t = hp / l;
    tail += t;
    if (t < 1e-300 || t < 1e-18 * tail) break;
  }
  r.tail_bound = tail;
  r.value = sum;
  r.series_value = sum;
  return r;
}

AlphaResult alpha_logdet(const SpectralField& u, double k,
                         const AlphaOptions& options) {
  const auto grid = operator_grid_for(u, options);
  const auto A = build_A(u, k, grid).matrix();
  AlphaResult r;
  r.method = options.method == AlphaMethod::eigen ? AlphaMethod::eigen
                                                   : AlphaMethod::logdet;
  r.hs_A = A.norm();
  r.completion = first_trace_completion(u, k, A, options.complete_first_trace);
  r.value = log_det_real(A, r.method == AlphaMethod::eigen) + r.completion;
  r.logdet_value = r.value;
  return r;
}

AlphaResult alpha(const SpectralField& u, double k, const AlphaOptions& options) {
  switch (options.method) {
    case AlphaMethod::logdet:
    case AlphaMethod::eigen:
      return alpha_logdet(u, k, options);
    case AlphaMethod::series:
      try {
        return alpha_series(u, k, options);
      } catch (const NonconvergentError&) {
        auto r = alpha_logdet(u, k, options);
        r.deferred = true;
        return r;
      }
    case AlphaMethod::both: {
      auto r = alpha_logdet(u, k, options);
      r.method = AlphaMethod::both;
      try {
        const auto s = alpha_series(u, k, options);
        r.series_value = s.value;
        r.terms = s.terms;
        r.l_used = s.l_used;
        r.tail_bound = s.tail_bound;
        r.converged = s.converged;
      } catch (const NonconvergentError&) {
        r.deferred = true;
      }
      return r;
    }
  }
  throw InvalidParameterError("unhandled alpha method");
}

// ---------------------------------------------------------------------------

namespace {

// S'_q = sum_m 1 / (sqrt(k^2 + xi_{m+q}^2) sqrt(k^2 + xi_m^2)).
double hs_lattice_weight(double k, double h, int q, int extra_modes) {
  const double zeta = h * q;
  auto g = [&](double xi) {
    return Complex(1.0 / std::sqrt((k * k + (xi + zeta) * (xi + zeta)) *
                                   (k * k + xi * xi)),
                   0.0);
  };
  const int M = std::abs(q) + extra_modes;
  return lattice_sum(g, h, M, Complex(zeta * zeta - k * k, 0.0)).real();
}

}  // namespace

HsBoundReport hs_bound(const SpectralField& u, double k, int extra_modes) {
  if (k == 0.0) throw InvalidParameterError("hs_bound needs k != 0");
  const auto& grid = u.grid();
  const double h = grid.dxi();
  HsBoundReport r;
  for (int i = 1; i < grid.size(); ++i) {
    const double w = std::norm(u.coefficients()[i]) * h;
    if (w == 0.0) continue;
    const int q = grid.mode(i);
    const double xi = grid.frequency(i);
    r.hs_squared += w * hs_lattice_weight(k, h, q, extra_modes) / grid.length();
    r.weighted_sum += w / (std::abs(k) + std::abs(xi));
    r.h_minus_half += w / japanese(xi);
  }
  return r;
}

double hs_bound_constant(const SpatialGrid& grid, double k, int max_mode,
                         int extra_modes) {
  const double h = grid.dxi();
  double c = 0.0;
  for (int q = -max_mode; q <= max_mode; ++q)
    c = std::max(c, (std::abs(k) + std::abs(h * q)) *
                        hs_lattice_weight(k, h, q, extra_modes) / grid.length());
  return c;
}

// ---------------------------------------------------------------------------

BoostFamily alpha_boost_family(const SpectralField& u, double k, int n_min,
                               int n_max, double p, const AlphaOptions& options) {
  if (n_min > n_max) throw InvalidParameterError("empty boost range");
  if (!(p >= 2.0)) throw InvalidParameterError("p must be >= 2");
  const std::size_t count = static_cast<std::size_t>(n_max - n_min + 1);
  BoostFamily family;
  family.entries.resize(count);
  parallel_for(count, [&](std::size_t i) {
    const int n = n_min + static_cast<int>(i);
    const auto un = modulate(u, -static_cast<double>(n));
    auto& e = family.entries[i];
    e.n = n;
    e.alpha = alpha(un, k, options);
    e.quadratic = alpha_quadratic(un, k);
    e.tail = tail_integral(u, n);
    e.weighted = weighted_cube_sum(u, n);
  });
  std::vector<double> a, q, rem, tail, w;
  for (const auto& e : family.entries) {
    a.push_back(e.alpha.value);
    q.push_back(e.quadratic);
    rem.push_back(e.remainder());
    tail.push_back(e.tail);
    w.push_back(e.weighted);
  }
  family.alpha_norm = lp_sequence_norm(a, p / 2.0);
  family.quadratic_norm = lp_sequence_norm(q, p / 2.0);
  family.remainder_norm = lp_sequence_norm(rem, p / 2.0);
  family.tail_norm = lp_sequence_norm(tail, p);
  family.weighted_norm = lp_sequence_norm(w, p / 2.0);
  return family;
}

}  // namespace hnls
