#include "hnls/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hnls/parallel.hpp"

namespace hnls {
namespace {

constexpr Complex kI{0.0, 1.0};

std::string label(const char* fmt, double x, double y = 0.0) {
  char buf[96];
  std::snprintf(buf, sizeof buf, fmt, x, y);
  return buf;
}

// Coefficients of the cubic term on the grid of c, evaluated on `work`
// (a grid of the same length) and truncated back.
ComplexVector cubic_term(const SpatialGrid& grid, const ComplexVector& c,
                         const EquationParams& params, const SpatialGrid& work,
                         int keep) {
  const int n = grid.size();
  const int w = work.size();
  ComplexVector cu(w), cux(w);
  for (int i = 0; i < n; ++i) {
    const int m = grid.mode(i);
    if (m < -keep || m > keep) continue;
    cu[work.index(m)] = c[i];
    if (m != -n / 2) cux[work.index(m)] = kI * grid.mode_frequency(m) * c[i];
  }
  const auto su = dft_inverse(work, cu);
  const auto sux = dft_inverse(work, cux);
  ComplexVector f(w);
  for (int j = 0; j < w; ++j) {
    const double r = std::norm(su[j]);
    f[j] = r * (2.0 * kI * params.a * su[j] + 6.0 * params.b * sux[j]);
  }
  const auto cf = dft_forward(work, f);
  ComplexVector out(n);
  for (int i = 0; i < n; ++i) {
    const int m = grid.mode(i);
    if (m < -keep || m > keep) continue;
    out[i] = cf[work.index(m)];
  }
  return out;
}

ComplexVector nonlinear_coefficients(const SpatialGrid& grid,
                                     const ComplexVector& c,
                                     const EquationParams& params,
                                     Dealias dealias) {
  if (dealias == Dealias::pad_double)
    return cubic_term(grid, c, params, grid.refined(2), grid.size() / 2);
  return cubic_term(grid, c, params, grid, grid.size() / 3);
}

double max_abs_samples(const SpatialGrid& grid, const ComplexVector& c) {
  double m = 0.0;
  for (const auto& z : dft_inverse(grid, c)) {
    const double a = std::abs(z);
    if (!std::isfinite(a)) return INFINITY;
    m = std::max(m, a);
  }
  return m;
}

}  // namespace

void EquationParams::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b))
    throw InvalidParameterError("equation coefficients must be finite");
  if (b == 0.0) throw InvalidParameterError("b must be nonzero");
}

std::string_view to_string(Dealias d) {
  return d == Dealias::pad_double ? "pad_double" : "two_thirds";
}

Dealias parse_dealias(std::string_view name) {
  if (name == "pad_double" || name == "pad-double") return Dealias::pad_double;
  if (name == "two_thirds" || name == "two-thirds") return Dealias::two_thirds;
  throw InvalidParameterError("unknown dealiasing rule: " + std::string(name));
}

MultiplierSymbol linear_propagator(double t, const EquationParams& params) {
  const double a = params.a, b = params.b;
  return {[=](double xi) {
            return std::exp(kI * ((a * xi * xi + b * xi * xi * xi) * t));
          },
          "exp(i(a xi^2 + b xi^3) t)"};
}

SpectralField propagate_linear(const SpectralField& u, double t,
                               const EquationParams& params) {
  params.validate();
  const auto& grid = u.grid();
  const auto prop = linear_propagator(t, params);
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  for (int i = 0; i < grid.size(); ++i) c[i] *= prop(grid.frequency(i));
  return SpectralField::from_coefficients(grid, std::move(c));
}

SpectralField nonlinearity(const SpectralField& u, const EquationParams& params,
                           Dealias dealias) {
  params.validate();
  ComplexVector c(u.coefficients().begin(), u.coefficients().end());
  return SpectralField::from_coefficients(
      u.grid(), nonlinear_coefficients(u.grid(), c, params, dealias));
}

const MonitorSeries& TrajectoryTrace::monitor(std::string_view name) const {
  for (const auto& m : monitors)
    if (m.name == name) return m;
  throw InvalidParameterError("no monitor named " + std::string(name));
}

std::vector<MonitorSeries> evaluate_monitors(
    const std::vector<SpectralField>& snapshots, const MonitorSpec& spec) {
  std::vector<MonitorSeries> out;
  std::vector<std::function<double(const SpectralField&)>> eval;
  if (spec.mass) {
    out.push_back({"mass", {}});
    eval.push_back([](const SpectralField& u) { return u.mass(); });
  }
  for (double k : spec.alpha_k) {
    out.push_back({label("alpha[k=%g]", k), {}});
    auto opts = spec.alpha_options;
    eval.push_back([k, opts](const SpectralField& u) {
      return alpha(u, k, opts).value;
    });
  }
  for (const auto& mp : spec.modulation) {
    mp.validate();
    out.push_back({label("modulation[s=%g,p=%g]", mp.s, mp.p), {}});
    eval.push_back([mp](const SpectralField& u) { return modulation_norm(u, mp); });
  }
  if (spec.tail_integrals) {
    for (int n = spec.tail_n_min; n <= spec.tail_n_max; ++n) {
      out.push_back({label("tail[n=%g]", n), {}});
      eval.push_back([n](const SpectralField& u) { return tail_integral(u, n); });
    }
  }
  const std::size_t rows = snapshots.size(), cols = eval.size();
  std::vector<double> values(rows * cols);
  parallel_for(rows * cols, [&](std::size_t idx) {
    values[idx] = eval[idx % cols](snapshots[idx / cols]);
  });
  for (std::size_t c = 0; c < cols; ++c) {
    out[c].values.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) out[c].values[r] = values[r * cols + c];
  }
  return out;
}

TrajectoryTrace integrate(const SpectralField& u0, const EquationParams& params,
                          const SolverConfig& config) {
  params.validate();
  if (!(config.dt > 0) || !std::isfinite(config.dt))
    throw InvalidParameterError("dt must be positive");
  if (!(config.horizon >= 0) || !std::isfinite(config.horizon))
    throw InvalidParameterError("horizon must be non-negative");
  if (config.snapshot_stride < 0)
    throw InvalidParameterError("snapshot stride must be non-negative");

  const auto& grid = u0.grid();
  const int n = grid.size();
  TrajectoryTrace trace;
  trace.steps = config.horizon == 0
                    ? 0
                    : std::max(1, static_cast<int>(std::ceil(
                                      config.horizon / config.dt - 1e-9)));
  const double h = trace.steps ? config.horizon / trace.steps : config.dt;
  trace.dt = h;

  ComplexVector e(n), e2(n);
  for (int i = 0; i < n; ++i) {
    const double xi = grid.frequency(i);
    const double phi = params.a * xi * xi + params.b * xi * xi * xi;
    e[i] = std::exp(kI * (phi * h));
    e2[i] = std::exp(kI * (phi * h / 2));
  }

  ComplexVector v(u0.coefficients().begin(), u0.coefficients().end());
  trace.times.push_back(0.0);
  trace.snapshots.push_back(u0);

  auto fail = [&](int step) {
    trace.monitors = evaluate_monitors(trace.snapshots, config.monitors);
    throw BlowUpError(label("max |u| exceeded %g at t = %g",
                            config.blowup_threshold, step * h),
                      std::move(trace));
  };

  const auto F = [&](const ComplexVector& x) {
    auto r = nonlinear_coefficients(grid, x, params, config.dealias);
    for (auto& z : r) z *= h;
    return r;
  };

  ComplexVector tmp(n);
  const auto advance = [&] {
    const auto ka = F(v);
    for (int i = 0; i < n; ++i) tmp[i] = e2[i] * (v[i] + 0.5 * ka[i]);
    const auto kb = F(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = e2[i] * v[i] + 0.5 * kb[i];
    const auto kc = F(tmp);
    for (int i = 0; i < n; ++i) tmp[i] = e[i] * v[i] + e2[i] * kc[i];
    const auto kd = F(tmp);
    for (int i = 0; i < n; ++i)
      v[i] = e[i] * v[i] +
             (e[i] * ka[i] + 2.0 * e2[i] * (kb[i] + kc[i]) + kd[i]) / 6.0;
  };

  for (int step = 1; step <= trace.steps; ++step) {
    try {
      advance();
    } catch (const InvalidFieldError&) {
      fail(step);  // stage values went non-finite
    }
    if (!(max_abs_samples(grid, v) <= config.blowup_threshold)) fail(step);
    const bool keep = step == trace.steps ||
                      (config.snapshot_stride > 0 &&
                       step % config.snapshot_stride == 0);
    if (keep) {
      trace.times.push_back(step * h);
      trace.snapshots.push_back(SpectralField::from_coefficients(grid, v));
    }
  }
  trace.monitors = evaluate_monitors(trace.snapshots, config.monitors);
  return trace;
}

double default_time_step(const SpectralField& u, const EquationParams& params) {
  params.validate();
  const double amp = u.max_abs();
  const double rate =
      amp * amp *
      std::max(2.0 * std::abs(params.a), 6.0 * std::abs(params.b) * u.grid().nyquist());
  if (rate == 0.0) return 0.01;
  return std::min(0.01, 0.05 / rate);
}

SpectralField galilean_boost(const SpectralField& u, int n, double t,
                             const EquationParams& params) {
  const double a = params.a, b = params.b;
  const double shift = (2 * a * n + 3 * b * n * n) * t;
  const double phase = (a * n * n + 2 * b * double(n) * n * n) * t;
  auto moved = modulate(translate(u, shift), -double(n));
  return moved.scaled(std::exp(kI * phase));
}

EquationParams boosted_params(const EquationParams& params, int n) {
  return {params.a + 3 * params.b * n, params.b};
}

GaugeParams reduction_params(const EquationParams& params) {
  params.validate();
  const double a = params.a, b = params.b;
  return {-a * a / (3 * b), -a / (3 * b), 2 * a * a * a / (27 * b * b)};
}

GaugedCoefficients gauge_coefficients(double a, double b, double c1, double c2,
                                      const GaugeParams& g) {
  GaugedCoefficients r;
  r.second = a + 3 * b * g.d2;
  r.zeroth = g.d3 - b * g.d2 * g.d2 * g.d2 - a * g.d2 * g.d2;
  r.first = g.d1 - 3 * b * g.d2 * g.d2 - 2 * a * g.d2;
  r.cubic = c1 + c2 * g.d2;
  r.derivative_cubic = c2;
  return r;
}

EquationParams reduced_params(const EquationParams& params) {
  params.validate();
  return {0.0, params.b};
}

GaugeParams snap_gauge(const SpatialGrid& grid, GaugeParams g, bool* snapped) {
  g.d2 = snap_to_grid_frequency(grid, g.d2, snapped);
  return g;
}

SpectralField gauge_to_v(const SpectralField& u, const GaugeParams& g, double t) {
  auto v = modulate(translate(u, g.d1 * t), -g.d2);
  return v.scaled(std::exp(-kI * ((g.d3 - g.d2 * g.d1) * t)));
}

SpectralField gauge_to_u(const SpectralField& v, const GaugeParams& g, double t) {
  auto u = modulate(translate(v, -g.d1 * t), g.d2);
  return u.scaled(std::exp(kI * (g.d3 * t)));
}

SpectralField scaling_transform(const SpectralField& u, int lambda,
                                int target_points) {
  if (lambda < 1) throw InvalidParameterError("lambda must be >= 1");
  const auto& grid = u.grid();
  SpatialGrid scaled(grid.size(), grid.length() * lambda);
  ComplexVector s(u.samples().begin(), u.samples().end());
  for (auto& z : s) z /= double(lambda);
  auto out = SpectralField::from_samples(scaled, std::move(s));
  if (target_points == 0 || target_points == grid.size()) return out;
  if (target_points < grid.size())
    throw InvalidParameterError("scaling target must not shrink the grid");
  return out.resampled(target_points);
}

EquationParams scaled_params(const EquationParams& params, int lambda) {
  if (lambda < 1) throw InvalidParameterError("lambda must be >= 1");
  return {params.a / lambda, params.b};
}

}  // namespace hnls
