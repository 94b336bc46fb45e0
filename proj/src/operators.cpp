#include "hnls/operators.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>

#include "hnls/errors.hpp"
#include "hnls/norms.hpp"

namespace hnls {

int operator_dimension(const SpatialGrid& grid) { return grid.size() - 1; }

Eigen::VectorXcd MultiplierSymbol::sample(const SpatialGrid& grid) const {
  const int dim = operator_dimension(grid);
  const int kmax = grid.size() / 2 - 1;
  Eigen::VectorXcd v(dim);
  for (int r = 0; r < dim; ++r) {
    const Complex z = values(grid.mode_frequency(r - kmax));
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw SingularSymbolError("symbol '" + tag + "' is not finite at xi = " +
                                std::to_string(grid.mode_frequency(r - kmax)));
    v(r) = z;
  }
  return v;
}

MultiplierSymbol constant_symbol(Complex c) {
  return {[c](double) { return c; }, "constant"};
}

MultiplierSymbol derivative_symbol(int order) {
  return {[order](double xi) {
            Complex z(1.0, 0.0);
            for (int r = 0; r < order; ++r) z *= Complex(0.0, xi);
            return z;
          },
          "derivative"};
}

MultiplierSymbol shifted_derivative_symbol(double k, int sign, int power) {
  return {[k, sign, power](double xi) {
            const Complex base(k, sign * xi);
            return std::pow(base, power);
          },
          "shifted_derivative"};
}

MultiplierSymbol reflected_conjugate(const MultiplierSymbol& m) {
  auto f = m.values;
  return {[f](double xi) { return std::conj(f(-xi)); }, m.tag + "^-"};
}

MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b) {
  auto fa = a.values;
  auto fb = b.values;
  return {[fa, fb](double xi) { return fa(xi) * fb(xi); },
          a.tag + "*" + b.tag};
}

FourierOperatorMatrix::FourierOperatorMatrix(const SpatialGrid& grid,
                                             Eigen::MatrixXcd matrix)
    : grid_(grid), matrix_(std::move(matrix)) {
  const int dim = operator_dimension(grid);
  if (matrix_.rows() != dim || matrix_.cols() != dim)
    throw SizeMismatchError("operator matrix size does not match grid");
}

FourierOperatorMatrix FourierOperatorMatrix::identity(const SpatialGrid& grid) {
  const int dim = operator_dimension(grid);
  return {grid, Eigen::MatrixXcd::Identity(dim, dim)};
}

FourierOperatorMatrix FourierOperatorMatrix::zero(const SpatialGrid& grid) {
  const int dim = operator_dimension(grid);
  return {grid, Eigen::MatrixXcd::Zero(dim, dim)};
}

FourierOperatorMatrix multiplier_matrix(const MultiplierSymbol& m,
                                        const SpatialGrid& grid) {
  return {grid, m.sample(grid).asDiagonal()};
}

FourierOperatorMatrix multiplication_matrix(const SpectralField& u,
                                            const SpatialGrid& operator_grid) {
  const auto& field_grid = u.grid();
  if (field_grid.length() != operator_grid.length())
    throw GridMismatchError("field and operator grids differ in length");
  const int nf = field_grid.size();
  double peak = 0.0;
  for (const auto& z : u.coefficients()) peak = std::max(peak, std::abs(z));
  const int band = operator_grid.size() / 4;
  for (int i = 0; i < nf; ++i) {
    const int m = field_grid.mode(i);
    if (std::abs(m) > band && std::abs(u.coefficients()[i]) > 1e-8 * peak)
      throw AliasingError("multiplier field has spectral content beyond N/4 of "
                          "the operator grid (mode " + std::to_string(m) + ")");
  }
  const int kmax = operator_grid.size() / 2 - 1;
  const int dim = operator_dimension(operator_grid);
  const double scale = std::sqrt(2.0 * kPi) / field_grid.length();
  // Fourier-series coefficients for every difference q in [-2 kmax, 2 kmax];
  // the field's own Nyquist mode has no conjugate partner and is dropped.
  std::vector<Complex> c(4 * kmax + 1);
  for (int q = -2 * kmax; q <= 2 * kmax; ++q)
    if (std::abs(q) < nf / 2) c[q + 2 * kmax] = scale * u.coefficient(q);
  Eigen::MatrixXcd t(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int s = 0; s < dim; ++s) t(r, s) = c[r - s + 2 * kmax];
  return {operator_grid, std::move(t)};
}

FourierOperatorMatrix multiplication_matrix(const SpectralField& u) {
  return multiplication_matrix(u, u.grid());
}

FourierOperatorMatrix compose(const FourierOperatorMatrix& a,
                              const FourierOperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.matrix() * b.matrix()};
}

FourierOperatorMatrix compose(
    std::initializer_list<const FourierOperatorMatrix*> factors) {
  if (factors.size() == 0) throw InvalidParameterError("empty product");
  auto it = factors.begin();
  Eigen::MatrixXcd m = (*it)->matrix();
  const SpatialGrid grid = (*it)->grid();
  for (++it; it != factors.end(); ++it) {
    require_same_grid(grid, (*it)->grid());
    m = m * (*it)->matrix();
  }
  return {grid, std::move(m)};
}

FourierOperatorMatrix operator*(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b) {
  return compose(a, b);
}

FourierOperatorMatrix operator+(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.matrix() + b.matrix()};
}

FourierOperatorMatrix operator-(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b) {
  require_same_grid(a.grid(), b.grid());
  return {a.grid(), a.matrix() - b.matrix()};
}

FourierOperatorMatrix operator*(Complex s, const FourierOperatorMatrix& a) {
  return {a.grid(), s * a.matrix()};
}

FourierOperatorMatrix adjoint(const FourierOperatorMatrix& a) {
  return {a.grid(), a.matrix().adjoint()};
}

FourierOperatorMatrix conjugate(const FourierOperatorMatrix& a) {
  // Mode m sits at row m + kmax; -m sits at dim - 1 - row.
  const int dim = a.dimension();
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int s = 0; s < dim; ++s)
      m(r, s) = std::conj(a.matrix()(dim - 1 - r, dim - 1 - s));
  return {a.grid(), std::move(m)};
}

Complex trace(const FourierOperatorMatrix& a) { return a.matrix().trace(); }

double hs_norm(const FourierOperatorMatrix& a) { return a.matrix().norm(); }

Eigen::VectorXcd to_basis(const SpectralField& f, const SpatialGrid& grid) {
  if (f.grid().length() != grid.length())
    throw GridMismatchError("basis grid differs in length");
  const int kmax = grid.size() / 2 - 1;
  const double scale = std::sqrt(2.0 * kPi / grid.length());
  Eigen::VectorXcd v(operator_dimension(grid));
  for (int r = 0; r < v.size(); ++r) {
    const int m = r - kmax;
    // The field's Nyquist mode lies outside every operator window.
    v(r) = std::abs(m) < f.grid().size() / 2 ? scale * f.coefficient(m)
                                             : Complex{};
  }
  return v;
}

SpectralField from_basis(const Eigen::VectorXcd& v, const SpatialGrid& grid) {
  if (v.size() != operator_dimension(grid))
    throw SizeMismatchError("basis vector size does not match grid");
  const int kmax = grid.size() / 2 - 1;
  const double scale = std::sqrt(grid.length() / (2.0 * kPi));
  ComplexVector c(grid.size());
  for (int r = 0; r < v.size(); ++r) c[grid.index(r - kmax)] = scale * v(r);
  return SpectralField::from_coefficients(grid, std::move(c));
}

SpectralField apply(const FourierOperatorMatrix& a, const SpectralField& f) {
  return from_basis(a.matrix() * to_basis(f, a.grid()), a.grid());
}

// ---------------------------------------------------------------------------

double TraceIdentityReport::max_deviation() const {
  return std::max({cyclicity, shift_permutation, trailing_multiplier,
                   leading_multiplication, trailing_multiplication, pairing});
}

namespace {

Eigen::MatrixXcd chain(const std::vector<const Eigen::MatrixXcd*>& f) {
  Eigen::MatrixXcd m = *f.front();
  for (std::size_t i = 1; i < f.size(); ++i) m = m * (*f[i]);
  return m;
}

}  // namespace

TraceIdentityReport trace_identities_check(
    const std::vector<FourierOperatorMatrix>& multipliers,
    const std::vector<SpectralField>& fields) {
  if (multipliers.size() != fields.size() || multipliers.size() < 3)
    throw InvalidParameterError("need n + 1 >= 3 multipliers and fields");
  const int n = static_cast<int>(multipliers.size()) - 1;
  if (n > 8) throw InvalidParameterError("at most 8 factors");
  const auto& grid = multipliers.front().grid();
  std::vector<Eigen::MatrixXcd> m, u;
  for (const auto& mm : multipliers) {
    require_same_grid(grid, mm.grid());
    m.push_back(mm.matrix());
  }
  for (const auto& f : fields) u.push_back(multiplication_matrix(f, grid).matrix());

  TraceIdentityReport r;
  r.factors = n;

  // Cyclicity on two composite operators.
  {
    const Eigen::MatrixXcd t1 = m[0] * u[0] * m[1];
    const Eigen::MatrixXcd t2 = u[1] * m[2] * u[2];
    r.cyclicity = std::abs((t1 * t2).trace() - (t2 * t1).trace());
  }

  // prod_{j} M_j u_j in the given order and under every cyclic shift.
  std::vector<const Eigen::MatrixXcd*> f;
  for (int j = 0; j < n; ++j) {
    f.push_back(&m[j]);
    f.push_back(&u[j]);
  }
  const Complex base = chain(f).trace();
  for (int shift = 1; shift < n; ++shift) {
    std::vector<const Eigen::MatrixXcd*> g;
    for (int j = 0; j < n; ++j) {
      const int s = (j + shift) % n;
      g.push_back(&m[s]);
      g.push_back(&u[s]);
    }
    r.shift_permutation = std::max(r.shift_permutation,
                                   std::abs(chain(g).trace() - base));
    // (prod_{j<n} u_s(j) M_s(j+1)) u_s(n) M_s(1)
    std::vector<const Eigen::MatrixXcd*> h;
    for (int j = 0; j < n - 1; ++j) {
      h.push_back(&u[(j + shift) % n]);
      h.push_back(&m[(j + 1 + shift) % n]);
    }
    h.push_back(&u[(n - 1 + shift) % n]);
    h.push_back(&m[shift % n]);
    r.shift_permutation = std::max(r.shift_permutation,
                                   std::abs(chain(h).trace() - base));
  }

  // (prod M_j u_j) M_{n+1}  vs  M_1 M_{n+1} u_1 prod_{j>=2} M_j u_j
  {
    auto lhs = f;
    lhs.push_back(&m[n]);
    std::vector<const Eigen::MatrixXcd*> rhs{&m[0], &m[n], &u[0]};
    for (int j = 1; j < n; ++j) {
      rhs.push_back(&m[j]);
      rhs.push_back(&u[j]);
    }
    r.trailing_multiplier = std::abs(chain(lhs).trace() - chain(rhs).trace());
  }

  // prod u_j M_j  vs  (prod_{j<n} M_j u_{j+1}) M_n u_1
  std::vector<const Eigen::MatrixXcd*> um;
  for (int j = 0; j < n; ++j) {
    um.push_back(&u[j]);
    um.push_back(&m[j]);
  }
  std::vector<const Eigen::MatrixXcd*> mu_shift;
  for (int j = 0; j < n - 1; ++j) {
    mu_shift.push_back(&m[j]);
    mu_shift.push_back(&u[j + 1]);
  }
  mu_shift.push_back(&m[n - 1]);
  {
    auto rhs = mu_shift;
    rhs.push_back(&u[0]);
    r.leading_multiplication = std::abs(chain(um).trace() - chain(rhs).trace());
  }

  // (prod u_j M_j) u_{n+1}  vs  (prod_{j<n} M_j u_{j+1}) M_n (u_1 u_{n+1})
  {
    auto lhs = um;
    lhs.push_back(&u[n]);
    const Complex l = chain(lhs).trace();
    // Truncated multiplication matrices do not commute; cyclicity gives the
    // exact matrix form with u_{n+1} composed before u_1.
    auto rhs = mu_shift;
    rhs.push_back(&u[n]);
    rhs.push_back(&u[0]);
    r.trailing_multiplication = std::abs(l - chain(rhs).trace());
    const Eigen::MatrixXcd prod =
        multiplication_matrix(pointwise_product(fields[0], fields[n]), grid)
            .matrix();
    auto rhs_pointwise = mu_shift;
    rhs_pointwise.push_back(&prod);
    r.trailing_multiplication_pointwise =
        std::abs(l - chain(rhs_pointwise).trace());
  }

  // tr(M1 u1 M2 u2) against the convolution form
  // sum_q c1_q c2_{-q} sum_{m'} m1(m' + q) m2(m').
  {
    const Complex direct = (m[0] * u[0] * m[1] * u[1]).trace();
    const int dim = static_cast<int>(m[0].rows());
    const int kmax = (dim - 1) / 2;
    Complex conv = 0.0;
    for (int q = -2 * kmax; q <= 2 * kmax; ++q) {
      // c1_q = u1(row, col) with row - col = q; read it from the matrix edge.
      const int r0 = std::max(0, q);
      const Complex c1 = u[0](r0, r0 - q);
      const Complex c2 = u[1](std::max(0, -q), std::max(0, -q) + q);
      if (c1 == Complex{} || c2 == Complex{}) continue;
      Complex s = 0.0;
      for (int mp = std::max(0, -q); mp < dim && mp + q < dim; ++mp)
        s += m[0](mp + q, mp + q) * m[1](mp, mp);
      conv += c1 * c2 * s;
    }
    r.pairing = std::abs(direct - conv);
  }

  // |tr(T_1 ... T_n)| <= prod ||T_j|| with T_j = M_j u_j.
  {
    double prod = 1.0;
    for (int j = 0; j < n; ++j) prod *= (m[j] * u[j]).norm();
    r.product_bound_ratio = prod > 0.0 ? std::abs(base) / prod : 0.0;
  }
  return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(MultIdentity id) {
  switch (id) {
    case MultIdentity::second_derivative: return "second_derivative";
    case MultIdentity::third_derivative: return "third_derivative";
    case MultIdentity::cubic_derivative: return "cubic_derivative";
    case MultIdentity::second_derivative_conj: return "second_derivative_conj";
    case MultIdentity::third_derivative_conj: return "third_derivative_conj";
    case MultIdentity::cubic_derivative_conj: return "cubic_derivative_conj";
  }
  return "?";
}

std::vector<MultIdentity> all_mult_identities() {
  return {MultIdentity::second_derivative,      MultIdentity::third_derivative,
          MultIdentity::cubic_derivative,       MultIdentity::second_derivative_conj,
          MultIdentity::third_derivative_conj,  MultIdentity::cubic_derivative_conj};
}

IdentityResidual mult_identity_residual(MultIdentity id, const SpectralField& u,
                                        double k, const SpectralField& f) {
  require_same_grid(u.grid(), f.grid());
  const auto& grid = u.grid();
  auto mult = [&](const SpectralField& w) { return multiplication_matrix(w, grid); };
  auto kd = [&](int sign, int power) {
    return multiplier_matrix(shifted_derivative_symbol(k, sign, power), grid);
  };
  const auto ub = u.conj();
  const auto ux = spectral_derivative(u, 1);
  const auto ubx = spectral_derivative(ub, 1);
  const auto abs2 = pointwise_product(u, ub);
  const Complex kc(k, 0.0);

  SpectralField lhs_field = SpectralField::zero(grid);
  FourierOperatorMatrix rhs = FourierOperatorMatrix::zero(grid);
  switch (id) {
    case MultIdentity::second_derivative: {
      // u'' = u(k-d)^2 + (k+d)^2 u - 4k^2 u + 2 (k-d) u (k+d)
      lhs_field = spectral_derivative(u, 2);
      const auto U = mult(u);
      rhs = U * kd(-1, 2) + kd(+1, 2) * U - (4.0 * k * k) * U +
            2.0 * (kd(-1, 1) * U * kd(+1, 1));
      break;
    }
    case MultIdentity::third_derivative: {
      // u''' = u(k-d)^3 + (k+d)^3 u - 8k^3 u + (k-d)(3u' + 6ku)(k+d)
      lhs_field = spectral_derivative(u, 3);
      const auto U = mult(u);
      const auto V = mult(ux.scaled(3.0) + u.scaled(6.0 * kc));
      rhs = U * kd(-1, 3) + kd(+1, 3) * U - (8.0 * k * k * k) * U +
            kd(-1, 1) * V * kd(+1, 1);
      break;
    }
    case MultIdentity::cubic_derivative: {
      // 2|u|^2 u' = -(|u|^2 u)(k+d) - (k-d)(|u|^2 u) - u^2 (conj(u)' - 2k conj(u))
      lhs_field = pointwise_product(abs2, ux).scaled(2.0);
      const auto W = mult(pointwise_product(abs2, u));
      const auto tail = pointwise_product(pointwise_product(u, u),
                                          ubx - ub.scaled(2.0 * kc));
      rhs = Complex(-1.0) * (W * kd(+1, 1)) - kd(-1, 1) * W - mult(tail);
      break;
    }
    case MultIdentity::second_derivative_conj: {
      // conj(u)'' = (k-d)^2 ub + ub (k+d)^2 - 4k^2 ub + 2 (k+d) ub (k-d)
      lhs_field = spectral_derivative(ub, 2);
      const auto U = mult(ub);
      rhs = kd(-1, 2) * U + U * kd(+1, 2) - (4.0 * k * k) * U +
            2.0 * (kd(+1, 1) * U * kd(-1, 1));
      break;
    }
    case MultIdentity::third_derivative_conj: {
      // conj(u)''' = -ub(k+d)^3 - (k-d)^3 ub + 8k^3 ub + (k+d)(3ub' - 6k ub)(k-d)
      lhs_field = spectral_derivative(ub, 3);
      const auto U = mult(ub);
      const auto V = mult(ubx.scaled(3.0) - ub.scaled(6.0 * kc));
      rhs = Complex(-1.0) * (U * kd(+1, 3)) - kd(-1, 3) * U +
            (8.0 * k * k * k) * U + kd(+1, 1) * V * kd(-1, 1);
      break;
    }
    case MultIdentity::cubic_derivative_conj: {
      // 2|u|^2 conj(u)' = (k+d)(|u|^2 ub) + (|u|^2 ub)(k-d) - ub^2 (u' + 2k u)
      lhs_field = pointwise_product(abs2, ubx).scaled(2.0);
      const auto W = mult(pointwise_product(abs2, ub));
      const auto tail = pointwise_product(pointwise_product(ub, ub),
                                          ux + u.scaled(2.0 * kc));
      rhs = kd(+1, 1) * W + W * kd(-1, 1) - mult(tail);
      break;
    }
  }
  const auto lhs = pointwise_product(lhs_field, f);
  const auto right = apply(rhs, f);
  IdentityResidual res;
  res.absolute = (lhs - right).l2_norm();
  res.lhs_norm = lhs.l2_norm();
  return res;
}

// ---------------------------------------------------------------------------

WeightConvolutionReport weight_convolution_check(double a, double b,
                                                 double alpha, double beta) {
  if (!(a > 0.0) || !(b > 0.0) || !(a + b > 1.0))
    throw InvalidParameterError("weight convolution needs a, b > 0 and a + b > 1");
  auto integrand = [=](double x) {
    return std::pow(japanese(x - alpha), -a) *
           std::pow(japanese(x - beta), -b);
  };
  const double lo = std::min(alpha, beta);
  const double hi = std::max(alpha, beta);
  boost::math::quadrature::exp_sinh<double> half_line;
  const double right = half_line.integrate(
      [&](double s) { return integrand(hi + s); }, 0.0,
      std::numeric_limits<double>::infinity());
  const double left = half_line.integrate(
      [&](double s) { return integrand(lo - s); }, 0.0,
      std::numeric_limits<double>::infinity());
  double middle = 0.0;
  if (hi > lo)
    middle = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        integrand, lo, hi, 15, 1e-13);
  WeightConvolutionReport r;
  r.integral = left + middle + right;
  r.exponent = std::min({a, b, a + b - 1.0});
  r.ratio = r.integral * std::pow(japanese(alpha - beta), r.exponent);
  return r;
}

}  // namespace hnls
