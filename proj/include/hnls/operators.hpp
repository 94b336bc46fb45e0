#pragma once

// Dense Fourier-basis realisations of multiplier and multiplication
// operators on the torus.
//
// An operator grid with N points carries the orthonormal basis
// e_m = L^{-1/2} e^{i xi_m x} for the symmetric modes |m| <= N/2 - 1; the
// unpaired Nyquist mode is left out so that m -> -m (complex conjugation)
// maps the basis onto itself. A matrix therefore has dimension N - 1, and row
// or column r corresponds to mode r - (N/2 - 1).
//
// Multiplication by u has the Toeplitz matrix T_{m,m'} = c_{m-m'} with
// c_q = (2 pi)^{1/2} / L * u^_q the Fourier-series coefficients of u. It is
// the Galerkin truncation of the multiplication operator, so products of
// such matrices are exact as long as intermediate spectra stay inside the
// mode window.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "hnls/spectral.hpp"

namespace hnls {

struct MultiplierSymbol {
  std::function<Complex(double)> values;
  std::string tag;

  Complex operator()(double xi) const { return values(xi); }
  // m(xi_m) on the operator modes of grid; SingularSymbolError if any value
  // is not finite.
  Eigen::VectorXcd sample(const SpatialGrid& grid) const;
};

MultiplierSymbol constant_symbol(Complex c);
// (i xi)^order
MultiplierSymbol derivative_symbol(int order);
// (k + sign * i xi)^power, i.e. (k +- d)^power.
MultiplierSymbol shifted_derivative_symbol(double k, int sign, int power);
// m^-(xi) = conj(m(-xi))
MultiplierSymbol reflected_conjugate(const MultiplierSymbol& m);
MultiplierSymbol product(const MultiplierSymbol& a, const MultiplierSymbol& b);

class FourierOperatorMatrix {
 public:
  FourierOperatorMatrix(const SpatialGrid& grid, Eigen::MatrixXcd matrix);
  static FourierOperatorMatrix identity(const SpatialGrid& grid);
  static FourierOperatorMatrix zero(const SpatialGrid& grid);

  const SpatialGrid& grid() const { return grid_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }
  int max_mode() const { return grid_.size() / 2 - 1; }
  int index(int mode) const { return mode + max_mode(); }
  Complex entry(int mode, int mode_prime) const {
    return matrix_(index(mode), index(mode_prime));
  }

 private:
  SpatialGrid grid_;
  Eigen::MatrixXcd matrix_;
};

int operator_dimension(const SpatialGrid& grid);

FourierOperatorMatrix multiplier_matrix(const MultiplierSymbol& m,
                                        const SpatialGrid& grid);

// Multiplication by u on operator_grid (same length as u's grid). Spectral
// content of u beyond operator_grid.size()/4 above 1e-8 of its peak raises
// AliasingError, since it would be clipped by the mode window.
FourierOperatorMatrix multiplication_matrix(const SpectralField& u,
                                            const SpatialGrid& operator_grid);
FourierOperatorMatrix multiplication_matrix(const SpectralField& u);

FourierOperatorMatrix compose(const FourierOperatorMatrix& a,
                              const FourierOperatorMatrix& b);
FourierOperatorMatrix compose(std::initializer_list<const FourierOperatorMatrix*> factors);
FourierOperatorMatrix operator*(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b);
FourierOperatorMatrix operator+(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b);
FourierOperatorMatrix operator-(const FourierOperatorMatrix& a,
                                const FourierOperatorMatrix& b);
FourierOperatorMatrix operator*(Complex s, const FourierOperatorMatrix& a);

// Conjugate transpose.
FourierOperatorMatrix adjoint(const FourierOperatorMatrix& a);
// Operator with complex-conjugated kernel: (conj T)_{m,m'} = conj(T_{-m,-m'}).
FourierOperatorMatrix conjugate(const FourierOperatorMatrix& a);

Complex trace(const FourierOperatorMatrix& a);
double hs_norm(const FourierOperatorMatrix& a);

// Orthonormal-basis coefficients of f restricted to the operator modes of
// grid (f must share the grid length).
Eigen::VectorXcd to_basis(const SpectralField& f, const SpatialGrid& grid);
SpectralField from_basis(const Eigen::VectorXcd& v, const SpatialGrid& grid);
SpectralField apply(const FourierOperatorMatrix& a, const SpectralField& f);

// ---------------------------------------------------------------------------
// Trace identities.

struct TraceIdentityReport {
  int factors = 0;
  double cyclicity = 0.0;         // |tr(T1 T2) - tr(T2 T1)|
  double shift_permutation = 0.0; // both forms of the shift identity
  double trailing_multiplier = 0.0;
  double leading_multiplication = 0.0;
  double trailing_multiplication = 0.0;  // composed as u_{n+1} u_1
  double trailing_multiplication_pointwise = 0.0;  // u_1 u_{n+1} as a field
  double pairing = 0.0;           // two-factor pairing vs convolution sum
  double product_bound_ratio = 0.0;  // |tr(prod)| / prod hs, must be <= 1
  double max_deviation() const;
};

// multipliers and fields must have equal length n + 1 (n >= 2); the last
// entries are the extra factors M_{n+1} and u_{n+1}.
TraceIdentityReport trace_identities_check(
    const std::vector<FourierOperatorMatrix>& multipliers,
    const std::vector<SpectralField>& fields);

// ---------------------------------------------------------------------------
// Multiplication-operator rewriting identities, left side applied pointwise,
// right side as composed matrices.

enum class MultIdentity {
  second_derivative,
  third_derivative,
  cubic_derivative,
  second_derivative_conj,
  third_derivative_conj,
  cubic_derivative_conj,
};

std::string_view to_string(MultIdentity id);
std::vector<MultIdentity> all_mult_identities();

struct IdentityResidual {
  double absolute = 0.0;  // ||lhs f - rhs f||_{L^2}
  double lhs_norm = 0.0;
  double relative() const {
    return lhs_norm > 0.0 ? absolute / lhs_norm : absolute;
  }
};

IdentityResidual mult_identity_residual(MultIdentity id, const SpectralField& u,
                                        double k, const SpectralField& f);

// ---------------------------------------------------------------------------

struct WeightConvolutionReport {
  double integral = 0.0;
  double exponent = 0.0;  // c = min(a, b, a + b - 1)
  double ratio = 0.0;     // integral * <alpha - beta>^c
};

// \int <x - alpha>^{-a} <x - beta>^{-b} dx by adaptive quadrature split at
// alpha and beta.
WeightConvolutionReport weight_convolution_check(double a, double b,
                                                 double alpha, double beta);

}  // namespace hnls
