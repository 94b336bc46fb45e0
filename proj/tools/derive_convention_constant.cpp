// Derives the constant c in
//
//   Re tr{(k - d)^{-1} u (k + d)^{-1} conj(u)} = 2 k c \int |u^|^2 / (4k^2 + xi^2)
//
// by computing the left side as a matrix trace (plus the explicit lattice
// sum over the modes outside the matrix window) for a reference Gaussian on a
// long box, where the periodic factor coth(kL/2) is 1 to double precision.
// The printed value is what kQuadraticConstant holds.

#include <cmath>
#include <cstdio>

#include "hnls/determinant.hpp"

int main() {
  using namespace hnls;
  const SpatialGrid grid(512, 80 * kPi);
  FieldRecipe recipe;
  recipe.kind = FieldKind::gaussian;
  recipe.amplitude = 0.2;
  recipe.width = 3.0;
  const auto u = make_field(grid, recipe);
  std::printf("k,trace,weighted_integral,c\n");
  for (double k : {0.5, 1.0, 2.0, 4.0}) {
    const double trace = first_trace_direct(u, k, grid);
    double integral = 0.0;
    for (int i = 0; i < grid.size(); ++i) {
      if (grid.mode(i) == -grid.size() / 2) continue;
      const double xi = grid.frequency(i);
      integral += grid.dxi() * std::norm(u.coefficients()[i]) / (4 * k * k + xi * xi);
    }
    std::printf("%g,%.17g,%.17g,%.15f\n", k, trace, integral,
                trace / (2 * k * integral));
  }
  return 0;
}
