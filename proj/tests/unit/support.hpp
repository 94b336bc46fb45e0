#pragma once

#include <cmath>
#include <cstdint>

#include "hnls/spectral.hpp"

namespace test {

inline hnls::SpectralField band_field(const hnls::SpatialGrid& grid,
                                      std::uint64_t seed, double band,
                                      double amplitude = 1.0) {
  hnls::FieldRecipe r;
  r.kind = hnls::FieldKind::random_bandlimited;
  r.amplitude = amplitude;
  r.band_low = -band;
  r.band_high = band;
  r.seed = seed;
  return hnls::make_field(grid, r);
}

inline hnls::SpectralField gaussian(const hnls::SpatialGrid& grid,
                                    double amplitude, double width) {
  hnls::FieldRecipe r;
  r.amplitude = amplitude;
  r.width = width;
  return hnls::make_field(grid, r);
}

}  // namespace test
