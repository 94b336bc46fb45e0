#pragma once

#include <span>

#include "hnls/spectral.hpp"

namespace hnls::detail {

// Unnormalised in-place FFTW transforms (forward uses e^{-2 pi i jk/N}).
// Plans are cached per size; execution is thread safe.
void fft_forward(std::span<Complex> data);
void fft_backward(std::span<Complex> data);

}  // namespace hnls::detail
