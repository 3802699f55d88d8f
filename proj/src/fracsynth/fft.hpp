#pragma once

#include <span>

#include "fracsynth/common.hpp"

namespace fracsynth {

enum class FftDirection { Forward, Inverse };

/// Centered 2D DFT in place: the phase origin is pixel (rows/2, cols/2) in
/// both domains. Unscaled, so Forward then Inverse multiplies by rows*cols.
void fft2c_unscaled(std::span<cplx> data, std::size_t rows, std::size_t cols,
                    FftDirection dir);

/// Orthonormal centered FFT (scaled by 1/sqrt(rows*cols)).
void fft2c(std::span<cplx> data, std::size_t rows, std::size_t cols);
void ifft2c(std::span<cplx> data, std::size_t rows, std::size_t cols);

Image<cplx> fft2c(const Image<cplx> &img);
Image<cplx> ifft2c(const Image<cplx> &img);

}  // namespace fracsynth
