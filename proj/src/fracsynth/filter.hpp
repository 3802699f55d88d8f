#pragma once

#include <span>

#include "fracsynth/common.hpp"

namespace fracsynth {

/// Separable convolution with an odd-length symmetric kernel applied along
/// rows then columns, with half-sample symmetric boundary extension.
Image<double> convolve_separable(const Image<double> &in, std::span<const double> taps);

}  // namespace fracsynth
