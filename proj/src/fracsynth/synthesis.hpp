#pragma once

#include <span>

#include "fracsynth/common.hpp"
#include "fracsynth/rng.hpp"

namespace fracsynth {

struct SynthesisParams {
  double f1 = 0.25;  // Hz, fixed
  double f2 = 0.25;  // Hz, sampled in [0.25, 1]
  double phi1 = 0.0;
  double phi2 = 0.0;
  double blur_sigma = 0.3;  // px
  double unsharp_sigma = 0.1;
  double unsharp_alpha = 50.0;

  /// Draws f2, phi1, phi2, blur_sigma in that order.
  static SynthesisParams sample(Rng &rng);
};

/// Affine map of the whole video onto [0, 1]; a constant video maps to zeros.
ScalarVideo normalize01(const ScalarVideo &v);

/// re = sin(2 pi f1 v + phi1), im = sin(2 pi f2 v + phi2).
/// Throws OutOfRange if any pixel lies outside [0, 1].
ComplexVideo map_to_complex(const ScalarVideo &v, const SynthesisParams &p);

/// Normalized sampled Gaussian taps for offsets -r..r with r = ceil(3 sigma)
/// (at least 1); sigma = 0 yields the single tap {1}.
std::vector<double> gaussian_kernel(double sigma);

/// Separable Gaussian blur with half-sample symmetric (reflect) boundaries.
Image<double> gaussian_blur(const Image<double> &ch, double sigma);

/// ch + alpha * (ch - blur(ch, sigma))
Image<double> unsharp_mask(const Image<double> &ch, double sigma, double alpha);

/// normalize01 -> map_to_complex -> per-frame, per-channel blur -> unsharp.
ComplexVideo synthesize_complex_video(const ScalarVideo &v, const SynthesisParams &p);

}  // namespace fracsynth
