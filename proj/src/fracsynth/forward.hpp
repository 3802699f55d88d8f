#pragma once

#include <array>
#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/rng.hpp"

namespace fracsynth {

struct EllipseParams {
  double semi_x = 0.8;    // fraction of half-width
  double semi_y = 0.8;    // fraction of half-height
  double rotation = 0.0;  // rad
  double offset_x = 0.0;  // fraction of width
  double offset_y = 0.0;  // fraction of height
};

struct BodyMask {
  EllipseParams params;
  Image<double> data;  // 0 or 1

  static BodyMask build(std::size_t h, std::size_t w, const EllipseParams &p);
};

BodyMask make_body_mask(std::size_t h, std::size_t w, Rng &rng);

struct PhaseMap {
  std::array<double, 36> control{};  // 6x6, row-major
  Image<double> data;                // rad

  /// Bilinear upsampling with control points spread uniformly from corner to corner.
  static PhaseMap build(std::size_t h, std::size_t w, const std::array<double, 36> &control);
};

PhaseMap make_background_phase(std::size_t h, std::size_t w, Rng &rng);

struct CoilParams {
  double center_x = 0.0;  // px, may lie outside the image
  double center_y = 0.0;
  double sigma_x = 1.0;  // px
  double sigma_y = 1.0;
  double phase = 0.0;
  double intensity = 1.0;

  cplx value(double x, double y) const;
};

struct CoilSet {
  std::vector<CoilParams> params;
  std::vector<Image<cplx>> maps;

  std::size_t size() const { return maps.size(); }

  static CoilSet build(std::size_t h, std::size_t w, std::vector<CoilParams> params);
};

/// Gaussian surface coils centred on a band around the image border.
CoilSet make_coil_maps(std::size_t h, std::size_t w, std::size_t ncoils, Rng &rng);

/// out[c,t] = coil_c * (v_t * mask * exp(i phase)) + complex white noise with
/// standard deviation noise_sigma per real component. Each (coil, frame) draws
/// from its own substream seeded from one draw of `rng`.
MultiCoilVideo apply_forward_model(const ComplexVideo &v, const BodyMask &mask,
                                   const PhaseMap &phase, const CoilSet &coils,
                                   double noise_sigma, Rng &rng);

/// Orthonormal centered 2D FFT of every (coil, frame).
CartesianKspace to_cartesian_kspace(const MultiCoilVideo &mc);
MultiCoilVideo to_image_space(const CartesianKspace &k);

}  // namespace fracsynth
