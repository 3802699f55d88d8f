#pragma once

#include <cstdint>
#include <vector>

#include "fracsynth/common.hpp"

namespace fracsynth {

struct SsimParams {
  int window = 11;
  double window_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double data_range = 1.0;
};

/// Mean SSIM over all frames; each frame uses Gaussian-windowed local
/// statistics with reflect padding.
double ssim(const ScalarVideo &a, const ScalarVideo &b, const SsimParams &p = {});
double ssim_frame(const Image<double> &a, const Image<double> &b, const SsimParams &p = {});

struct RoiSpec {
  Image<std::uint8_t> region_a;  // blood-pool analogue
  Image<std::uint8_t> region_b;  // myocardium analogue
  Image<std::uint8_t> noise;     // lung analogue

  void validate(std::size_t rows, std::size_t cols) const;
};

/// (mean_A - mean_B) / population std of the noise region, pooled over frames.
double cnr(const ScalarVideo &video, const RoiSpec &roi);

struct EdgeProbe {
  double x0 = 0.0, y0 = 0.0;
  double x1 = 0.0, y1 = 0.0;
  int samples = 32;
  double pixel_spacing = 1.0;  // length units per pixel

  void validate() const;
  double length() const;
};

/// I(d) = offset + amplitude * logistic((d - centre) / width), d in pixels.
struct EdgeFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double centre = 0.0;
  double width = 0.0;
  double r_squared = 0.0;
  double sharpness = 0.0;  // 1 / (4 width spacing)
};

/// Bilinearly interpolated intensity profile along the probe.
std::vector<double> sample_profile(const Image<double> &frame, const EdgeProbe &probe);

/// Least-squares logistic edge fit. Throws FitFailure for R^2 < 0.5 or an
/// amplitude below 1% of the profile range.
EdgeFit fit_edge(const Image<double> &frame, const EdgeProbe &probe);

inline double edge_sharpness(const Image<double> &frame, const EdgeProbe &probe) {
  return fit_edge(frame, probe).sharpness;
}

struct TemporalEs {
  double std = 0.0;
  double mean = 0.0;
  std::vector<double> per_frame;  // successful fits only
  std::size_t excluded_frames = 0;
};

/// Population std of per-frame edge sharpness; frames whose fit fails are
/// skipped. Throws TooFewFits when fewer than two frames fit.
TemporalEs temporal_std_es(const ScalarVideo &video, const EdgeProbe &probe);

Image<double> video_frame(const ScalarVideo &v, std::size_t t);

}  // namespace fracsynth
