#pragma once

#include <cstddef>
#include <vector>

namespace fracsynth {

/// Sample position in cycles per field of view.
struct KPoint {
  double kx = 0.0;
  double ky = 0.0;
};

/// Per-frame radial spokes. Samples are stored spoke-major: spoke j of a
/// frame occupies [j * samples_per_spoke, (j + 1) * samples_per_spoke).
struct Trajectory {
  std::size_t matrix = 0;  // N
  std::size_t spokes_per_frame = 0;
  std::size_t samples_per_spoke = 0;
  std::vector<double> raw_angles;           // by global spoke index
  std::vector<std::vector<double>> angles;  // per frame, ascending
  std::vector<std::vector<KPoint>> frames;

  std::size_t n_frames() const { return frames.size(); }
  std::size_t frame_samples() const { return spokes_per_frame * samples_per_spoke; }
};

/// pi * 2 / (1 + sqrt 5), about 111.246 degrees.
double golden_angle();

/// Continuous golden-angle spoke ordering; spoke m = frame * spokes + j has
/// angle (m * golden) mod pi and is sorted within its frame. Readout samples
/// k_r = (r - R/2) N / R for r = 0..R-1.
Trajectory golden_angle_trajectory(std::size_t n_frames, std::size_t spokes_per_frame,
                                   std::size_t samples_per_spoke, std::size_t matrix);

}  // namespace fracsynth
