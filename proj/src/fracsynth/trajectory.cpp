#include "fracsynth/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracsynth/common.hpp"

namespace fracsynth {

double golden_angle() { return std::numbers::pi * 2.0 / (1.0 + std::sqrt(5.0)); }

Trajectory golden_angle_trajectory(std::size_t n_frames, std::size_t spokes_per_frame,
                                   std::size_t samples_per_spoke, std::size_t matrix) {
  if (spokes_per_frame < 1) fail(ErrorCode::InvalidArgument, "need at least one spoke per frame");
  if (samples_per_spoke < 2 || samples_per_spoke % 2 != 0)
    fail(ErrorCode::InvalidArgument, "samples per spoke must be even and >= 2");
  if (n_frames < 1 || matrix < 1) fail(ErrorCode::InvalidArgument, "empty trajectory");

  const double ratio = 2.0 / (1.0 + std::sqrt(5.0));
  Trajectory traj;
  traj.matrix = matrix;
  traj.spokes_per_frame = spokes_per_frame;
  traj.samples_per_spoke = samples_per_spoke;
  traj.raw_angles.resize(n_frames * spokes_per_frame);
  for (std::size_t m = 0; m < traj.raw_angles.size(); ++m) {
    const double turns = static_cast<double>(m) * ratio;
    traj.raw_angles[m] = std::numbers::pi * (turns - std::floor(turns));
  }

  const double dk = static_cast<double>(matrix) / static_cast<double>(samples_per_spoke);
  const auto half = static_cast<double>(samples_per_spoke / 2);
  for (std::size_t f = 0; f < n_frames; ++f) {
    std::vector<double> angles(traj.raw_angles.begin() + f * spokes_per_frame,
                               traj.raw_angles.begin() + (f + 1) * spokes_per_frame);
    std::sort(angles.begin(), angles.end());
    std::vector<KPoint> pts;
    pts.reserve(spokes_per_frame * samples_per_spoke);
    for (double theta : angles) {
      const double c = std::cos(theta), s = std::sin(theta);
      for (std::size_t r = 0; r < samples_per_spoke; ++r) {
        const double k = (static_cast<double>(r) - half) * dk;
        pts.push_back({k * c, k * s});
      }
    }
    traj.angles.push_back(std::move(angles));
    traj.frames.push_back(std::move(pts));
  }
  return traj;
}

}  // namespace fracsynth
