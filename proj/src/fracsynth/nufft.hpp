#pragma once

#include <array>
#include <span>
#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/trajectory.hpp"

namespace fracsynth {

/// Per-frame, per-sample density compensation weights.
struct DcfWeights {
  std::vector<std::vector<double>> w;
};

/// Gridding NUFFT for one image size and one trajectory, using a width-4
/// Kaiser-Bessel kernel on a 2x oversampled grid. Immutable after
/// construction; safe to share between threads.
///
/// The transform pair is
///   s(k) = sum_x img(x) exp(-2 pi i (kx x / W + ky y / H)) / sqrt(H W)
/// with x, y measured from the centre pixel (W/2, H/2), and its adjoint.
class NufftPlan {
 public:
  static constexpr int kWidth = 4;
  static constexpr double kOversampling = 2.0;
  static constexpr int kTaps = kWidth + 1;

  NufftPlan(std::size_t rows, std::size_t cols, const Trajectory &traj);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t grid_rows() const { return grid_rows_; }
  std::size_t grid_cols() const { return grid_cols_; }
  std::size_t n_frames() const { return frames_.size(); }
  std::size_t frame_samples(std::size_t frame) const { return frames_.at(frame).size(); }
  double beta() const { return beta_; }

  /// Kernel value at offset u (grid cells); zero for |u| > 2.
  double kernel(double u) const;

  std::vector<cplx> forward(std::span<const cplx> img, std::size_t frame) const;

  /// Adjoint of forward applied to (weights * samples); empty weights means 1.
  std::vector<cplx> adjoint(std::span<const cplx> samples, std::size_t frame,
                            std::span<const double> weights = {}) const;

 private:
  struct Taps {
    std::array<std::uint32_t, kTaps> row;
    std::array<std::uint32_t, kTaps> col;
    std::array<double, kTaps> wrow;
    std::array<double, kTaps> wcol;
  };

  void check_image(std::size_t n) const;
  void check_frame(std::size_t frame, std::size_t n) const;

  std::size_t rows_, cols_, grid_rows_, grid_cols_;
  double beta_;
  std::vector<double> deapod_row_, deapod_col_;
  std::vector<std::vector<Taps>> frames_;
};

/// Ramp weights |k| (centre sample N / (4R)), globally scaled so that the
/// adjoint of the forward transform of a centred unit impulse peaks at 1.
DcfWeights density_compensation(const Trajectory &traj);

/// Direct-summation reference for NufftPlan; images up to 64x64 only.
std::vector<cplx> dft_forward(std::span<const cplx> img, std::size_t rows, std::size_t cols,
                              std::span<const KPoint> traj);
std::vector<cplx> dft_adjoint(std::span<const cplx> samples, std::span<const KPoint> traj,
                              std::size_t rows, std::size_t cols,
                              std::span<const double> weights = {});

}  // namespace fracsynth
