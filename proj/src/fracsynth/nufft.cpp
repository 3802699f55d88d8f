#include "fracsynth/nufft.hpp"

#include <cmath>
#include <numbers>

#include "fracsynth/fft.hpp"

namespace fracsynth {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kOracleLimit = 64;

// Fourier transform of the kernel at centred pixel coordinate x on a grid of
// size g, by composite Simpson quadrature over the kernel support.
std::vector<double> deapodization(const NufftPlan &plan, std::size_t n, std::size_t g) {
  constexpr int intervals = 4096;
  const double half = 0.5 * NufftPlan::kWidth;
  const double h = 2.0 * half / intervals;
  std::vector<double> kvals(intervals + 1);
  for (int i = 0; i <= intervals; ++i) kvals[i] = plan.kernel(-half + i * h);

  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = static_cast<double>(i) - static_cast<double>(n / 2);
    double acc = 0.0;
    for (int j = 0; j <= intervals; ++j) {
      const double u = -half + j * h;
      const double wt = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
      acc += wt * kvals[j] * std::cos(2.0 * kPi * u * x / static_cast<double>(g));
    }
    out[i] = acc * h / 3.0;
  }
  return out;
}

}  // namespace

NufftPlan::NufftPlan(std::size_t rows, std::size_t cols, const Trajectory &traj)
    : rows_(rows),
      cols_(cols),
      grid_rows_(static_cast<std::size_t>(kOversampling * rows)),
      grid_cols_(static_cast<std::size_t>(kOversampling * cols)) {
  if (rows == 0 || cols == 0) fail(ErrorCode::PlanMismatch, "empty image size");
  const double a = kOversampling, w = kWidth;
  beta_ = kPi * std::sqrt(w * w / (a * a) * (a - 0.5) * (a - 0.5) - 0.8);
  deapod_row_ = deapodization(*this, rows_, grid_rows_);
  deapod_col_ = deapodization(*this, cols_, grid_cols_);

  auto taps_for = [this](double u, std::size_t g, auto &idx, auto &wt) {
    const auto m0 = static_cast<long>(std::ceil(u - 0.5 * kWidth));
    const auto gl = static_cast<long>(g);
    for (int j = 0; j < kTaps; ++j) {
      const long m = m0 + j;
      wt[j] = kernel(u - static_cast<double>(m));
      // Centred grid frequency m lives at array index m + g/2, periodically.
      idx[j] = static_cast<std::uint32_t>(((m + gl / 2) % gl + gl) % gl);
    }
  };

  const double sr = static_cast<double>(grid_rows_) / static_cast<double>(rows_);
  const double sc = static_cast<double>(grid_cols_) / static_cast<double>(cols_);
  frames_.reserve(traj.frames.size());
  for (const auto &frame : traj.frames) {
    std::vector<Taps> taps(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
      taps_for(frame[i].ky * sr, grid_rows_, taps[i].row, taps[i].wrow);
      taps_for(frame[i].kx * sc, grid_cols_, taps[i].col, taps[i].wcol);
    }
    frames_.push_back(std::move(taps));
  }
}

double NufftPlan::kernel(double u) const {
  const double r = 2.0 * u / kWidth;
  if (std::abs(r) > 1.0) return 0.0;
  return std::cyl_bessel_i(0.0, beta_ * std::sqrt(1.0 - r * r));
}

void NufftPlan::check_image(std::size_t n) const {
  if (n != rows_ * cols_) fail(ErrorCode::PlanMismatch, "image size does not match the NUFFT plan");
}

void NufftPlan::check_frame(std::size_t frame, std::size_t n) const {
  if (frame >= frames_.size()) fail(ErrorCode::PlanMismatch, "frame index outside the trajectory");
  if (n != frames_[frame].size())
    fail(ErrorCode::PlanMismatch, "sample count does not match the trajectory frame");
}

std::vector<cplx> NufftPlan::forward(std::span<const cplx> img, std::size_t frame) const {
  check_image(img.size());
  if (frame >= frames_.size()) fail(ErrorCode::PlanMismatch, "frame index outside the trajectory");
  const std::size_t gr = grid_rows_, gc = grid_cols_;
  std::vector<cplx> grid(gr * gc);
  const std::size_t r0 = gr / 2 - rows_ / 2, c0 = gc / 2 - cols_ / 2;
  for (std::size_t y = 0; y < rows_; ++y)
    for (std::size_t x = 0; x < cols_; ++x)
      grid[(y + r0) * gc + x + c0] = img[y * cols_ + x] / (deapod_row_[y] * deapod_col_[x]);
  fft2c_unscaled(grid, gr, gc, FftDirection::Forward);

  const double scale = 1.0 / std::sqrt(static_cast<double>(rows_ * cols_));
  const auto &taps = frames_[frame];
  std::vector<cplx> out(taps.size());
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const Taps &t = taps[i];
    cplx acc = 0.0;
    for (int a = 0; a < kTaps; ++a) {
      if (t.wrow[a] == 0.0) continue;
      const cplx *line = grid.data() + t.row[a] * gc;
      cplx racc = 0.0;
      for (int b = 0; b < kTaps; ++b) racc += t.wcol[b] * line[t.col[b]];
      acc += t.wrow[a] * racc;
    }
    out[i] = acc * scale;
  }
  return out;
}

std::vector<cplx> NufftPlan::adjoint(std::span<const cplx> samples, std::size_t frame,
                                     std::span<const double> weights) const {
  check_frame(frame, samples.size());
  if (!weights.empty() && weights.size() != samples.size())
    fail(ErrorCode::PlanMismatch, "weight count does not match the sample count");
  const std::size_t gr = grid_rows_, gc = grid_cols_;
  std::vector<cplx> grid(gr * gc);
  const auto &taps = frames_[frame];
  for (std::size_t i = 0; i < taps.size(); ++i) {
    const Taps &t = taps[i];
    const cplx v = weights.empty() ? samples[i] : samples[i] * weights[i];
    for (int a = 0; a < kTaps; ++a) {
      if (t.wrow[a] == 0.0) continue;
      cplx *line = grid.data() + t.row[a] * gc;
      const cplx va = v * t.wrow[a];
      for (int b = 0; b < kTaps; ++b) line[t.col[b]] += va * t.wcol[b];
    }
  }
  fft2c_unscaled(grid, gr, gc, FftDirection::Inverse);

  const double scale = 1.0 / std::sqrt(static_cast<double>(rows_ * cols_));
  const std::size_t r0 = gr / 2 - rows_ / 2, c0 = gc / 2 - cols_ / 2;
  std::vector<cplx> out(rows_ * cols_);
  for (std::size_t y = 0; y < rows_; ++y)
    for (std::size_t x = 0; x < cols_; ++x)
      out[y * cols_ + x] =
          grid[(y + r0) * gc + x + c0] * (scale / (deapod_row_[y] * deapod_col_[x]));
  return out;
}

DcfWeights density_compensation(const Trajectory &traj) {
  if (traj.frames.empty()) fail(ErrorCode::InvalidArgument, "empty trajectory");
  const double centre = static_cast<double>(traj.matrix) /
                        (4.0 * static_cast<double>(traj.samples_per_spoke));
  DcfWeights dcf;
  for (const auto &frame : traj.frames) {
    std::vector<double> w(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
      const double r = std::hypot(frame[i].kx, frame[i].ky);
      w[i] = r > 0.0 ? r : centre;
    }
    dcf.w.push_back(std::move(w));
  }

  // Calibrate on frame 0: the ramp depends only on |k|, so every frame has
  // the same impulse response peak up to gridding error.
  const std::size_t n = traj.matrix;
  NufftPlan plan(n, n, Trajectory{traj.matrix, traj.spokes_per_frame, traj.samples_per_spoke,
                                  {}, {traj.angles.front()}, {traj.frames.front()}});
  std::vector<cplx> delta(n * n);
  delta[(n / 2) * n + n / 2] = 1.0;
  const auto img = plan.adjoint(plan.forward(delta, 0), 0, dcf.w.front());
  const double peak = img[(n / 2) * n + n / 2].real();
  if (!(peak > 0.0)) fail(ErrorCode::DegenerateInput, "density compensation calibration failed");
  for (auto &w : dcf.w)
    for (auto &v : w) v /= peak;
  return dcf;
}

std::vector<cplx> dft_forward(std::span<const cplx> img, std::size_t rows, std::size_t cols,
                              std::span<const KPoint> traj) {
  if (rows > kOracleLimit || cols > kOracleLimit)
    fail(ErrorCode::SizeGuard, "direct DFT oracle is limited to 64x64 images");
  if (img.size() != rows * cols) fail(ErrorCode::ShapeMismatch, "image size mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows * cols));
  std::vector<cplx> out(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    cplx acc = 0.0;
    for (std::size_t y = 0; y < rows; ++y) {
      const double yc = static_cast<double>(y) - static_cast<double>(rows / 2);
      for (std::size_t x = 0; x < cols; ++x) {
        const double xc = static_cast<double>(x) - static_cast<double>(cols / 2);
        const double phase = -2.0 * kPi * (traj[i].kx * xc / static_cast<double>(cols) +
                                           traj[i].ky * yc / static_cast<double>(rows));
        acc += img[y * cols + x] * std::polar(1.0, phase);
      }
    }
    out[i] = acc * scale;
  }
  return out;
}

std::vector<cplx> dft_adjoint(std::span<const cplx> samples, std::span<const KPoint> traj,
                              std::size_t rows, std::size_t cols,
                              std::span<const double> weights) {
  if (rows > kOracleLimit || cols > kOracleLimit)
    fail(ErrorCode::SizeGuard, "direct DFT oracle is limited to 64x64 images");
  if (samples.size() != traj.size()) fail(ErrorCode::ShapeMismatch, "sample count mismatch");
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows * cols));
  std::vector<cplx> out(rows * cols);
  for (std::size_t y = 0; y < rows; ++y) {
    const double yc = static_cast<double>(y) - static_cast<double>(rows / 2);
    for (std::size_t x = 0; x < cols; ++x) {
      const double xc = static_cast<double>(x) - static_cast<double>(cols / 2);
      cplx acc = 0.0;
      for (std::size_t i = 0; i < traj.size(); ++i) {
        const double phase = 2.0 * kPi * (traj[i].kx * xc / static_cast<double>(cols) +
                                          traj[i].ky * yc / static_cast<double>(rows));
        const double w = weights.empty() ? 1.0 : weights[i];
        acc += w * samples[i] * std::polar(1.0, phase);
      }
      out[y * cols + x] = acc * scale;
    }
  }
  return out;
}

}  // namespace fracsynth
