#include "fracsynth/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace fracsynth {

namespace {

// FFTW planning is not thread safe; execution with new arrays is. Plans are
// made with FFTW_ESTIMATE | FFTW_UNALIGNED so the chosen algorithm, and hence
// the output bits, never depend on timing or buffer alignment.
class PlanCache {
 public:
  fftw_plan get(std::size_t rows, std::size_t cols, FftDirection dir) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_tuple(rows, cols, dir == FftDirection::Forward);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<fftw_complex> scratch(rows * cols);
    fftw_plan plan = fftw_plan_dft_2d(
        static_cast<int>(rows), static_cast<int>(cols), scratch.data(), scratch.data(),
        dir == FftDirection::Forward ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto &[key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<std::size_t, std::size_t, bool>, fftw_plan> plans_;
};

PlanCache &plan_cache() {
  static PlanCache cache;
  return cache;
}

// Cyclic shift so that index `shift` moves to index 0 along both axes.
void roll(std::span<cplx> data, std::size_t rows, std::size_t cols,
          std::size_t shift_r, std::size_t shift_c) {
  std::vector<cplx> tmp(data.begin(), data.end());
  for (std::size_t y = 0; y < rows; ++y) {
    const std::size_t sy = (y + shift_r) % rows;
    for (std::size_t x = 0; x < cols; ++x)
      data[y * cols + x] = tmp[sy * cols + (x + shift_c) % cols];
  }
}

}  // namespace

void fft2c_unscaled(std::span<cplx> data, std::size_t rows, std::size_t cols,
                    FftDirection dir) {
  if (data.size() != rows * cols)
    fail(ErrorCode::ShapeMismatch, "fft2c: buffer size does not match rows*cols");
  // ifftshift: center pixel to index 0.
  roll(data, rows, cols, rows / 2, cols / 2);
  auto *buf = reinterpret_cast<fftw_complex *>(data.data());
  fftw_execute_dft(plan_cache().get(rows, cols, dir), buf, buf);
  // fftshift: index 0 back to the center.
  roll(data, rows, cols, rows - rows / 2, cols - cols / 2);
}

void fft2c(std::span<cplx> data, std::size_t rows, std::size_t cols) {
  fft2c_unscaled(data, rows, cols, FftDirection::Forward);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows * cols));
  for (auto &v : data) v *= scale;
}

void ifft2c(std::span<cplx> data, std::size_t rows, std::size_t cols) {
  fft2c_unscaled(data, rows, cols, FftDirection::Inverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(rows * cols));
  for (auto &v : data) v *= scale;
}

Image<cplx> fft2c(const Image<cplx> &img) {
  Image<cplx> out = img;
  fft2c(out.data, out.rows, out.cols);
  return out;
}

Image<cplx> ifft2c(const Image<cplx> &img) {
  Image<cplx> out = img;
  ifft2c(out.data, out.rows, out.cols);
  return out;
}

}  // namespace fracsynth
