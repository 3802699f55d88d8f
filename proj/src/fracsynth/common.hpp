#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsynth {

using cplx = std::complex<double>;

enum class ErrorCode {
  InvalidArgument,
  EmptyCatalogue,
  OutOfRange,
  ShapeMismatch,
  PlanMismatch,
  SizeGuard,
  DegenerateInput,
  SingleFrame,
  NonFiniteObjective,
  ZeroNoise,
  FitFailure,
  TooFewFits,
  BadMagic,
  TruncatedPayload,
  UnsupportedDtype,
  Io,
};

const char *to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what) {
  throw Error(code, what);
}

/// Single 2D image, row-major.
template <class T>
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Image() = default;
  Image(std::size_t r, std::size_t c, T fill = T{})
      : rows(r), cols(c), data(r * c, fill) {}

  T &operator()(std::size_t y, std::size_t x) { return data[y * cols + x]; }
  const T &operator()(std::size_t y, std::size_t x) const {
    return data[y * cols + x];
  }
  std::size_t size() const { return data.size(); }
};

/// T x H x W video, frame-major then row then column.
template <class T>
struct Video {
  std::size_t frames = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Video() = default;
  Video(std::size_t t, std::size_t r, std::size_t c, T fill = T{})
      : frames(t), rows(r), cols(c), data(t * r * c, fill) {}

  T &operator()(std::size_t t, std::size_t y, std::size_t x) {
    return data[(t * rows + y) * cols + x];
  }
  const T &operator()(std::size_t t, std::size_t y, std::size_t x) const {
    return data[(t * rows + y) * cols + x];
  }
  std::size_t frame_size() const { return rows * cols; }
  std::span<T> frame(std::size_t t) {
    return {data.data() + t * frame_size(), frame_size()};
  }
  std::span<const T> frame(std::size_t t) const {
    return {data.data() + t * frame_size(), frame_size()};
  }
  bool same_shape(const auto &o) const {
    return frames == o.frames && rows == o.rows && cols == o.cols;
  }
};

using ScalarVideo = Video<double>;
using ComplexVideo = Video<cplx>;

/// C x T x H x W complex stack, coil axis outermost.
struct CoilStack {
  std::size_t coils = 0;
  std::size_t frames = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;

  CoilStack() = default;
  CoilStack(std::size_t c, std::size_t t, std::size_t r, std::size_t w)
      : coils(c), frames(t), rows(r), cols(w), data(c * t * r * w) {}

  std::size_t frame_size() const { return rows * cols; }
  std::span<cplx> frame(std::size_t c, std::size_t t) {
    return {data.data() + (c * frames + t) * frame_size(), frame_size()};
  }
  std::span<const cplx> frame(std::size_t c, std::size_t t) const {
    return {data.data() + (c * frames + t) * frame_size(), frame_size()};
  }
  cplx &operator()(std::size_t c, std::size_t t, std::size_t y, std::size_t x) {
    return data[((c * frames + t) * rows + y) * cols + x];
  }
  const cplx &operator()(std::size_t c, std::size_t t, std::size_t y,
                         std::size_t x) const {
    return data[((c * frames + t) * rows + y) * cols + x];
  }
};

/// Image-domain multi-coil data.
struct MultiCoilVideo : CoilStack {
  using CoilStack::CoilStack;
};

/// Frequency-domain multi-coil data, DC at the array center.
struct CartesianKspace : CoilStack {
  using CoilStack::CoilStack;
};

}  // namespace fracsynth
