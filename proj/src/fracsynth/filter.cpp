#include "fracsynth/filter.hpp"

namespace fracsynth {

namespace {
// (d c b a | a b c d | d c b a)
std::size_t reflect(std::ptrdiff_t i, std::size_t n) {
  const auto len = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t period = 2 * len;
  i %= period;
  if (i < 0) i += period;
  return static_cast<std::size_t>(i < len ? i : period - 1 - i);
}
}  // namespace

Image<double> convolve_separable(const Image<double> &in, std::span<const double> taps) {
  if (taps.size() % 2 == 0) fail(ErrorCode::InvalidArgument, "kernel length must be odd");
  if (taps.size() == 1 && taps[0] == 1.0) return in;
  const auto radius = static_cast<std::ptrdiff_t>(taps.size() / 2);

  Image<double> tmp(in.rows, in.cols);
  for (std::size_t y = 0; y < in.rows; ++y)
    for (std::size_t x = 0; x < in.cols; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k)
        acc += taps[k + radius] * in(y, reflect(static_cast<std::ptrdiff_t>(x) + k, in.cols));
      tmp(y, x) = acc;
    }
  Image<double> out(in.rows, in.cols);
  for (std::size_t y = 0; y < in.rows; ++y)
    for (std::size_t x = 0; x < in.cols; ++x) {
      double acc = 0.0;
      for (std::ptrdiff_t k = -radius; k <= radius; ++k)
        acc += taps[k + radius] * tmp(reflect(static_cast<std::ptrdiff_t>(y) + k, in.rows), x);
      out(y, x) = acc;
    }
  return out;
}

}  // namespace fracsynth
