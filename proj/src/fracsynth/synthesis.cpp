#include "fracsynth/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracsynth/filter.hpp"
#include "fracsynth/parallel.hpp"

namespace fracsynth {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

SynthesisParams SynthesisParams::sample(Rng &rng) {
  SynthesisParams p;
  p.f2 = rng.uniform(0.25, 1.0);
  p.phi1 = rng.uniform(0.0, kTwoPi);
  p.phi2 = rng.uniform(0.0, kTwoPi);
  p.blur_sigma = rng.uniform(0.2, 0.4);
  return p;
}

ScalarVideo normalize01(const ScalarVideo &v) {
  ScalarVideo out = v;
  if (v.data.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.data.begin(), v.data.end());
  const double min = *lo;
  const double span = *hi - *lo;
  if (span == 0.0) {
    std::fill(out.data.begin(), out.data.end(), 0.0);
    return out;
  }
  for (auto &x : out.data) x = (x - min) / span;
  return out;
}

ComplexVideo map_to_complex(const ScalarVideo &v, const SynthesisParams &p) {
  ComplexVideo out(v.frames, v.rows, v.cols);
  for (std::size_t i = 0; i < v.data.size(); ++i) {
    const double s = v.data[i];
    if (!(s >= 0.0 && s <= 1.0))
      fail(ErrorCode::OutOfRange, "map_to_complex expects values in [0, 1]");
    out.data[i] = {std::sin(kTwoPi * p.f1 * s + p.phi1),
                   std::sin(kTwoPi * p.f2 * s + p.phi2)};
  }
  return out;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (sigma < 0.0) fail(ErrorCode::InvalidArgument, "sigma must be >= 0");
  if (sigma == 0.0) return {1.0};
  const auto radius = std::max<std::ptrdiff_t>(1, static_cast<std::ptrdiff_t>(std::ceil(3.0 * sigma)));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (std::ptrdiff_t k = -radius; k <= radius; ++k) {
    const double w = std::exp(-0.5 * static_cast<double>(k * k) / (sigma * sigma));
    taps[k + radius] = w;
    sum += w;
  }
  for (auto &w : taps) w /= sum;
  return taps;
}

Image<double> gaussian_blur(const Image<double> &ch, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  return convolve_separable(ch, taps);
}

Image<double> unsharp_mask(const Image<double> &ch, double sigma, double alpha) {
  const Image<double> smooth = gaussian_blur(ch, sigma);
  Image<double> out(ch.rows, ch.cols);
  for (std::size_t i = 0; i < ch.data.size(); ++i)
    out.data[i] = ch.data[i] + alpha * (ch.data[i] - smooth.data[i]);
  return out;
}

ComplexVideo synthesize_complex_video(const ScalarVideo &v, const SynthesisParams &p) {
  ComplexVideo out = map_to_complex(normalize01(v), p);
  parallel_for(out.frames, [&](std::size_t t) {
    auto frame = out.frame(t);
    Image<double> re(out.rows, out.cols), im(out.rows, out.cols);
    for (std::size_t i = 0; i < frame.size(); ++i) {
      re.data[i] = frame[i].real();
      im.data[i] = frame[i].imag();
    }
    re = unsharp_mask(gaussian_blur(re, p.blur_sigma), p.unsharp_sigma, p.unsharp_alpha);
    im = unsharp_mask(gaussian_blur(im, p.blur_sigma), p.unsharp_sigma, p.unsharp_alpha);
    for (std::size_t i = 0; i < frame.size(); ++i) frame[i] = {re.data[i], im.data[i]};
  });
  return out;
}

}  // namespace fracsynth
