#include "fracsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracsynth/filter.hpp"
#include "fracsynth/parallel.hpp"

namespace fracsynth {

Image<double> video_frame(const ScalarVideo &v, std::size_t t) {
  Image<double> img(v.rows, v.cols);
  const auto f = v.frame(t);
  std::copy(f.begin(), f.end(), img.data.begin());
  return img;
}

namespace {

std::vector<double> ssim_window(const SsimParams &p) {
  if (p.window < 1 || p.window % 2 == 0) fail(ErrorCode::InvalidArgument, "SSIM window must be odd");
  const int r = p.window / 2;
  std::vector<double> taps(p.window);
  double sum = 0.0;
  for (int k = -r; k <= r; ++k) {
    taps[k + r] = std::exp(-0.5 * k * k / (p.window_sigma * p.window_sigma));
    sum += taps[k + r];
  }
  for (auto &w : taps) w /= sum;
  return taps;
}

Image<double> product(const Image<double> &a, const Image<double> &b) {
  Image<double> out(a.rows, a.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) out.data[i] = a.data[i] * b.data[i];
  return out;
}

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct LinearFit {
  double offset, amplitude, sse;
};

// Best (offset, amplitude) for fixed centre and width.
LinearFit solve_linear(const std::vector<double> &d, const std::vector<double> &v,
                       double centre, double width) {
  const double n = static_cast<double>(d.size());
  double s = 0, ss = 0, sv = 0, sy = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double b = logistic((d[i] - centre) / width);
    s += b;
    ss += b * b;
    sv += b * v[i];
    sy += v[i];
  }
  const double det = n * ss - s * s;
  double a, amp;
  if (std::abs(det) < 1e-14 * n * n) {
    a = sy / n;
    amp = 0.0;
  } else {
    amp = (n * sv - s * sy) / det;
    a = (sy - amp * s) / n;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double r = v[i] - a - amp * logistic((d[i] - centre) / width);
    sse += r * r;
  }
  return {a, amp, sse};
}

}  // namespace

double ssim_frame(const Image<double> &a, const Image<double> &b, const SsimParams &p) {
  if (a.rows != b.rows || a.cols != b.cols) fail(ErrorCode::ShapeMismatch, "SSIM inputs differ in shape");
  const auto taps = ssim_window(p);
  const double c1 = (p.k1 * p.data_range) * (p.k1 * p.data_range);
  const double c2 = (p.k2 * p.data_range) * (p.k2 * p.data_range);
  const auto mu_a = convolve_separable(a, taps);
  const auto mu_b = convolve_separable(b, taps);
  const auto e_aa = convolve_separable(product(a, a), taps);
  const auto e_bb = convolve_separable(product(b, b), taps);
  const auto e_ab = convolve_separable(product(a, b), taps);
  double total = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double ma = mu_a.data[i], mb = mu_b.data[i];
    const double va = e_aa.data[i] - ma * ma;
    const double vb = e_bb.data[i] - mb * mb;
    const double cov = e_ab.data[i] - ma * mb;
    total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
             ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return total / static_cast<double>(a.data.size());
}

double ssim(const ScalarVideo &a, const ScalarVideo &b, const SsimParams &p) {
  if (!a.same_shape(b)) fail(ErrorCode::ShapeMismatch, "SSIM inputs differ in shape");
  if (a.frames == 0) fail(ErrorCode::ShapeMismatch, "SSIM of an empty video");
  std::vector<double> per(a.frames);
  parallel_for(a.frames, [&](std::size_t t) {
    per[t] = ssim_frame(video_frame(a, t), video_frame(b, t), p);
  });
  double total = 0.0;
  for (double v : per) total += v;
  return total / static_cast<double>(a.frames);
}

void RoiSpec::validate(std::size_t rows, std::size_t cols) const {
  for (const auto *m : {&region_a, &region_b, &noise}) {
    if (m->rows != rows || m->cols != cols)
      fail(ErrorCode::ShapeMismatch, "ROI mask size differs from the video");
    if (std::none_of(m->data.begin(), m->data.end(), [](auto v) { return v != 0; }))
      fail(ErrorCode::InvalidArgument, "ROI mask is empty");
  }
  for (std::size_t i = 0; i < region_a.data.size(); ++i) {
    const int hits = (region_a.data[i] != 0) + (region_b.data[i] != 0) + (noise.data[i] != 0);
    if (hits > 1) fail(ErrorCode::InvalidArgument, "ROI masks overlap");
  }
}

double cnr(const ScalarVideo &video, const RoiSpec &roi) {
  roi.validate(video.rows, video.cols);
  const std::size_t fs = video.frame_size();
  auto mean_over = [&](const Image<std::uint8_t> &m) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < video.frames; ++t)
      for (std::size_t i = 0; i < fs; ++i)
        if (m.data[i]) {
          s += video.data[t * fs + i];
          ++n;
        }
    return std::pair{s / static_cast<double>(n), n};
  };
  const auto [mean_a, na] = mean_over(roi.region_a);
  const auto [mean_b, nb] = mean_over(roi.region_b);
  const auto [mean_n, nn] = mean_over(roi.noise);
  double var = 0.0;
  bool constant = true;
  const double *first = nullptr;
  for (std::size_t t = 0; t < video.frames; ++t)
    for (std::size_t i = 0; i < fs; ++i)
      if (roi.noise.data[i]) {
        const double v = video.data[t * fs + i];
        if (!first) first = &video.data[t * fs + i];
        constant = constant && v == *first;
        var += (v - mean_n) * (v - mean_n);
      }
  const double sd = std::sqrt(var / static_cast<double>(nn));
  if (constant || !(sd > 0.0)) fail(ErrorCode::ZeroNoise, "noise region has zero standard deviation");
  return (mean_a - mean_b) / sd;
}

void EdgeProbe::validate() const {
  if (x0 == x1 && y0 == y1) fail(ErrorCode::InvalidArgument, "edge probe endpoints coincide");
  if (samples < 8) fail(ErrorCode::InvalidArgument, "edge probe needs at least 8 samples");
  if (!(pixel_spacing > 0.0)) fail(ErrorCode::InvalidArgument, "pixel spacing must be positive");
}

double EdgeProbe::length() const { return std::hypot(x1 - x0, y1 - y0); }

std::vector<double> sample_profile(const Image<double> &frame, const EdgeProbe &probe) {
  probe.validate();
  std::vector<double> out(probe.samples);
  const double maxx = static_cast<double>(frame.cols - 1), maxy = static_cast<double>(frame.rows - 1);
  for (int i = 0; i < probe.samples; ++i) {
    const double f = static_cast<double>(i) / (probe.samples - 1);
    const double x = std::clamp(probe.x0 + f * (probe.x1 - probe.x0), 0.0, maxx);
    const double y = std::clamp(probe.y0 + f * (probe.y1 - probe.y0), 0.0, maxy);
    const auto ix = std::min<std::size_t>(static_cast<std::size_t>(x), frame.cols > 1 ? frame.cols - 2 : 0);
    const auto iy = std::min<std::size_t>(static_cast<std::size_t>(y), frame.rows > 1 ? frame.rows - 2 : 0);
    const double fx = x - static_cast<double>(ix), fy = y - static_cast<double>(iy);
    const std::size_t ix1 = std::min(ix + 1, frame.cols - 1), iy1 = std::min(iy + 1, frame.rows - 1);
    out[i] = (1 - fy) * ((1 - fx) * frame(iy, ix) + fx * frame(iy, ix1)) +
             fy * ((1 - fx) * frame(iy1, ix) + fx * frame(iy1, ix1));
  }
  return out;
}

EdgeFit fit_edge(const Image<double> &frame, const EdgeProbe &probe) {
  const auto profile = sample_profile(frame, probe);
  const double len = probe.length();
  const int n = probe.samples;
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = len * i / (n - 1);

  const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) fail(ErrorCode::FitFailure, "flat intensity profile");

  // Coarse grid over centre and log-width, then a shrinking pattern search.
  const double w_min = 0.02, w_max = std::max(len, 1.0);
  double best_c = 0.0, best_lw = 0.0, best = std::numeric_limits<double>::infinity();
  constexpr int kCentres = 64, kWidths = 48;
  for (int i = 0; i <= kCentres; ++i) {
    const double c = len * i / kCentres;
    for (int j = 0; j <= kWidths; ++j) {
      const double lw = std::log(w_min) + (std::log(w_max) - std::log(w_min)) * j / kWidths;
      const double sse = solve_linear(d, profile, c, std::exp(lw)).sse;
      if (sse < best) {
        best = sse;
        best_c = c;
        best_lw = lw;
      }
    }
  }
  double step_c = len / kCentres, step_w = (std::log(w_max) - std::log(w_min)) / kWidths;
  while (step_c > 1e-9 * std::max(len, 1.0) || step_w > 1e-9) {
    bool moved = false;
    for (const auto &[dc, dw] : {std::pair{1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}) {
      const double c = best_c + dc * step_c;
      const double lw = std::clamp(best_lw + dw * step_w, std::log(1e-3), std::log(1e3 * w_max));
      const double sse = solve_linear(d, profile, c, std::exp(lw)).sse;
      if (sse < best) {
        best = sse;
        best_c = c;
        best_lw = lw;
        moved = true;
      }
    }
    if (!moved) {
      step_c *= 0.5;
      step_w *= 0.5;
    }
  }

  const double width = std::exp(best_lw);
  const LinearFit lin = solve_linear(d, profile, best_c, width);
  double mean = 0.0;
  for (double v : profile) mean += v;
  mean /= n;
  double sst = 0.0;
  for (double v : profile) sst += (v - mean) * (v - mean);

  EdgeFit fit;
  fit.offset = lin.offset;
  fit.amplitude = lin.amplitude;
  fit.centre = best_c;
  fit.width = width;
  fit.r_squared = 1.0 - lin.sse / sst;
  fit.sharpness = 1.0 / (4.0 * width * probe.pixel_spacing);
  if (fit.r_squared < 0.5) fail(ErrorCode::FitFailure, "edge fit residual too large");
  if (std::abs(fit.amplitude) < 0.01 * range) fail(ErrorCode::FitFailure, "edge amplitude too small");
  return fit;
}

TemporalEs temporal_std_es(const ScalarVideo &video, const EdgeProbe &probe) {
  probe.validate();
  TemporalEs out;
  for (std::size_t t = 0; t < video.frames; ++t) {
    try {
      out.per_frame.push_back(edge_sharpness(video_frame(video, t), probe));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::FitFailure) throw;
      ++out.excluded_frames;
    }
  }
  if (out.per_frame.size() < 2) fail(ErrorCode::TooFewFits, "fewer than two frames produced an edge fit");
  const double n = static_cast<double>(out.per_frame.size());
  for (double v : out.per_frame) out.mean += v;
  out.mean /= n;
  double var = 0.0;
  for (double v : out.per_frame) var += (v - out.mean) * (v - out.mean);
  out.std = std::sqrt(var / n);
  return out;
}

}  // namespace fracsynth
