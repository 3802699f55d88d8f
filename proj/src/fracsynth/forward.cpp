#include "fracsynth/forward.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fracsynth/fft.hpp"
#include "fracsynth/parallel.hpp"

namespace fracsynth {

namespace {
constexpr double kPi = std::numbers::pi;
}

BodyMask BodyMask::build(std::size_t h, std::size_t w, const EllipseParams &p) {
  BodyMask mask{p, Image<double>(h, w)};
  const double cx = 0.5 * static_cast<double>(w - 1) + p.offset_x * static_cast<double>(w);
  const double cy = 0.5 * static_cast<double>(h - 1) + p.offset_y * static_cast<double>(h);
  // Coordinates in units of the half-extent, so the shape scales with the image.
  const double hx = 0.5 * static_cast<double>(w), hy = 0.5 * static_cast<double>(h);
  const double cs = std::cos(p.rotation), sn = std::sin(p.rotation);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      const double dx = (static_cast<double>(x) - cx) / hx;
      const double dy = (static_cast<double>(y) - cy) / hy;
      const double u = (dx * cs + dy * sn) / p.semi_x;
      const double v = (-dx * sn + dy * cs) / p.semi_y;
      mask.data(y, x) = (u * u + v * v <= 1.0) ? 1.0 : 0.0;
    }
  }
  return mask;
}

BodyMask make_body_mask(std::size_t h, std::size_t w, Rng &rng) {
  if (h < 8 || w < 8) fail(ErrorCode::InvalidArgument, "body mask needs h, w >= 8");
  EllipseParams p;
  p.semi_x = rng.uniform(0.55, 0.95);
  p.semi_y = rng.uniform(0.55, 0.95);
  p.rotation = rng.uniform(0.0, kPi);
  p.offset_x = rng.uniform(-0.1, 0.1);
  p.offset_y = rng.uniform(-0.1, 0.1);
  return BodyMask::build(h, w, p);
}

PhaseMap PhaseMap::build(std::size_t h, std::size_t w, const std::array<double, 36> &control) {
  PhaseMap map{control, Image<double>(h, w)};
  auto locate = [](std::size_t i, std::size_t n) {
    const double pos = n > 1 ? 5.0 * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const auto cell = std::min<std::size_t>(4, static_cast<std::size_t>(pos));
    return std::pair{cell, pos - static_cast<double>(cell)};
  };
  for (std::size_t y = 0; y < h; ++y) {
    const auto [r, fy] = locate(y, h);
    for (std::size_t x = 0; x < w; ++x) {
      const auto [c, fx] = locate(x, w);
      const double v00 = control[r * 6 + c], v01 = control[r * 6 + c + 1];
      const double v10 = control[(r + 1) * 6 + c], v11 = control[(r + 1) * 6 + c + 1];
      map.data(y, x) = (1 - fy) * ((1 - fx) * v00 + fx * v01) + fy * ((1 - fx) * v10 + fx * v11);
    }
  }
  return map;
}

PhaseMap make_background_phase(std::size_t h, std::size_t w, Rng &rng) {
  if (h < 6 || w < 6) fail(ErrorCode::InvalidArgument, "phase map needs h, w >= 6");
  std::array<double, 36> control{};
  for (auto &v : control) v = rng.uniform(-kPi, kPi);
  return PhaseMap::build(h, w, control);
}

cplx CoilParams::value(double x, double y) const {
  const double dx = (x - center_x) / sigma_x;
  const double dy = (y - center_y) / sigma_y;
  return std::polar(intensity * std::exp(-0.5 * (dx * dx + dy * dy)), phase);
}

CoilSet CoilSet::build(std::size_t h, std::size_t w, std::vector<CoilParams> params) {
  CoilSet set;
  set.params = std::move(params);
  for (const auto &p : set.params) {
    Image<cplx> map(h, w);
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x)
        map(y, x) = p.value(static_cast<double>(x), static_cast<double>(y));
    set.maps.push_back(std::move(map));
  }
  return set;
}

CoilSet make_coil_maps(std::size_t h, std::size_t w, std::size_t ncoils, Rng &rng) {
  if (ncoils == 0) fail(ErrorCode::InvalidArgument, "need at least one coil");
  const double hw = static_cast<double>(w), hh = static_cast<double>(h);
  std::vector<CoilParams> params(ncoils);
  for (auto &p : params) {
    const double angle = rng.uniform(0.0, 2.0 * kPi);
    const double radius = rng.uniform(0.8, 1.2);
    p.center_x = 0.5 * (hw - 1) + radius * 0.5 * hw * std::cos(angle);
    p.center_y = 0.5 * (hh - 1) + radius * 0.5 * hh * std::sin(angle);
    p.sigma_x = rng.uniform(0.15, 0.5) * hw;
    p.sigma_y = rng.uniform(0.15, 0.5) * hh;
    p.intensity = rng.uniform(0.5, 1.0);
    p.phase = rng.uniform(0.0, 2.0 * kPi);
  }
  return CoilSet::build(h, w, std::move(params));
}

MultiCoilVideo apply_forward_model(const ComplexVideo &v, const BodyMask &mask,
                                   const PhaseMap &phase, const CoilSet &coils,
                                   double noise_sigma, Rng &rng) {
  const std::size_t h = v.rows, w = v.cols;
  const auto same = [&](std::size_t r, std::size_t c) { return r == h && c == w; };
  if (!same(mask.data.rows, mask.data.cols) || !same(phase.data.rows, phase.data.cols))
    fail(ErrorCode::ShapeMismatch, "mask/phase shape differs from the video");
  for (const auto &m : coils.maps)
    if (!same(m.rows, m.cols)) fail(ErrorCode::ShapeMismatch, "coil map shape differs from the video");
  if (coils.size() == 0) fail(ErrorCode::ShapeMismatch, "empty coil set");
  if (noise_sigma < 0.0) fail(ErrorCode::InvalidArgument, "noise sigma must be >= 0");

  std::vector<cplx> body(h * w);
  for (std::size_t i = 0; i < body.size(); ++i)
    body[i] = mask.data.data[i] * std::polar(1.0, phase.data.data[i]);

  const std::uint64_t noise_seed = rng.next();
  MultiCoilVideo out(coils.size(), v.frames, h, w);
  parallel_for(coils.size() * v.frames, [&](std::size_t job) {
    const std::size_t c = job / v.frames, t = job % v.frames;
    const auto src = v.frame(t);
    auto dst = out.frame(c, t);
    const auto &map = coils.maps[c].data;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = map[i] * (src[i] * body[i]);
    if (noise_sigma > 0.0) {
      Rng noise(derive_seed(noise_seed, (static_cast<std::uint64_t>(c) << 32) | t));
      for (auto &d : dst) {
        const double re = noise.normal();
        const double im = noise.normal();
        d += noise_sigma * cplx(re, im);
      }
    }
  });
  return out;
}

CartesianKspace to_cartesian_kspace(const MultiCoilVideo &mc) {
  CartesianKspace k(mc.coils, mc.frames, mc.rows, mc.cols);
  k.data = mc.data;
  parallel_for(k.coils * k.frames, [&](std::size_t job) {
    fft2c(k.frame(job / k.frames, job % k.frames), k.rows, k.cols);
  });
  return k;
}

MultiCoilVideo to_image_space(const CartesianKspace &k) {
  MultiCoilVideo mc(k.coils, k.frames, k.rows, k.cols);
  mc.data = k.data;
  parallel_for(mc.coils * mc.frames, [&](std::size_t job) {
    ifft2c(mc.frame(job / mc.frames, job % mc.frames), mc.rows, mc.cols);
  });
  return mc;
}

}  // namespace fracsynth
