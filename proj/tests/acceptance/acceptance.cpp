// One line per acceptance criterion: PASS, FAIL or INFO (soft, never fails).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "fracsynth/coils.hpp"
#include "fracsynth/fft.hpp"
#include "fracsynth/fracsynth.h"
#include "fracsynth/fractal.hpp"
#include "fracsynth/metrics.hpp"
#include "fracsynth/nufft.hpp"
#include "fracsynth/parallel.hpp"
#include "fracsynth/pipeline.hpp"
#include "fracsynth/recon_cs.hpp"
#include "fracsynth/trajectory.hpp"

using namespace fracsynth;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

struct Verdict {
  bool ok = true;
  std::string detail;
};

void report(const char *name, const std::function<Verdict()> &check) {
  Verdict v;
  try {
    v = check();
  } catch (const std::exception &e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  if (!v.ok) ++g_failures;
  std::printf("%s %s: %s\n", v.ok ? "PASS" : "FAIL", name, v.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<cplx> random_complex(std::size_t n, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto &z : v) z = {d(gen), d(gen)};
  return v;
}

double norm2(std::span<const cplx> v) {
  double s = 0;
  for (const auto &z : v) s += std::norm(z);
  return std::sqrt(s);
}

double rel_l2(std::span<const cplx> a, std::span<const cplx> b) {
  double num = 0;
  for (std::size_t i = 0; i < a.size(); ++i) num += std::norm(a[i] - b[i]);
  return std::sqrt(num) / norm2(b);
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

// Direct non-uniform DFT with pixel positions measured from (W/2, H/2).
std::vector<cplx> direct_forward(std::span<const cplx> img, std::size_t h, std::size_t w,
                                 const std::vector<KPoint> &k) {
  std::vector<cplx> out(k.size());
  const double scale = 1.0 / std::sqrt(double(h * w));
  for (std::size_t s = 0; s < k.size(); ++s) {
    cplx acc = 0;
    for (std::size_t y = 0; y < h; ++y)
      for (std::size_t x = 0; x < w; ++x) {
        const double ph = -2 * std::numbers::pi *
                          (k[s].kx * (double(x) - double(w / 2)) / w + k[s].ky * (double(y) - double(h / 2)) / h);
        acc += img[y * w + x] * std::polar(1.0, ph);
      }
    out[s] = acc * scale;
  }
  return out;
}

std::vector<cplx> direct_adjoint(std::span<const cplx> smp, std::size_t h, std::size_t w,
                                 const std::vector<KPoint> &k) {
  std::vector<cplx> out(h * w);
  const double scale = 1.0 / std::sqrt(double(h * w));
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      cplx acc = 0;
      for (std::size_t s = 0; s < k.size(); ++s) {
        const double ph = 2 * std::numbers::pi *
                          (k[s].kx * (double(x) - double(w / 2)) / w + k[s].ky * (double(y) - double(h / 2)) / h);
        acc += smp[s] * std::polar(1.0, ph);
      }
      out[y * w + x] = acc * scale;
    }
  return out;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int run(const std::string &cmd) {
  const int rc = std::system((cmd + " > /dev/null").c_str());
  return rc;
}

}  // namespace

int main() {
  const IterationParams iter{100, 4.0};

  report("mandelbrot-julia identity", [&] {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const GridSpec4 g;
    const auto t0 = Clock::now();
    int mismatches = 0;
    for (int i = 0; i < 200; ++i) {
      const Quaternion c{g.x_range[0] + 2.0 * u(gen), g.y_range[0] + 2.0 * u(gen), g.z_range[0] + 1.0 * u(gen),
                         g.t_range[0] + 0.4 * u(gen)};
      if (julia_iterations(Quaternion{}, c, iter) != mandelbrot_iterations(c, iter)) ++mismatches;
    }
    const double secs = seconds_since(t0);
    return Verdict{mismatches == 0 && secs < 1.0, fmt("%d/200 mismatches, %.4f s", mismatches, secs)};
  });

  report("hand iteration vectors", [&] {
    const int a = mandelbrot_iterations({1, 0, 0, 0}, iter);
    const int b = mandelbrot_iterations({-1, 0, 0, 0}, iter);
    const int c = mandelbrot_iterations({0, 0, 0, 0}, iter);
    const int d = julia_iterations({2, 0, 0, 0}, {0, 0, 0, 0}, iter);
    return Verdict{a == 3 && b == 100 && c == 100 && d == 2, fmt("M(1)=%d M(-1)=%d M(0)=%d J(2;0)=%d", a, b, c, d)};
  });

  report("catalogue validity", [&] {
    const auto t0 = Clock::now();
    const CCatalogue cat = scan_c_catalogue(GridSpec4::uniform(17), iter, {10, 30});
    bool ok = !cat.entries.empty();
    for (const auto &e : cat.entries) ok = ok && e.count >= 10 && e.count <= 30;
    return Verdict{ok, fmt("%zu entries, all counts in [10,30], %.2f s", cat.entries.size(), seconds_since(t0))};
  });

  report("nufft oracle equivalence", [&] {
    const auto t0 = Clock::now();
    const auto traj = golden_angle_trajectory(1, 5, 32, 16);
    const NufftPlan plan(16, 16, traj);
    const auto img = random_complex(256, 1);
    const auto y = random_complex(traj.frame_samples(), 2);
    const auto fwd = plan.forward(img, 0);
    const auto adj = plan.adjoint(y, 0);
    const double ef = rel_l2(fwd, direct_forward(img, 16, 16, traj.frames[0]));
    const double ea = rel_l2(adj, direct_adjoint(y, 16, 16, traj.frames[0]));
    const cplx l = dot(fwd, y), r = dot(img, adj);
    const double ed = std::abs(l - r) / std::abs(l);
    const double secs = seconds_since(t0);
    return Verdict{ef < 1e-3 && ea < 1e-3 && ed < 1e-3 && secs < 5.0,
                   fmt("forward %.2e, adjoint %.2e, dot %.2e, %.3f s", ef, ea, ed, secs)};
  });

  report("fft unitarity", [&] {
    const auto x = random_complex(64 * 64, 3);
    auto k = x;
    fft2c(k, 64, 64);
    const double parseval = std::abs(norm2(k) - norm2(x)) / norm2(x);
    auto back = k;
    ifft2c(back, 64, 64);
    const double roundtrip = rel_l2(back, x);
    return Verdict{parseval < 1e-10 && roundtrip < 1e-12, fmt("parseval %.2e, round trip %.2e", parseval, roundtrip)};
  });

  report("svd coil compression", [&] {
    Rng rng(77);
    const std::size_t n = 48;
    const CoilSet maps = make_coil_maps(n, n, 16, rng);
    MultiCoilVideo mc(16, 2, n, n);
    for (std::size_t c = 0; c < 16; ++c)
      for (std::size_t t = 0; t < 2; ++t)
        for (std::size_t y = 0; y < n; ++y)
          for (std::size_t x = 0; x < n; ++x) {
            const double r = std::hypot(double(x) - n / 2.0, double(y) - n / 2.0 - 2.0 * t) / (0.3 * n);
            mc(c, t, y, x) = maps.maps[c](y, x) * std::exp(-r * r) * cplx(1.0, 0.2 * t);
          }
    const ScalarVideo ref = rss_combine(mc);
    const ScalarVideo full = rss_combine(svd_coil_compress(mc, 16));
    double err = 0, peak = 0;
    for (std::size_t i = 0; i < ref.data.size(); ++i) {
      err = std::max(err, std::abs(ref.data[i] - full.data[i]));
      peak = std::max(peak, ref.data[i]);
    }
    bool mono = true;
    double prev = 0, e10 = 0;
    for (std::size_t k = 1; k <= 16; ++k) {
      const double e = compute_coil_compression(mc, k).retained_energy;
      mono = mono && e >= prev;
      prev = e;
      if (k == 10) e10 = e;
    }
    return Verdict{err / peak < 1e-10 && mono,
                   fmt("rss error %.2e, energy nondecreasing %s, 10 of 16 coils keep %.4f", err / peak,
                       mono ? "yes" : "no", e10)};
  });

  report("golden-angle trajectory", [&] {
    const auto traj = golden_angle_trajectory(20, 13, 384, 192);
    const double g = std::numbers::pi * 2.0 / (1.0 + std::sqrt(5.0));
    double worst = 0;
    for (std::size_t m = 1; m < traj.raw_angles.size(); ++m) {
      double d = std::fmod(traj.raw_angles[m] - traj.raw_angles[m - 1] + 2 * std::numbers::pi, std::numbers::pi);
      worst = std::max(worst, std::min(std::abs(d - g), std::numbers::pi - std::abs(d - g)));
    }
    bool ok = traj.spokes_per_frame == 13 && traj.n_frames() == 20;
    for (const auto &a : traj.angles) ok = ok && a.size() == 13 && std::is_sorted(a.begin(), a.end());
    return Verdict{ok && worst < 1e-12, fmt("max increment error %.2e, 13 sorted spokes in each of 20 frames: %s",
                                            worst, ok ? "yes" : "no")};
  });

  report("end-to-end determinism", [&] {
    const fs::path work = fs::temp_directory_path() / fmt("fracsynth_accept_%d", int(::getpid()));
    fs::remove_all(work);
    fs::create_directories(work);
    const std::string cli = FRACSYNTH_CLI;
    const std::string common = " gen-dataset -n 4 --size 64 --frames 8 --seed 9 --catalogue " +
                               (work / "cat.json").string();
    bool ok = run(cli + " scan-c --out " + (work / "cat.json").string()) == 0;
    ok = ok && run(cli + common + " --jobs 1 --out " + (work / "a").string()) == 0;
    ok = ok && run(cli + common + " --jobs 3 --out " + (work / "b").string()) == 0;
    std::size_t files = 0, differ = 0;
    if (ok) {
      for (const auto &entry : fs::recursive_directory_iterator(work / "a")) {
        if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
        ++files;
        if (slurp(entry.path()) != slurp(work / "b" / fs::relative(entry.path(), work / "a"))) ++differ;
      }
      auto ma = read_json(work / "a" / "manifest.json"), mb = read_json(work / "b" / "manifest.json");
      for (auto *m : {&ma, &mb}) {
        m->erase("total_wall_time_s");
        for (auto &r : (*m)["examples"]) r.erase("wall_time_s");
      }
      ++files;
      if (ma != mb) ++differ;
    }
    fs::remove_all(work);
    return Verdict{ok && files == 21 && differ == 0,
                   fmt("%zu files compared across --jobs 1 and 3, %zu differ (manifest timing fields excluded)", files,
                       differ)};
  });

  report("dataset split", [&] {
    std::size_t a = 0, b = 0, c = 0;
    const bool ok = fs_split(692, &a, &b, &c) == FS_OK;
    return Verdict{ok && a == 519 && b == 69 && c == 104, fmt("692 -> %zu/%zu/%zu", a, b, c)};
  });

  report("cs improvement", [&] {
    const auto t0 = Clock::now();
    PipelineConfig cfg;
    cfg.size = 64;
    cfg.frames = 8;
    cfg.seed = 1;
    const CCatalogue cat = scan_catalogue(cfg);
    const RadialSampler sampler(cfg.size, cfg.frames, cfg.spokes, cfg.readout());
    const CsParams p;
    int wins = 0, monotone = 0;
    double mean_cs = 0, mean_adj = 0;
    for (std::size_t i = 0; i < 10; ++i) {
      const auto ex = generate_example(cfg, cat, i, sampler);
      const double sa = reconstruct_example(ex, ReconMethod::Adjoint, p).metrics["ssim"].get<double>();
      const auto cs = reconstruct_example(ex, ReconMethod::Cs, p).metrics;
      const double sc = cs["ssim"].get<double>();
      const auto obj = cs["objective"].get<std::vector<double>>();
      bool mono = true;
      for (std::size_t k = 4; k < obj.size(); ++k) mono = mono && obj[k] <= obj[k - 1];
      wins += sc > sa;
      monotone += mono;
      mean_cs += sc / 10;
      mean_adj += sa / 10;
    }

    // Gradient check on a small random instance.
    const auto traj = golden_angle_trajectory(3, 5, 16, 8);
    const NufftPlan plan(8, 8, traj);
    Rng rng(5);
    const CoilSet coils = make_coil_maps(8, 8, 3, rng);
    RadialKspace y(3, 3, traj.frame_samples());
    y.data = random_complex(y.data.size(), 8);
    const CsProblem problem(y, coils, plan, 0.2, p.tv_epsilon);
    ComplexVideo x(3, 8, 8);
    x.data = random_complex(x.data.size(), 9);
    ComplexVideo g;
    problem.evaluate(x, &g);
    double worst = 0, gmax = 0;
    const double h = 1e-6;
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      gmax = std::max(gmax, std::abs(g.data[i]));
      for (const cplx dir : {cplx(1, 0), cplx(0, 1)}) {
        ComplexVideo xp = x, xm = x;
        xp.data[i] += h * dir;
        xm.data[i] -= h * dir;
        const double fd = (problem.objective(xp) - problem.objective(xm)) / (2 * h);
        worst = std::max(worst, std::abs(fd - (dir.real() != 0 ? g.data[i].real() : g.data[i].imag())));
      }
    }
    const double grad_err = worst / gmax;
    return Verdict{wins >= 9 && monotone == 10 && grad_err < 1e-4,
                   fmt("CS beats adjoint %d/10 (mean SSIM %.3f vs %.3f), monotone traces %d/10, gradient error "
                       "%.2e, %.1f s",
                       wins, mean_cs, mean_adj, monotone, grad_err, seconds_since(t0))};
  });

  report("metrics", [&] {
    ScalarVideo x(2, 32, 32);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] = 0.5 + 0.4 * std::sin(0.21 * i);
    const double self = ssim(x, x);
    const double constant = ssim(ScalarVideo(1, 16, 16, 0.5), ScalarVideo(1, 16, 16, 0.25));
    const double closed = (2 * 0.5 * 0.25 + 1e-4) / (0.25 + 0.0625 + 1e-4);

    double es_err = 0;
    for (double w : {1.0, 2.0}) {
      Image<double> im(32, 32);
      for (std::size_t r = 0; r < 32; ++r)
        for (std::size_t c = 0; c < 32; ++c) im(r, c) = 0.2 + 0.6 / (1 + std::exp(-(double(c) - 16.3) / w));
      const EdgeProbe probe{4, 15, 28, 15, 97, 1.0};
      es_err = std::max(es_err, std::abs(edge_sharpness(im, probe) * 4 * w - 1.0));
    }

    ScalarVideo v(2, 16, 16, 0.6);
    RoiSpec roi{Image<std::uint8_t>(16, 16), Image<std::uint8_t>(16, 16), Image<std::uint8_t>(16, 16)};
    for (std::size_t y = 0; y < 16; ++y)
      for (std::size_t c = 0; c < 16; ++c) {
        const std::size_t i = y * 16 + c;
        if (y < 4 && c < 4) roi.region_a.data[i] = 1;
        if (y < 4 && c >= 8 && c < 12) roi.region_b.data[i] = 1;
        if (y >= 10 && c < 6) roi.noise.data[i] = 1;
      }
    for (std::size_t t = 0; t < 2; ++t)
      for (std::size_t i = 0; i < 256; ++i) {
        double &p = v.data[t * 256 + i];
        if (roi.region_a.data[i]) p = 0.8;
        if (roi.region_b.data[i]) p = 0.4;
        if (roi.noise.data[i]) p = ((i + t) % 2) ? 0.51 : 0.49;
      }
    const double c = cnr(v, roi);
    const bool ok = self == 1.0 && std::abs(constant - closed) < 1e-6 && es_err < 0.05 && std::abs(c - 40) < 1e-9;
    return Verdict{ok, fmt("ssim(x,x)=%.17g, constant pair %.6f (formula %.6f), worst ES error %.2f%%, CNR %.12f",
                           self, constant, closed, 100 * es_err, c)};
  });

  // Soft criterion: reported, never counted as a failure.
  {
    try {
      PipelineConfig cfg;
      const CCatalogue cat = scan_catalogue(cfg);
      const auto t0 = Clock::now();
      const RadialSampler sampler(cfg.size, cfg.frames, cfg.spokes, cfg.readout());
      const auto ex = generate_example(cfg, cat, 0, sampler);
      const double secs = seconds_since(t0);
      std::printf("INFO throughput (soft): one %zux%zux%zu example, %zu->%zu coils, %zu spokes in %.2f s on %d "
                  "thread(s); budget 35 s %s\n",
                  cfg.size, cfg.size, cfg.frames, cfg.coils, cfg.compressed_coils, cfg.spokes, secs,
                  thread_count(), secs <= 35.0 ? "met" : "exceeded");
      (void)ex;
    } catch (const std::exception &e) {
      std::printf("INFO throughput (soft): not measured: %s\n", e.what());
    }
  }

  std::printf("%s: %d hard criteria failed\n", g_failures ? "FAIL" : "PASS", g_failures);
  return g_failures ? 1 : 0;
}
