#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fracsynth/fracsynth.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 2;
constexpr int kExitUsage = 64;

struct RuntimeFailure {
  fs_status status;
};

struct UsageFailure {
  std::string message;
};

void check(fs_status s) {
  if (s != FS_OK) throw RuntimeFailure{s};
}

class Config {
 public:
  Config() { check(fs_config_create(&cfg_)); }
  ~Config() { fs_config_destroy(cfg_); }
  Config(const Config &) = delete;
  Config &operator=(const Config &) = delete;

  void set(const char *key, int64_t v) { check(fs_config_set_int(cfg_, key, v)); }
  void set(const char *key, double v) { check(fs_config_set_double(cfg_, key, v)); }
  int64_t get_int(const char *key) const {
    int64_t v = 0;
    check(fs_config_get_int(cfg_, key, &v));
    return v;
  }
  double get_double(const char *key) const {
    double v = 0;
    check(fs_config_get_double(cfg_, key, &v));
    return v;
  }
  const fs_config *get() const { return cfg_; }

 private:
  fs_config *cfg_ = nullptr;
};

class Catalogue {
 public:
  explicit Catalogue(fs_catalogue *c) : cat_(c) {}
  ~Catalogue() { fs_catalogue_destroy(cat_); }
  Catalogue(const Catalogue &) = delete;
  Catalogue &operator=(const Catalogue &) = delete;
  const fs_catalogue *get() const { return cat_; }

 private:
  fs_catalogue *cat_;
};

/// Flags shared by the commands that build examples.
struct Options {
  int64_t size = 192, frames = 20, coils = 16, compressed = 10, spokes = 13, readout = 0;
  int64_t examples = 692, max_iter = 100, scan_samples = 17;
  uint64_t seed = 0;
  std::string range = "10:30";
  double noise_min = 0.002, noise_max = 0.02;
  int jobs = 0;

  void add_grid(CLI::App *app) {
    app->add_option("--range", range, "Mandelbrot count window lo:hi (inclusive)")
        ->capture_default_str();
    app->add_option("--scan-samples", scan_samples, "Grid samples per quaternion axis")
        ->capture_default_str();
    app->add_option("--max-iter", max_iter, "Iteration cap")->capture_default_str();
  }

  void add_synthesis(CLI::App *app) {
    add_grid(app);
    app->add_option("--size", size, "Image matrix N (N x N)")->capture_default_str();
    app->add_option("--frames", frames, "Frames T")->capture_default_str();
    app->add_option("--coils", coils, "Simulated receiver coils")->capture_default_str();
    app->add_option("--compressed-coils", compressed, "Virtual coils after compression")
        ->capture_default_str();
    app->add_option("--spokes", spokes, "Radial spokes per frame")->capture_default_str();
    app->add_option("--samples-per-spoke", readout, "Readout samples per spoke (0 = 2N)")
        ->capture_default_str();
    app->add_option("--seed", seed, "Dataset seed")->capture_default_str();
    app->add_option("--noise-min", noise_min, "Lower bound of the noise sigma draw")
        ->capture_default_str();
    app->add_option("--noise-max", noise_max, "Upper bound of the noise sigma draw")
        ->capture_default_str();
  }

  void add_jobs(CLI::App *app) {
    app->add_option("--jobs,-j", jobs, "Worker threads (default: FRACSYNTH_JOBS or all cores)");
  }

  std::pair<int64_t, int64_t> parsed_range() const {
    const auto colon = range.find(':');
    if (colon == std::string::npos) throw UsageFailure{"--range expects lo:hi, got '" + range + "'"};
    try {
      std::size_t p1 = 0, p2 = 0;
      const std::string a = range.substr(0, colon), b = range.substr(colon + 1);
      const long long lo = std::stoll(a, &p1), hi = std::stoll(b, &p2);
      if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
      if (lo < 0 || hi < lo) throw UsageFailure{"--range needs 0 <= lo <= hi, got '" + range + "'"};
      return {lo, hi};
    } catch (const std::logic_error &) {
      throw UsageFailure{"--range expects integers lo:hi, got '" + range + "'"};
    }
  }

  void apply(Config &cfg) const {
    const auto [lo, hi] = parsed_range();
    cfg.set("range_lo", lo);
    cfg.set("range_hi", hi);
    cfg.set("scan_samples", scan_samples);
    cfg.set("max_iter", max_iter);
    cfg.set("size", size);
    cfg.set("frames", frames);
    cfg.set("coils", coils);
    cfg.set("compressed_coils", compressed);
    cfg.set("spokes", spokes);
    cfg.set("samples_per_spoke", readout);
    cfg.set("examples", examples);
    cfg.set("seed", static_cast<int64_t>(seed));
    cfg.set("noise_min", noise_min);
    cfg.set("noise_max", noise_max);
    if (fs_config_validate(cfg.get()) != FS_OK) throw UsageFailure{fs_last_error()};
  }

  void apply_jobs() const {
    int n = jobs;
    if (n <= 0) {
      if (const char *env = std::getenv("FRACSYNTH_JOBS")) n = std::atoi(env);
    }
    fs_set_threads(n);
  }
};

fs_catalogue *load_or_scan(const std::string &path, const Config &cfg) {
  fs_catalogue *cat = nullptr;
  if (!path.empty()) {
    check(fs_catalogue_load(path.c_str(), &cat));
  } else {
    check(fs_catalogue_scan(cfg.get(), &cat));
  }
  return cat;
}

fs_rect parse_rect(const std::string &text, const char *flag) {
  fs_rect r{};
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &r.x, &r.y, &r.width, &r.height) != 4)
    throw UsageFailure{std::string(flag) + " expects x,y,width,height"};
  return r;
}

void print(const nlohmann::json &doc) { std::cout << doc.dump(2) << "\n"; }

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Synthetic dynamic MRI training data from quaternion Julia fractals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fs_version());

  Options opt;

  auto *scan = app.add_subcommand("scan-c", "Scan the 4D Mandelbrot grid for usable c values");
  std::string scan_out = "catalogue.json";
  opt.add_grid(scan);
  opt.add_jobs(scan);
  scan->add_option("--out,-o", scan_out, "Catalogue JSON path")->capture_default_str();

  auto *gen = app.add_subcommand("gen-dataset", "Generate paired examples and a manifest");
  std::string gen_out, gen_catalogue;
  opt.add_synthesis(gen);
  opt.add_jobs(gen);
  gen->add_option("--examples,-n", opt.examples, "Number of examples")->capture_default_str();
  gen->add_option("--catalogue", gen_catalogue, "Catalogue JSON (scanned inline when absent)");
  gen->add_option("--out,-o", gen_out, "Dataset directory")->required();

  auto *under = app.add_subcommand("undersample",
                                   "Regenerate one example with the given spoke count");
  std::string under_out, under_catalogue;
  int64_t under_index = 0;
  opt.add_synthesis(under);
  opt.add_jobs(under);
  under->add_option("--catalogue", under_catalogue, "Catalogue JSON (scanned inline when absent)");
  under->add_option("--index", under_index, "Example index")->capture_default_str();
  under->add_option("--out,-o", under_out, "Example directory")->required();

  auto *recon = app.add_subcommand("recon", "Reconstruct an example (adjoint or CS)");
  std::string recon_example, recon_out, recon_method = "cs";
  double cs_lambda = 5e-4, cs_eps = -1.0, cs_safety = 0.9;
  int64_t cs_iters = 50;
  opt.add_jobs(recon);
  recon->add_option("--example", recon_example, "Example directory")->required();
  recon->add_option("--method", recon_method, "adjoint or cs")
      ->check(CLI::IsMember({"adjoint", "cs"}))
      ->capture_default_str();
  recon->add_option("--lambda", cs_lambda, "Temporal TV weight")->capture_default_str();
  recon->add_option("--iters", cs_iters, "CS iterations")->capture_default_str();
  recon->add_option("--epsilon", cs_eps, "TV smoothing constant (default 1e-6)");
  recon->add_option("--step-safety", cs_safety, "Step size fraction of 2/L")
      ->capture_default_str();
  recon->add_option("--out,-o", recon_out, "Output directory (default: example directory)");

  auto *eval = app.add_subcommand("eval", "Image quality metrics on .arr videos");
  std::string eval_metric, eval_input, eval_ref, roi_a, roi_b, roi_noise, probe_text;
  int probe_samples = 32;
  double probe_spacing = 1.0;
  eval->add_option("--metric", eval_metric, "ssim, cnr or edge")
      ->required()
      ->check(CLI::IsMember({"ssim", "cnr", "edge"}));
  eval->add_option("--input", eval_input, "Video to score")->required();
  eval->add_option("--reference", eval_ref, "Reference video (ssim)");
  eval->add_option("--roi-a", roi_a, "First region x,y,width,height (cnr)");
  eval->add_option("--roi-b", roi_b, "Second region x,y,width,height (cnr)");
  eval->add_option("--roi-noise", roi_noise, "Noise region x,y,width,height (cnr)");
  eval->add_option("--probe", probe_text, "Edge probe x0,y0,x1,y1 in pixels (edge)");
  eval->add_option("--probe-samples", probe_samples, "Samples along the probe")
      ->capture_default_str();
  eval->add_option("--pixel-spacing", probe_spacing, "Length units per pixel")
      ->capture_default_str();

  auto *preview = app.add_subcommand("preview", "Render a magnitude video as PNG frames");
  std::string preview_input, preview_out;
  preview->add_option("--input", preview_input, "Container file")->required();
  preview->add_option("--out,-o", preview_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    opt.apply_jobs();

    if (*scan) {
      Config cfg;
      opt.apply(cfg);
      fs_catalogue *raw = nullptr;
      const fs_status s = fs_catalogue_scan(cfg.get(), &raw);
      if (s == FS_ERR_EMPTY_CATALOGUE) {
        std::cerr << "error: " << fs_last_error()
                  << "\nhint: widen --range, raise --scan-samples or change --max-iter\n";
        return kExitRuntime;
      }
      check(s);
      Catalogue cat(raw);
      check(fs_catalogue_save(cat.get(), scan_out.c_str()));
      int lo = 0, hi = 0, mi = 0;
      check(fs_catalogue_range(cat.get(), &lo, &hi, &mi));
      print({{"catalogue", scan_out},
             {"count", fs_catalogue_size(cat.get())},
             {"range", {lo, hi}},
             {"max_iter", mi},
             {"grid_samples", opt.scan_samples}});
      return kExitOk;
    }

    if (*gen) {
      Config cfg;
      opt.apply(cfg);
      Catalogue cat(load_or_scan(gen_catalogue, cfg));
      const auto progress = [](size_t index, double seconds, void *) {
        std::printf("example %06zu  %.3f s\n", index, seconds);
        std::fflush(stdout);
      };
      check(fs_generate_dataset(cfg.get(), cat.get(), gen_out.c_str(), progress, nullptr));
      const auto manifest = [&] {
        std::ifstream in(std::filesystem::path(gen_out) / "manifest.json");
        return nlohmann::json::parse(in);
      }();
      print({{"dataset", gen_out},
             {"examples", manifest["examples"].size()},
             {"split", manifest["split"]},
             {"total_wall_time_s", manifest["total_wall_time_s"]}});
      return kExitOk;
    }

    if (*under) {
      Config cfg;
      opt.apply(cfg);
      if (under_index < 0) throw UsageFailure{"--index must be >= 0"};
      Catalogue cat(load_or_scan(under_catalogue, cfg));
      check(fs_undersample(cfg.get(), cat.get(), static_cast<size_t>(under_index),
                           under_out.c_str()));
      print({{"example", under_out}, {"index", under_index}, {"spokes", opt.spokes}});
      return kExitOk;
    }

    if (*recon) {
      Config cfg;
      cfg.set("cs_lambda", cs_lambda);
      cfg.set("cs_iters", cs_iters);
      cfg.set("cs_step_safety", cs_safety);
      if (cs_eps > 0) cfg.set("cs_epsilon", cs_eps);
      if (fs_config_validate(cfg.get()) != FS_OK) throw UsageFailure{fs_last_error()};
      const std::string out = recon_out.empty() ? recon_example : recon_out;
      const fs_recon_method method = recon_method == "cs" ? FS_RECON_CS : FS_RECON_ADJOINT;
      double ssim = 0.0;
      check(fs_reconstruct(recon_example.c_str(), method, cfg.get(), out.c_str(), &ssim));
      print({{"method", recon_method}, {"ssim", ssim}, {"output", out}});
      return kExitOk;
    }

    if (*eval) {
      nlohmann::json result{{"metric", eval_metric}, {"input", eval_input}};
      if (eval_metric == "ssim") {
        if (eval_ref.empty()) throw UsageFailure{"ssim needs --reference"};
        double v = 0.0;
        check(fs_eval_ssim(eval_input.c_str(), eval_ref.c_str(), &v));
        result["reference"] = eval_ref;
        result["value"] = v;
      } else if (eval_metric == "cnr") {
        if (roi_a.empty() || roi_b.empty() || roi_noise.empty())
          throw UsageFailure{"cnr needs --roi-a, --roi-b and --roi-noise"};
        double v = 0.0;
        check(fs_eval_cnr(eval_input.c_str(), parse_rect(roi_a, "--roi-a"),
                          parse_rect(roi_b, "--roi-b"), parse_rect(roi_noise, "--roi-noise"),
                          &v));
        result["value"] = v;
      } else {
        fs_edge_probe probe{};
        if (std::sscanf(probe_text.c_str(), "%lf,%lf,%lf,%lf", &probe.x0, &probe.y0, &probe.x1,
                        &probe.y1) != 4)
          throw UsageFailure{"edge needs --probe x0,y0,x1,y1"};
        probe.samples = probe_samples;
        probe.pixel_spacing = probe_spacing;
        double mean = 0.0, sd = 0.0;
        size_t excluded = 0;
        check(fs_eval_edge(eval_input.c_str(), &probe, &mean, &sd, &excluded));
        result["mean_es"] = mean;
        result["temporal_std_es"] = sd;
        result["excluded_frames"] = excluded;
      }
      print(result);
      return kExitOk;
    }

    if (*preview) {
      size_t frames = 0;
      check(fs_preview(preview_input.c_str(), preview_out.c_str(), &frames));
      print({{"frames", frames}, {"output", preview_out}});
      return kExitOk;
    }
  } catch (const UsageFailure &e) {
    std::cerr << "usage error: " << e.message << "\n";
    return kExitUsage;
  } catch (const RuntimeFailure &e) {
    std::cerr << "error (" << fs_status_name(e.status) << "): " << fs_last_error() << "\n";
    return kExitRuntime;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
