#include "fracsynth/fracsynth.h"

#include <cstring>
#include <string>

#include "fracsynth/container.hpp"
#include "fracsynth/metrics.hpp"
#include "fracsynth/parallel.hpp"
#include "fracsynth/pipeline.hpp"

using namespace fracsynth;

struct fs_config {
  PipelineConfig pipeline;
  CsParams cs;
};

struct fs_catalogue {
  CCatalogue cat;
};

struct fs_array {
  Array array;
};

namespace {

thread_local std::string g_last_error;

fs_status status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::OutOfRange:
      return FS_ERR_INVALID_ARGUMENT;
    case ErrorCode::EmptyCatalogue:
      return FS_ERR_EMPTY_CATALOGUE;
    case ErrorCode::Io:
      return FS_ERR_IO;
    case ErrorCode::BadMagic:
    case ErrorCode::TruncatedPayload:
    case ErrorCode::UnsupportedDtype:
      return FS_ERR_FORMAT;
    case ErrorCode::ShapeMismatch:
    case ErrorCode::PlanMismatch:
    case ErrorCode::SizeGuard:
    case ErrorCode::SingleFrame:
      return FS_ERR_SHAPE;
    case ErrorCode::DegenerateInput:
    case ErrorCode::NonFiniteObjective:
    case ErrorCode::ZeroNoise:
      return FS_ERR_NUMERIC;
    case ErrorCode::FitFailure:
    case ErrorCode::TooFewFits:
      return FS_ERR_FIT;
  }
  return FS_ERR_INTERNAL;
}

template <class Fn>
fs_status guarded(Fn &&fn) {
  g_last_error.clear();
  try {
    fn();
    return FS_OK;
  } catch (const Error &e) {
    g_last_error = std::string(to_string(e.code())) + ": " + e.what();
    return status_for(e.code());
  } catch (const std::exception &e) {
    g_last_error = e.what();
    return FS_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return FS_ERR_INTERNAL;
  }
}

fs_status null_argument(const char *what) {
  g_last_error = std::string("null argument: ") + what;
  return FS_ERR_INVALID_ARGUMENT;
}

template <class T>
T nonnegative(int64_t v, const char *key) {
  if (v < 0) fail(ErrorCode::InvalidArgument, std::string(key) + " must be >= 0");
  return static_cast<T>(v);
}

Image<std::uint8_t> rect_mask(fs_rect r, std::size_t rows, std::size_t cols) {
  if (r.width <= 0 || r.height <= 0 || r.x < 0 || r.y < 0 ||
      static_cast<std::size_t>(r.x + r.width) > cols || static_cast<std::size_t>(r.y + r.height) > rows)
    fail(ErrorCode::InvalidArgument, "ROI rectangle lies outside the image");
  Image<std::uint8_t> m(rows, cols, 0);
  for (int y = r.y; y < r.y + r.height; ++y)
    for (int x = r.x; x < r.x + r.width; ++x) m(y, x) = 1;
  return m;
}

}  // namespace

extern "C" {

const char *fs_version(void) { return "1.0.0"; }

const char *fs_status_name(fs_status status) {
  switch (status) {
    case FS_OK: return "ok";
    case FS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case FS_ERR_EMPTY_CATALOGUE: return "empty catalogue";
    case FS_ERR_IO: return "i/o error";
    case FS_ERR_FORMAT: return "format error";
    case FS_ERR_SHAPE: return "shape mismatch";
    case FS_ERR_NUMERIC: return "numerical failure";
    case FS_ERR_FIT: return "fit failure";
    case FS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char *fs_last_error(void) { return g_last_error.c_str(); }

void fs_set_threads(int n) { set_thread_count(n); }

fs_status fs_config_create(fs_config **out) {
  if (!out) return null_argument("out");
  return guarded([&] { *out = new fs_config{}; });
}

void fs_config_destroy(fs_config *cfg) { delete cfg; }

fs_status fs_config_set_int(fs_config *cfg, const char *key, int64_t value) {
  if (!cfg || !key) return null_argument("cfg/key");
  return guarded([&] {
    auto &p = cfg->pipeline;
    const std::string k = key;
    if (k == "size") p.size = nonnegative<std::size_t>(value, key);
    else if (k == "frames") p.frames = nonnegative<std::size_t>(value, key);
    else if (k == "coils") p.coils = nonnegative<std::size_t>(value, key);
    else if (k == "compressed_coils") p.compressed_coils = nonnegative<std::size_t>(value, key);
    else if (k == "spokes") p.spokes = nonnegative<std::size_t>(value, key);
    else if (k == "samples_per_spoke") p.samples_per_spoke = nonnegative<std::size_t>(value, key);
    else if (k == "examples") p.examples = nonnegative<std::size_t>(value, key);
    else if (k == "seed") p.seed = static_cast<std::uint64_t>(value);
    else if (k == "max_iter") p.max_iter = static_cast<int>(value);
    else if (k == "scan_samples") p.scan_samples = nonnegative<std::size_t>(value, key);
    else if (k == "range_lo") p.range.lo = static_cast<int>(value);
    else if (k == "range_hi") p.range.hi = static_cast<int>(value);
    else if (k == "cs_iters") cfg->cs.n_iters = static_cast<int>(value);
    else fail(ErrorCode::InvalidArgument, "unknown integer key '" + k + "'");
  });
}

fs_status fs_config_set_double(fs_config *cfg, const char *key, double value) {
  if (!cfg || !key) return null_argument("cfg/key");
  return guarded([&] {
    const std::string k = key;
    if (k == "noise_min") cfg->pipeline.noise_min = value;
    else if (k == "noise_max") cfg->pipeline.noise_max = value;
    else if (k == "cs_lambda") cfg->cs.lambda = value;
    else if (k == "cs_epsilon") cfg->cs.tv_epsilon = value;
    else if (k == "cs_step_safety") cfg->cs.step_safety = value;
    else fail(ErrorCode::InvalidArgument, "unknown real key '" + k + "'");
  });
}

fs_status fs_config_get_int(const fs_config *cfg, const char *key, int64_t *value) {
  if (!cfg || !key || !value) return null_argument("cfg/key/value");
  return guarded([&] {
    const auto &p = cfg->pipeline;
    const std::string k = key;
    if (k == "size") *value = static_cast<int64_t>(p.size);
    else if (k == "frames") *value = static_cast<int64_t>(p.frames);
    else if (k == "coils") *value = static_cast<int64_t>(p.coils);
    else if (k == "compressed_coils") *value = static_cast<int64_t>(p.compressed_coils);
    else if (k == "spokes") *value = static_cast<int64_t>(p.spokes);
    else if (k == "samples_per_spoke") *value = static_cast<int64_t>(p.samples_per_spoke);
    else if (k == "examples") *value = static_cast<int64_t>(p.examples);
    else if (k == "seed") *value = static_cast<int64_t>(p.seed);
    else if (k == "max_iter") *value = p.max_iter;
    else if (k == "scan_samples") *value = static_cast<int64_t>(p.scan_samples);
    else if (k == "range_lo") *value = p.range.lo;
    else if (k == "range_hi") *value = p.range.hi;
    else if (k == "cs_iters") *value = cfg->cs.n_iters;
    else fail(ErrorCode::InvalidArgument, "unknown integer key '" + k + "'");
  });
}

fs_status fs_config_get_double(const fs_config *cfg, const char *key, double *value) {
  if (!cfg || !key || !value) return null_argument("cfg/key/value");
  return guarded([&] {
    const std::string k = key;
    if (k == "noise_min") *value = cfg->pipeline.noise_min;
    else if (k == "noise_max") *value = cfg->pipeline.noise_max;
    else if (k == "cs_lambda") *value = cfg->cs.lambda;
    else if (k == "cs_epsilon") *value = cfg->cs.tv_epsilon;
    else if (k == "cs_step_safety") *value = cfg->cs.step_safety;
    else fail(ErrorCode::InvalidArgument, "unknown real key '" + k + "'");
  });
}

fs_status fs_config_validate(const fs_config *cfg) {
  if (!cfg) return null_argument("cfg");
  return guarded([&] {
    cfg->pipeline.validate();
    cfg->cs.validate();
  });
}

fs_status fs_catalogue_scan(const fs_config *cfg, fs_catalogue **out) {
  if (!cfg || !out) return null_argument("cfg/out");
  return guarded([&] { *out = new fs_catalogue{scan_catalogue(cfg->pipeline)}; });
}

fs_status fs_catalogue_load(const char *path, fs_catalogue **out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] {
    const auto doc = read_json(path);
    *out = new fs_catalogue{CCatalogue::from_json(doc.dump())};
  });
}

fs_status fs_catalogue_save(const fs_catalogue *cat, const char *path) {
  if (!cat || !path) return null_argument("cat/path");
  return guarded([&] { write_json(nlohmann::json::parse(cat->cat.to_json()), path); });
}

size_t fs_catalogue_size(const fs_catalogue *cat) { return cat ? cat->cat.entries.size() : 0; }

fs_status fs_catalogue_range(const fs_catalogue *cat, int *lo, int *hi, int *max_iter) {
  if (!cat) return null_argument("cat");
  if (lo) *lo = cat->cat.range.lo;
  if (hi) *hi = cat->cat.range.hi;
  if (max_iter) *max_iter = cat->cat.max_iter;
  return FS_OK;
}

fs_status fs_catalogue_entry(const fs_catalogue *cat, size_t index, double c[4], int *count) {
  if (!cat || !c) return null_argument("cat/c");
  return guarded([&] {
    if (index >= cat->cat.entries.size()) fail(ErrorCode::InvalidArgument, "catalogue index out of range");
    const auto &e = cat->cat.entries[index];
    c[0] = e.c.w;
    c[1] = e.c.x;
    c[2] = e.c.y;
    c[3] = e.c.z;
    if (count) *count = e.count;
  });
}

void fs_catalogue_destroy(fs_catalogue *cat) { delete cat; }

fs_status fs_generate_dataset(const fs_config *cfg, const fs_catalogue *cat, const char *out_dir,
                              fs_progress_fn progress, void *user) {
  if (!cfg || !cat || !out_dir) return null_argument("cfg/cat/out_dir");
  return guarded([&] {
    ProgressFn fn;
    if (progress) fn = [&](std::size_t i, double secs) { progress(i, secs, user); };
    generate_dataset(cfg->pipeline, cat->cat, out_dir, fn);
  });
}

fs_status fs_undersample(const fs_config *cfg, const fs_catalogue *cat, size_t index,
                         const char *out_dir) {
  if (!cfg || !cat || !out_dir) return null_argument("cfg/cat/out_dir");
  return guarded([&] {
    const auto &p = cfg->pipeline;
    p.validate();
    const RadialSampler sampler(p.size, p.frames, p.spokes, p.readout());
    write_example(generate_example(p, cat->cat, index, sampler), out_dir);
  });
}

fs_status fs_split(size_t n, size_t *train, size_t *val, size_t *test) {
  return guarded([&] {
    const Split s = split_dataset(n);
    if (train) *train = s.train.size();
    if (val) *val = s.val.size();
    if (test) *test = s.test.size();
  });
}

fs_status fs_reconstruct(const char *example_dir, fs_recon_method method, const fs_config *cfg,
                         const char *out_dir, double *ssim_out) {
  if (!example_dir || !out_dir) return null_argument("example_dir/out_dir");
  return guarded([&] {
    const CsParams params = cfg ? cfg->cs : CsParams{};
    const auto m = method == FS_RECON_CS ? ReconMethod::Cs : ReconMethod::Adjoint;
    const auto metrics = reconstruct_example_dir(example_dir, m, params, out_dir);
    if (ssim_out) *ssim_out = metrics.at("ssim").get<double>();
  });
}

fs_status fs_eval_ssim(const char *path_a, const char *path_b, double *out) {
  if (!path_a || !path_b || !out) return null_argument("path_a/path_b/out");
  return guarded([&] { *out = ssim(magnitude_video(path_a), magnitude_video(path_b)); });
}

fs_status fs_eval_cnr(const char *path, fs_rect region_a, fs_rect region_b, fs_rect noise,
                      double *out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] {
    const ScalarVideo v = magnitude_video(path);
    const RoiSpec roi{rect_mask(region_a, v.rows, v.cols), rect_mask(region_b, v.rows, v.cols),
                      rect_mask(noise, v.rows, v.cols)};
    *out = cnr(v, roi);
  });
}

fs_status fs_eval_edge(const char *path, const fs_edge_probe *probe, double *mean_es,
                       double *std_es, size_t *excluded_frames) {
  if (!path || !probe) return null_argument("path/probe");
  return guarded([&] {
    const ScalarVideo v = magnitude_video(path);
    const EdgeProbe p{probe->x0, probe->y0, probe->x1, probe->y1, probe->samples,
                      probe->pixel_spacing};
    const TemporalEs es = temporal_std_es(v, p);
    if (mean_es) *mean_es = es.mean;
    if (std_es) *std_es = es.std;
    if (excluded_frames) *excluded_frames = es.excluded_frames;
  });
}

fs_status fs_preview(const char *array_path, const char *out_dir, size_t *frames_written) {
  if (!array_path || !out_dir) return null_argument("array_path/out_dir");
  return guarded([&] {
    const std::size_t n = write_preview(magnitude_video(array_path), out_dir);
    if (frames_written) *frames_written = n;
  });
}

fs_status fs_array_read(const char *path, fs_array **out) {
  if (!path || !out) return null_argument("path/out");
  return guarded([&] { *out = new fs_array{read_array(path)}; });
}

fs_dtype fs_array_dtype(const fs_array *a) {
  return a && a->array.dtype == Dtype::C64 ? FS_DTYPE_C64 : FS_DTYPE_F32;
}

size_t fs_array_ndim(const fs_array *a) { return a ? a->array.shape.size() : 0; }

size_t fs_array_dim(const fs_array *a, size_t axis) {
  return a && axis < a->array.shape.size() ? a->array.shape[axis] : 0;
}

const float *fs_array_data(const fs_array *a) { return a ? a->array.values.data() : nullptr; }

size_t fs_array_float_count(const fs_array *a) { return a ? a->array.values.size() : 0; }

void fs_array_destroy(fs_array *a) { delete a; }

}  // extern "C"
