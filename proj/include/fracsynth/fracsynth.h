/*
 * fracsynth C API.
 *
 * Every function returning fs_status reports failure through the status code;
 * the matching human-readable message is available from fs_last_error() on
 * the calling thread until the next API call on that thread.
 */
#ifndef FRACSYNTH_FRACSYNTH_H
#define FRACSYNTH_FRACSYNTH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define FS_API __declspec(dllexport)
#else
#  define FS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fs_status {
  FS_OK = 0,
  FS_ERR_INVALID_ARGUMENT = 1,
  FS_ERR_EMPTY_CATALOGUE = 2,
  FS_ERR_IO = 3,
  FS_ERR_FORMAT = 4,  /* bad magic, truncated payload, unsupported dtype */
  FS_ERR_SHAPE = 5,   /* shape or plan mismatch */
  FS_ERR_NUMERIC = 6, /* degenerate input, diverged objective, zero noise */
  FS_ERR_FIT = 7,     /* edge fit failure, too few fits */
  FS_ERR_INTERNAL = 99
} fs_status;

FS_API const char *fs_version(void);
FS_API const char *fs_status_name(fs_status status);
FS_API const char *fs_last_error(void);

/* Worker threads for all subsequent calls; n <= 0 keeps the default. */
FS_API void fs_set_threads(int n);

/* ---- configuration ------------------------------------------------------ */

/*
 * Integer keys:  size, frames, coils, compressed_coils, spokes,
 *                samples_per_spoke (0 = 2 * size), examples, seed, max_iter,
 *                scan_samples, range_lo, range_hi, cs_iters
 * Real keys:     noise_min, noise_max, cs_lambda, cs_epsilon, cs_step_safety
 */
typedef struct fs_config fs_config;

FS_API fs_status fs_config_create(fs_config **out);
FS_API void fs_config_destroy(fs_config *cfg);
FS_API fs_status fs_config_set_int(fs_config *cfg, const char *key, int64_t value);
FS_API fs_status fs_config_set_double(fs_config *cfg, const char *key, double value);
FS_API fs_status fs_config_get_int(const fs_config *cfg, const char *key, int64_t *value);
FS_API fs_status fs_config_get_double(const fs_config *cfg, const char *key, double *value);
FS_API fs_status fs_config_validate(const fs_config *cfg);

/* ---- c-parameter catalogue ---------------------------------------------- */

typedef struct fs_catalogue fs_catalogue;

/* Mandelbrot scan over a scan_samples^4 grid keeping counts in [range_lo, range_hi]. */
FS_API fs_status fs_catalogue_scan(const fs_config *cfg, fs_catalogue **out);
FS_API fs_status fs_catalogue_load(const char *path, fs_catalogue **out);
FS_API fs_status fs_catalogue_save(const fs_catalogue *cat, const char *path);
FS_API size_t fs_catalogue_size(const fs_catalogue *cat);
FS_API fs_status fs_catalogue_range(const fs_catalogue *cat, int *lo, int *hi, int *max_iter);
FS_API fs_status fs_catalogue_entry(const fs_catalogue *cat, size_t index, double c[4],
                                    int *count);
FS_API void fs_catalogue_destroy(fs_catalogue *cat);

/* ---- dataset generation ------------------------------------------------- */

typedef void (*fs_progress_fn)(size_t index, double seconds, void *user);

/* Writes out_dir/manifest.json and out_dir/examples/NNNNNN/. */
FS_API fs_status fs_generate_dataset(const fs_config *cfg, const fs_catalogue *cat,
                                     const char *out_dir, fs_progress_fn progress,
                                     void *user);

/* Regenerates example `index` of the dataset described by cfg (same seed) with
 * the configured spoke count and writes it as an example directory. */
FS_API fs_status fs_undersample(const fs_config *cfg, const fs_catalogue *cat, size_t index,
                                const char *out_dir);

FS_API fs_status fs_split(size_t n, size_t *train, size_t *val, size_t *test);

/* ---- reconstruction and metrics ----------------------------------------- */

typedef enum fs_recon_method { FS_RECON_ADJOINT = 0, FS_RECON_CS = 1 } fs_recon_method;

/* Writes out_dir/recon.arr and out_dir/metrics.json; cfg supplies the cs_*
 * keys and may be NULL for defaults. */
FS_API fs_status fs_reconstruct(const char *example_dir, fs_recon_method method,
                                const fs_config *cfg, const char *out_dir, double *ssim_out);

typedef struct fs_rect {
  int x, y, width, height;
} fs_rect;

typedef struct fs_edge_probe {
  double x0, y0, x1, y1;
  int samples;
  double pixel_spacing;
} fs_edge_probe;

FS_API fs_status fs_eval_ssim(const char *path_a, const char *path_b, double *out);
FS_API fs_status fs_eval_cnr(const char *path, fs_rect region_a, fs_rect region_b,
                             fs_rect noise, double *out);
/* Mean and population std of per-frame edge sharpness (1/length units). */
FS_API fs_status fs_eval_edge(const char *path, const fs_edge_probe *probe, double *mean_es,
                              double *std_es, size_t *excluded_frames);

/* One grayscale PNG per frame of a magnitude video. */
FS_API fs_status fs_preview(const char *array_path, const char *out_dir,
                            size_t *frames_written);

/* ---- array containers --------------------------------------------------- */

typedef struct fs_array fs_array;
typedef enum fs_dtype { FS_DTYPE_F32 = 0, FS_DTYPE_C64 = 1 } fs_dtype;

FS_API fs_status fs_array_read(const char *path, fs_array **out);
FS_API fs_dtype fs_array_dtype(const fs_array *a);
FS_API size_t fs_array_ndim(const fs_array *a);
FS_API size_t fs_array_dim(const fs_array *a, size_t axis);
/* Raw float32 values; complex arrays are interleaved (re, im). */
FS_API const float *fs_array_data(const fs_array *a);
FS_API size_t fs_array_float_count(const fs_array *a);
FS_API void fs_array_destroy(fs_array *a);

#ifdef __cplusplus
}
#endif

#endif /* FRACSYNTH_FRACSYNTH_H */
