#pragma once

#include <filesystem>
#include <functional>
#include <json.hpp>

#include "fracsynth/dataset.hpp"
#include "fracsynth/fractal.hpp"
#include "fracsynth/metrics.hpp"
#include "fracsynth/nufft.hpp"
#include "fracsynth/recon_cs.hpp"

namespace fracsynth {

struct PipelineConfig {
  std::size_t size = 192;
  std::size_t frames = 20;
  std::size_t coils = 16;
  std::size_t compressed_coils = 10;
  std::size_t spokes = 13;
  std::size_t samples_per_spoke = 0;  // 0 selects 2 * size
  std::size_t examples = 692;
  std::uint64_t seed = 0;
  int max_iter = 100;
  std::size_t scan_samples = 17;
  CountRange range{10, 30};
  double noise_min = 0.002;
  double noise_max = 0.02;

  std::size_t readout() const { return samples_per_spoke ? samples_per_spoke : 2 * size; }
  IterationParams iteration() const { return {max_iter, 4.0}; }
  GridSpec4 scan_grid() const { return GridSpec4::uniform(scan_samples); }

  void validate() const;
  nlohmann::json to_json() const;
};

/// Trajectory, density compensation and NUFFT plan shared by all examples.
struct RadialSampler {
  Trajectory traj;
  DcfWeights dcf;
  NufftPlan plan;

  RadialSampler(std::size_t size, std::size_t frames, std::size_t spokes, std::size_t readout);
  static RadialSampler from_meta(const nlohmann::json &meta);
};

CCatalogue scan_catalogue(const PipelineConfig &cfg);

/// Deterministic function of (cfg.seed, index): the catalogue entry is picked
/// round-robin by index and every random draw comes from the example's own
/// substreams.
DatasetExample generate_example(const PipelineConfig &cfg, const CCatalogue &catalogue,
                                std::size_t index, const RadialSampler &sampler);

using ProgressFn = std::function<void(std::size_t index, double seconds)>;

/// Writes manifest.json and examples/NNNNNN/ under `out_dir`. While running,
/// and after a failure, the manifest carries "status": "incomplete".
nlohmann::json generate_dataset(const PipelineConfig &cfg, const CCatalogue &catalogue,
                                const std::filesystem::path &out_dir,
                                const ProgressFn &progress = {});

enum class ReconMethod { Adjoint, Cs };

struct ReconOutput {
  ScalarVideo magnitude;  // max 1
  nlohmann::json metrics;
};

ReconOutput reconstruct_example(const DatasetExample &ex, ReconMethod method,
                                const CsParams &params);

/// Reads an example directory and writes recon.arr and metrics.json to `out_dir`.
nlohmann::json reconstruct_example_dir(const std::filesystem::path &example_dir,
                                       ReconMethod method, const CsParams &params,
                                       const std::filesystem::path &out_dir);

/// Magnitude video of any container: f32 [T,H,W], c64 [T,H,W] (modulus) or
/// c64 [C,T,H,W] (root-sum-of-squares).
ScalarVideo magnitude_video(const std::filesystem::path &path);

/// One 8-bit grayscale PNG per frame, window [0, 1]. Returns the frame count.
std::size_t write_preview(const ScalarVideo &video, const std::filesystem::path &out_dir);

nlohmann::json metric_record(const std::string &metric, double value,
                             nlohmann::json params = nlohmann::json::object(),
                             std::size_t excluded_frames = 0);

}  // namespace fracsynth
