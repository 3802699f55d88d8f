#include "fracsynth/pipeline.hpp"

#include <chrono>
#include <mutex>

#include "fracsynth/coils.hpp"
#include "fracsynth/container.hpp"
#include "fracsynth/forward.hpp"
#include "fracsynth/pair.hpp"
#include "fracsynth/parallel.hpp"
#include "fracsynth/rng.hpp"
#include "fracsynth/synthesis.hpp"

namespace fracsynth {

namespace fs = std::filesystem;
using nlohmann::json;

void PipelineConfig::validate() const {
  if (size < 8) fail(ErrorCode::InvalidArgument, "size must be >= 8");
  if (frames < 2) fail(ErrorCode::InvalidArgument, "frames must be >= 2");
  if (coils < 1) fail(ErrorCode::InvalidArgument, "coils must be >= 1");
  if (compressed_coils < 1 || compressed_coils > coils)
    fail(ErrorCode::InvalidArgument, "compressed coils must lie in [1, coils]");
  if (spokes < 1) fail(ErrorCode::InvalidArgument, "spokes must be >= 1");
  if (readout() < 2 || readout() % 2) fail(ErrorCode::InvalidArgument, "samples per spoke must be even");
  if (examples < 1) fail(ErrorCode::InvalidArgument, "examples must be >= 1");
  if (scan_samples < 1) fail(ErrorCode::InvalidArgument, "scan samples must be >= 1");
  iteration().validate();
  if (range.lo > range.hi || range.hi > max_iter)
    fail(ErrorCode::InvalidArgument, "range must satisfy lo <= hi <= max_iter");
  if (!(noise_min >= 0.0 && noise_min <= noise_max))
    fail(ErrorCode::InvalidArgument, "noise range must satisfy 0 <= min <= max");
}

json PipelineConfig::to_json() const {
  return {{"size", size},
          {"frames", frames},
          {"coils", coils},
          {"compressed_coils", compressed_coils},
          {"spokes", spokes},
          {"samples_per_spoke", readout()},
          {"examples", examples},
          {"seed", seed},
          {"max_iter", max_iter},
          {"escape_threshold", 4.0},
          {"scan_samples", scan_samples},
          {"range", {range.lo, range.hi}},
          {"noise_range", {noise_min, noise_max}}};
}

RadialSampler::RadialSampler(std::size_t size, std::size_t frames, std::size_t spokes,
                             std::size_t readout)
    : traj(golden_angle_trajectory(frames, spokes, readout, size)),
      dcf(density_compensation(traj)),
      plan(size, size, traj) {}

RadialSampler RadialSampler::from_meta(const json &meta) {
  try {
    const auto &s = meta.at("sampling");
    return RadialSampler(s.at("size").get<std::size_t>(), s.at("frames").get<std::size_t>(),
                         s.at("spokes").get<std::size_t>(),
                         s.at("samples_per_spoke").get<std::size_t>());
  } catch (const json::exception &ex) {
    fail(ErrorCode::Io, std::string("meta.json lacks sampling parameters: ") + ex.what());
  }
}

CCatalogue scan_catalogue(const PipelineConfig &cfg) {
  return scan_c_catalogue(cfg.scan_grid(), cfg.iteration(), cfg.range);
}

DatasetExample generate_example(const PipelineConfig &cfg, const CCatalogue &catalogue,
                                std::size_t index, const RadialSampler &sampler) {
  if (catalogue.entries.empty()) fail(ErrorCode::EmptyCatalogue, "catalogue has no entries");
  const std::size_t n = cfg.size;
  const CatalogueEntry &entry = catalogue.entries[index % catalogue.entries.size()];

  GridSpec4 grid;
  grid.nx = grid.ny = n;
  grid.nz = 1;
  grid.nt = cfg.frames;
  const ScalarVideo field = render_julia_slice(entry.c, grid, cfg.iteration());

  Rng synth_rng = derive_rng(cfg.seed, index, Purpose::Synthesis);
  const SynthesisParams sp = SynthesisParams::sample(synth_rng);
  const ComplexVideo image = synthesize_complex_video(field, sp);

  Rng mask_rng = derive_rng(cfg.seed, index, Purpose::Mask);
  const BodyMask mask = make_body_mask(n, n, mask_rng);
  Rng phase_rng = derive_rng(cfg.seed, index, Purpose::Phase);
  const PhaseMap phase = make_background_phase(n, n, phase_rng);
  Rng coil_rng = derive_rng(cfg.seed, index, Purpose::Coils);
  const CoilSet coils = make_coil_maps(n, n, cfg.coils, coil_rng);
  Rng noise_rng = derive_rng(cfg.seed, index, Purpose::Noise);
  const double noise_sigma = noise_rng.uniform(cfg.noise_min, cfg.noise_max);

  const CartesianKspace full =
      to_cartesian_kspace(apply_forward_model(image, mask, phase, coils, noise_sigma, noise_rng));
  const CoilCompression cc = compute_coil_compression(full, cfg.compressed_coils);
  CartesianKspace compressed;
  static_cast<CoilStack &>(compressed) = cc.apply(full);

  TrainingPair pair = make_training_pair(compressed, sampler.plan, sampler.dcf);

  DatasetExample ex;
  ex.index = index;
  ex.input = std::move(pair.input);
  ex.target = std::move(pair.target);
  ex.radial = std::move(pair.radial);
  ex.coils = cc.apply(coils);

  json coil_params = json::array();
  for (const auto &p : coils.params)
    coil_params.push_back({{"center", {p.center_x, p.center_y}},
                           {"sigma", {p.sigma_x, p.sigma_y}},
                           {"phase", p.phase},
                           {"intensity", p.intensity}});
  const auto &e = mask.params;
  ex.meta = {
      {"index", index},
      {"example_seed", example_seed(cfg.seed, index)},
      {"c", {entry.c.w, entry.c.x, entry.c.y, entry.c.z}},
      {"c_count", entry.count},
      {"synthesis",
       {{"f1", sp.f1}, {"f2", sp.f2}, {"phi1", sp.phi1}, {"phi2", sp.phi2},
        {"blur_sigma", sp.blur_sigma}, {"unsharp_sigma", sp.unsharp_sigma},
        {"unsharp_alpha", sp.unsharp_alpha}}},
      {"mask",
       {{"semi_axes", {e.semi_x, e.semi_y}}, {"rotation", e.rotation},
        {"offset", {e.offset_x, e.offset_y}}}},
      {"phase_control", phase.control},
      {"coils", coil_params},
      {"noise_sigma", noise_sigma},
      {"compression",
       {{"coils_in", cc.n_in}, {"coils_out", cc.n_out},
        {"retained_energy", cc.retained_energy}, {"singular_values", cc.singular_values}}},
      {"scales", {{"input", pair.input_scale}, {"target", pair.target_scale}}},
      {"sampling",
       {{"size", n}, {"frames", cfg.frames}, {"spokes", sampler.traj.spokes_per_frame},
        {"samples_per_spoke", sampler.traj.samples_per_spoke}}},
  };
  return ex;
}

json generate_dataset(const PipelineConfig &cfg, const CCatalogue &catalogue,
                      const fs::path &out_dir, const ProgressFn &progress) {
  cfg.validate();
  std::error_code ec;
  fs::create_directories(out_dir / "examples", ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string() + ": " + ec.message());

  json manifest = {{"format", "fracsynth-dataset"},
                   {"version", 1},
                   {"seed", cfg.seed},
                   {"status", "incomplete"},
                   {"config", cfg.to_json()},
                   {"catalogue",
                    {{"range", {catalogue.range.lo, catalogue.range.hi}},
                     {"max_iter", catalogue.max_iter},
                     {"entries", catalogue.entries.size()}}}};
  if (cfg.examples >= 3) {
    const Split s = split_dataset(cfg.examples);
    auto part = [](const std::vector<std::size_t> &v) {
      return json{{"start", v.empty() ? 0 : v.front()}, {"count", v.size()}};
    };
    manifest["split"] = {{"train", part(s.train)}, {"val", part(s.val)}, {"test", part(s.test)}};
  } else {
    manifest["split"] = nullptr;
  }
  manifest["examples"] = json::array();
  write_json(manifest, out_dir / "manifest.json");

  const RadialSampler sampler(cfg.size, cfg.frames, cfg.spokes, cfg.readout());
  std::vector<json> records(cfg.examples);
  std::vector<char> done(cfg.examples, 0);
  std::mutex report;
  const auto start = std::chrono::steady_clock::now();

  auto run_one = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    const DatasetExample ex = generate_example(cfg, catalogue, i, sampler);
    json record = write_example(ex, out_dir / "examples" / example_dir_name(i));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    record["dir"] = "examples/" + example_dir_name(i);
    record["wall_time_s"] = secs;
    records[i] = std::move(record);
    done[i] = 1;
    if (progress) {
      std::lock_guard lock(report);
      progress(i, secs);
    }
  };

  try {
    // Whole examples in parallel when there are enough of them; otherwise
    // the per-example kernels use the threads.
    if (cfg.examples >= static_cast<std::size_t>(thread_count()) && thread_count() > 1)
      parallel_for(cfg.examples, run_one);
    else
      for (std::size_t i = 0; i < cfg.examples; ++i) run_one(i);
  } catch (...) {
    for (std::size_t i = 0; i < cfg.examples; ++i)
      if (done[i]) manifest["examples"].push_back(records[i]);
    write_json(manifest, out_dir / "manifest.json");
    throw;
  }

  for (auto &r : records) manifest["examples"].push_back(std::move(r));
  manifest["status"] = "complete";
  manifest["total_wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(manifest, out_dir / "manifest.json");
  return manifest;
}

json metric_record(const std::string &metric, double value, json params,
                   std::size_t excluded_frames) {
  return {{"metric", metric},
          {"value", value},
          {"params", std::move(params)},
          {"excluded_frames", excluded_frames}};
}

namespace {
void normalize_peak(ScalarVideo &v) {
  double peak = 0.0;
  for (double x : v.data) peak = std::max(peak, x);
  if (peak > 0.0)
    for (double &x : v.data) x /= peak;
}

json ssim_params_json(const SsimParams &p) {
  return {{"window", p.window}, {"sigma", p.window_sigma}, {"k1", p.k1},
          {"k2", p.k2}, {"data_range", p.data_range}};
}
}  // namespace

ReconOutput reconstruct_example(const DatasetExample &ex, ReconMethod method,
                                const CsParams &params) {
  ReconOutput out;
  const SsimParams sp;
  if (method == ReconMethod::Adjoint) {
    out.magnitude = rss_combine(ex.input);
    normalize_peak(out.magnitude);
    out.metrics = {{"method", "adjoint"}};
  } else {
    if (ex.radial.data.empty() || ex.coils.maps.empty())
      fail(ErrorCode::Io, "CS reconstruction needs radial.arr and coils.arr");
    const RadialSampler sampler = RadialSampler::from_meta(ex.meta);
    const CsResult cs = cs_reconstruct(ex.radial, ex.coils, sampler.plan, sampler.dcf, params);
    const CsProblem problem(ex.radial, ex.coils, sampler.plan, params.lambda, params.tv_epsilon);
    out.magnitude = problem.coil_rss(cs.image);
    normalize_peak(out.magnitude);
    out.metrics = {{"method", "cs"},
                   {"lambda", params.lambda},
                   {"iterations", params.n_iters},
                   {"tv_epsilon", params.tv_epsilon},
                   {"lipschitz", cs.lipschitz},
                   {"step", cs.step},
                   {"objective", cs.objective}};
  }
  const double score = ssim(out.magnitude, ex.target, sp);
  out.metrics["ssim"] = score;
  out.metrics["records"] = json::array({metric_record("ssim", score, ssim_params_json(sp))});
  return out;
}

json reconstruct_example_dir(const fs::path &example_dir, ReconMethod method,
                             const CsParams &params, const fs::path &out_dir) {
  const DatasetExample ex = read_example(example_dir);
  ReconOutput out = reconstruct_example(ex, method, params);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + out_dir.string());
  write_array(to_array(out.magnitude), out_dir / "recon.arr");
  write_json(out.metrics, out_dir / "metrics.json");
  return out.metrics;
}

ScalarVideo magnitude_video(const fs::path &path) {
  const Array a = read_array(path);
  if (a.dtype == Dtype::F32 && a.shape.size() == 3) return scalar_video_from(a);
  if (a.dtype == Dtype::C64 && a.shape.size() == 3) {
    const ComplexVideo v = complex_video_from(a);
    ScalarVideo out(v.frames, v.rows, v.cols);
    for (std::size_t i = 0; i < v.data.size(); ++i) out.data[i] = std::abs(v.data[i]);
    return out;
  }
  if (a.dtype == Dtype::C64 && a.shape.size() == 4) return rss_combine(multicoil_from(a));
  fail(ErrorCode::UnsupportedDtype, "expected f32 [T,H,W], c64 [T,H,W] or c64 [C,T,H,W]");
}

}  // namespace fracsynth
