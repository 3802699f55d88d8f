#include "fracsynth/pair.hpp"

#include <algorithm>

#include "fracsynth/coils.hpp"
#include "fracsynth/forward.hpp"
#include "fracsynth/parallel.hpp"

namespace fracsynth {

namespace {
double peak(const ScalarVideo &v) {
  return v.data.empty() ? 0.0 : *std::max_element(v.data.begin(), v.data.end());
}
}  // namespace

RadialKspace radial_sample(const MultiCoilVideo &images, const NufftPlan &plan) {
  if (images.rows != plan.rows() || images.cols != plan.cols() ||
      images.frames != plan.n_frames())
    fail(ErrorCode::PlanMismatch, "coil images do not match the NUFFT plan");
  RadialKspace out(images.coils, images.frames, plan.frame_samples(0));
  parallel_for(images.coils * images.frames, [&](std::size_t job) {
    const std::size_t c = job / images.frames, t = job % images.frames;
    const auto s = plan.forward(images.frame(c, t), t);
    std::copy(s.begin(), s.end(), out.frame(c, t).begin());
  });
  return out;
}

MultiCoilVideo radial_adjoint(const RadialKspace &samples, const NufftPlan &plan,
                              const DcfWeights &dcf) {
  if (samples.frames != plan.n_frames()) fail(ErrorCode::PlanMismatch, "frame count mismatch");
  MultiCoilVideo out(samples.coils, samples.frames, plan.rows(), plan.cols());
  parallel_for(samples.coils * samples.frames, [&](std::size_t job) {
    const std::size_t c = job / samples.frames, t = job % samples.frames;
    const auto img = plan.adjoint(samples.frame(c, t), t, dcf.w.at(t));
    std::copy(img.begin(), img.end(), out.frame(c, t).begin());
  });
  return out;
}

TrainingPair make_training_pair(const CartesianKspace &kspace, const NufftPlan &plan,
                                const DcfWeights &dcf) {
  TrainingPair pair;
  const MultiCoilVideo images = to_image_space(kspace);

  pair.target = rss_combine(images);
  const double tmax = peak(pair.target);
  pair.target_scale = tmax > 0.0 ? 1.0 / tmax : 1.0;
  if (tmax > 0.0)
    for (auto &v : pair.target.data) v /= tmax;

  pair.radial = radial_sample(images, plan);
  pair.input = radial_adjoint(pair.radial, plan, dcf);
  const double imax = peak(rss_combine(pair.input));
  pair.input_scale = imax > 0.0 ? 1.0 / imax : 1.0;
  if (imax > 0.0) {
    for (auto &v : pair.input.data) v /= imax;
    for (auto &v : pair.radial.data) v /= imax;
  }
  return pair;
}

}  // namespace fracsynth
