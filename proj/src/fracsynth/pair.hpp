#pragma once

#include "fracsynth/common.hpp"
#include "fracsynth/nufft.hpp"

namespace fracsynth {

/// C x T x S radial samples, index-aligned with a Trajectory.
struct RadialKspace {
  std::size_t coils = 0;
  std::size_t frames = 0;
  std::size_t samples = 0;
  std::vector<cplx> data;

  RadialKspace() = default;
  RadialKspace(std::size_t c, std::size_t t, std::size_t s)
      : coils(c), frames(t), samples(s), data(c * t * s) {}

  std::span<cplx> frame(std::size_t c, std::size_t t) {
    return {data.data() + (c * frames + t) * samples, samples};
  }
  std::span<const cplx> frame(std::size_t c, std::size_t t) const {
    return {data.data() + (c * frames + t) * samples, samples};
  }
};

struct TrainingPair {
  MultiCoilVideo input;  // aliased multi-coil images, RSS max 1
  ScalarVideo target;    // fully sampled RSS, max 1
  RadialKspace radial;   // samples behind `input`, same scale
  double input_scale = 1.0;
  double target_scale = 1.0;
};

/// Samples every coil image of every frame on a radial trajectory.
RadialKspace radial_sample(const MultiCoilVideo &images, const NufftPlan &plan);

/// Density-compensated adjoint of every (coil, frame).
MultiCoilVideo radial_adjoint(const RadialKspace &samples, const NufftPlan &plan,
                              const DcfWeights &dcf);

/// Target from the fully sampled data; input by radial resampling of the coil
/// images followed by the density-compensated adjoint. Each side is scaled to
/// peak magnitude 1 independently.
TrainingPair make_training_pair(const CartesianKspace &kspace, const NufftPlan &plan,
                                const DcfWeights &dcf);

}  // namespace fracsynth
