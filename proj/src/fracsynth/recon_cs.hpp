#pragma once

#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/forward.hpp"
#include "fracsynth/nufft.hpp"
#include "fracsynth/pair.hpp"

namespace fracsynth {

struct CsParams {
  double lambda = 5e-4;
  int n_iters = 50;
  double tv_epsilon = 1e-6;
  double step_safety = 0.9;
  int power_iters = 10;

  void validate() const;
};

/// sum over pixels and t of sqrt(|v[t+1] - v[t]|^2 + eps^2) - eps.
/// Throws SingleFrame when T < 2.
double temporal_tv(const ComplexVideo &v, double epsilon);

/// 1/2 sum_{c,t} |NUFFT_t(S_c x_t) - y_{c,t}|^2 + lambda * temporal_tv(x).
/// Gradients are returned as d/dRe + i d/dIm.
class CsProblem {
 public:
  CsProblem(const RadialKspace &y, const CoilSet &coils, const NufftPlan &plan,
            double lambda, double epsilon);

  std::size_t frames() const { return frames_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double objective(const ComplexVideo &x) const { return evaluate(x, nullptr); }
  double evaluate(const ComplexVideo &x, ComplexVideo *gradient) const;

  /// A^H A x, for the Lipschitz estimate.
  ComplexVideo normal(const ComplexVideo &x) const;
  /// Largest eigenvalue of A^H A by power iteration from a fixed start.
  double data_lipschitz(int iterations) const;
  /// Coil-combined, density-compensated adjoint of the data.
  ComplexVideo adjoint_init(const DcfWeights &dcf) const;

  /// |x| * sqrt(sum_c |S_c|^2): the root-sum-of-squares of the coil images.
  ScalarVideo coil_rss(const ComplexVideo &x) const;

 private:
  const RadialKspace &y_;
  const CoilSet &coils_;
  const NufftPlan &plan_;
  double lambda_, epsilon_;
  std::size_t frames_, rows_, cols_;
};

struct CsResult {
  ComplexVideo image;
  std::vector<double> objective;  // before the first step, then after each step
  double lipschitz = 0.0;
  double step = 0.0;
};

/// Fixed-step gradient descent from the density-compensated adjoint. The step
/// is 2 * step_safety / L with L = (power estimate of |A^H A|) + 4 lambda / eps,
/// the latter bounding the curvature of the smoothed temporal TV term.
CsResult cs_reconstruct(const RadialKspace &y, const CoilSet &coils, const NufftPlan &plan,
                        const DcfWeights &dcf, const CsParams &params);

}  // namespace fracsynth
