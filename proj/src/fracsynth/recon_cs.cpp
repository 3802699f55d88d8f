#include "fracsynth/recon_cs.hpp"

#include <algorithm>
#include <cmath>

#include "fracsynth/parallel.hpp"
#include "fracsynth/rng.hpp"

namespace fracsynth {

void CsParams::validate() const {
  if (!(lambda >= 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be >= 0");
  if (n_iters < 1) fail(ErrorCode::InvalidArgument, "n_iters must be >= 1");
  if (!(tv_epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "tv_epsilon must be > 0");
  if (!(step_safety > 0.0 && step_safety < 1.0))
    fail(ErrorCode::InvalidArgument, "step_safety must lie in (0, 1)");
  if (power_iters < 1) fail(ErrorCode::InvalidArgument, "power_iters must be >= 1");
}

double temporal_tv(const ComplexVideo &v, double epsilon) {
  if (v.frames < 2) fail(ErrorCode::SingleFrame, "temporal TV needs at least two frames");
  const std::size_t fs = v.frame_size();
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < v.frames; ++t)
    for (std::size_t i = 0; i < fs; ++i) {
      const cplx d = v.data[(t + 1) * fs + i] - v.data[t * fs + i];
      total += std::sqrt(std::norm(d) + epsilon * epsilon) - epsilon;
    }
  return total;
}

CsProblem::CsProblem(const RadialKspace &y, const CoilSet &coils, const NufftPlan &plan,
                     double lambda, double epsilon)
    : y_(y),
      coils_(coils),
      plan_(plan),
      lambda_(lambda),
      epsilon_(epsilon),
      frames_(y.frames),
      rows_(plan.rows()),
      cols_(plan.cols()) {
  if (coils.size() != y.coils) fail(ErrorCode::ShapeMismatch, "coil count differs from the data");
  for (const auto &m : coils.maps)
    if (m.rows != rows_ || m.cols != cols_)
      fail(ErrorCode::ShapeMismatch, "coil map size differs from the NUFFT plan");
  if (y.frames != plan.n_frames()) fail(ErrorCode::ShapeMismatch, "frame count differs from the trajectory");
  for (std::size_t t = 0; t < y.frames; ++t)
    if (plan.frame_samples(t) != y.samples)
      fail(ErrorCode::ShapeMismatch, "sample count differs from the trajectory");
  if (lambda_ > 0.0 && frames_ < 2) fail(ErrorCode::SingleFrame, "temporal TV needs at least two frames");
}

double CsProblem::evaluate(const ComplexVideo &x, ComplexVideo *gradient) const {
  if (x.frames != frames_ || x.rows != rows_ || x.cols != cols_)
    fail(ErrorCode::ShapeMismatch, "image shape differs from the problem");
  const std::size_t nc = coils_.size(), fs = rows_ * cols_;

  // Per-(coil, frame) residual energy and back-projection, reduced in fixed order.
  std::vector<double> energy(nc * frames_);
  std::vector<std::vector<cplx>> back(gradient ? nc * frames_ : 0);
  parallel_for(nc * frames_, [&](std::size_t job) {
    const std::size_t c = job / frames_, t = job % frames_;
    const auto &map = coils_.maps[c].data;
    const auto xt = x.frame(t);
    std::vector<cplx> img(fs);
    for (std::size_t i = 0; i < fs; ++i) img[i] = map[i] * xt[i];
    auto r = plan_.forward(img, t);
    const auto yt = y_.frame(c, t);
    double e = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      r[i] -= yt[i];
      e += std::norm(r[i]);
    }
    energy[job] = e;
    if (gradient) {
      auto bp = plan_.adjoint(r, t);
      for (std::size_t i = 0; i < fs; ++i) bp[i] *= std::conj(map[i]);
      back[job] = std::move(bp);
    }
  });

  double data = 0.0;
  for (double e : energy) data += e;
  double value = 0.5 * data;

  if (gradient) {
    *gradient = ComplexVideo(frames_, rows_, cols_);
    parallel_for(frames_, [&](std::size_t t) {
      auto g = gradient->frame(t);
      for (std::size_t c = 0; c < nc; ++c) {
        const auto &bp = back[c * frames_ + t];
        for (std::size_t i = 0; i < fs; ++i) g[i] += bp[i];
      }
    });
  }

  if (lambda_ > 0.0) {
    const double eps2 = epsilon_ * epsilon_;
    std::vector<double> tv(frames_ - 1);
    parallel_for(frames_ - 1, [&](std::size_t t) {
      double acc = 0.0;
      for (std::size_t i = 0; i < fs; ++i) {
        const cplx d = x.data[(t + 1) * fs + i] - x.data[t * fs + i];
        acc += std::sqrt(std::norm(d) + eps2) - epsilon_;
      }
      tv[t] = acc;
    });
    double total = 0.0;
    for (double v : tv) total += v;
    value += lambda_ * total;

    if (gradient) {
      parallel_for(frames_, [&](std::size_t t) {
        auto g = gradient->frame(t);
        for (std::size_t i = 0; i < fs; ++i) {
          cplx acc = 0.0;
          if (t + 1 < frames_) {
            const cplx d = x.data[(t + 1) * fs + i] - x.data[t * fs + i];
            acc -= d / std::sqrt(std::norm(d) + eps2);
          }
          if (t > 0) {
            const cplx d = x.data[t * fs + i] - x.data[(t - 1) * fs + i];
            acc += d / std::sqrt(std::norm(d) + eps2);
          }
          g[i] += lambda_ * acc;
        }
      });
    }
  }
  return value;
}

ComplexVideo CsProblem::normal(const ComplexVideo &x) const {
  const std::size_t nc = coils_.size(), fs = rows_ * cols_;
  std::vector<std::vector<cplx>> back(nc * frames_);
  parallel_for(nc * frames_, [&](std::size_t job) {
    const std::size_t c = job / frames_, t = job % frames_;
    const auto &map = coils_.maps[c].data;
    const auto xt = x.frame(t);
    std::vector<cplx> img(fs);
    for (std::size_t i = 0; i < fs; ++i) img[i] = map[i] * xt[i];
    auto bp = plan_.adjoint(plan_.forward(img, t), t);
    for (std::size_t i = 0; i < fs; ++i) bp[i] *= std::conj(map[i]);
    back[job] = std::move(bp);
  });
  ComplexVideo out(frames_, rows_, cols_);
  parallel_for(frames_, [&](std::size_t t) {
    auto o = out.frame(t);
    for (std::size_t c = 0; c < nc; ++c)
      for (std::size_t i = 0; i < fs; ++i) o[i] += back[c * frames_ + t][i];
  });
  return out;
}

double CsProblem::data_lipschitz(int iterations) const {
  ComplexVideo v(frames_, rows_, cols_);
  Rng rng(0x5EEDULL);
  for (auto &z : v.data) z = {rng.normal(), rng.normal()};
  auto norm = [](const ComplexVideo &a) {
    double s = 0.0;
    for (const auto &z : a.data) s += std::norm(z);
    return std::sqrt(s);
  };
  double estimate = 0.0;
  for (int k = 0; k < iterations; ++k) {
    const double nv = norm(v);
    if (nv == 0.0) return 0.0;
    for (auto &z : v.data) z /= nv;
    v = normal(v);
    estimate = norm(v);
  }
  return estimate;
}

ComplexVideo CsProblem::adjoint_init(const DcfWeights &dcf) const {
  const std::size_t nc = coils_.size(), fs = rows_ * cols_;
  std::vector<double> sens(fs);
  for (std::size_t c = 0; c < nc; ++c)
    for (std::size_t i = 0; i < fs; ++i) sens[i] += std::norm(coils_.maps[c].data[i]);
  const double floor = 1e-3 * *std::max_element(sens.begin(), sens.end());

  ComplexVideo out(frames_, rows_, cols_);
  parallel_for(frames_, [&](std::size_t t) {
    auto o = out.frame(t);
    for (std::size_t c = 0; c < nc; ++c) {
      const auto img = plan_.adjoint(y_.frame(c, t), t, dcf.w.at(t));
      const auto &map = coils_.maps[c].data;
      for (std::size_t i = 0; i < fs; ++i) o[i] += std::conj(map[i]) * img[i];
    }
    for (std::size_t i = 0; i < fs; ++i) o[i] /= std::max(sens[i], floor);
  });
  return out;
}

ScalarVideo CsProblem::coil_rss(const ComplexVideo &x) const {
  const std::size_t fs = rows_ * cols_;
  std::vector<double> sens(fs);
  for (const auto &m : coils_.maps)
    for (std::size_t i = 0; i < fs; ++i) sens[i] += std::norm(m.data[i]);
  ScalarVideo out(x.frames, x.rows, x.cols);
  for (std::size_t t = 0; t < x.frames; ++t)
    for (std::size_t i = 0; i < fs; ++i)
      out.data[t * fs + i] = std::abs(x.data[t * fs + i]) * std::sqrt(sens[i]);
  return out;
}

CsResult cs_reconstruct(const RadialKspace &y, const CoilSet &coils, const NufftPlan &plan,
                        const DcfWeights &dcf, const CsParams &params) {
  params.validate();
  const CsProblem problem(y, coils, plan, params.lambda, params.tv_epsilon);

  CsResult result;
  result.lipschitz = problem.data_lipschitz(params.power_iters) +
                     4.0 * params.lambda / params.tv_epsilon;
  if (!(result.lipschitz > 0.0)) fail(ErrorCode::DegenerateInput, "normal operator is zero");
  result.step = 2.0 * params.step_safety / result.lipschitz;

  ComplexVideo x = problem.adjoint_init(dcf);
  ComplexVideo grad;
  for (int k = 0; k < params.n_iters; ++k) {
    const double f = problem.evaluate(x, &grad);
    if (!std::isfinite(f)) fail(ErrorCode::NonFiniteObjective, "CS objective diverged");
    result.objective.push_back(f);
    for (std::size_t i = 0; i < x.data.size(); ++i) x.data[i] -= result.step * grad.data[i];
  }
  const double f = problem.objective(x);
  if (!std::isfinite(f)) fail(ErrorCode::NonFiniteObjective, "CS objective diverged");
  result.objective.push_back(f);
  result.image = std::move(x);
  return result;
}

}  // namespace fracsynth
