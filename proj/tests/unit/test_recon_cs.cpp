#include <doctest.h>

#include <cmath>

#include "fracsynth/forward.hpp"
#include "fracsynth/pair.hpp"
#include "fracsynth/recon_cs.hpp"
#include "support.hpp"

using namespace fracsynth;

namespace {

double brute_tv(const ComplexVideo &v, double eps) {
  double s = 0;
  for (std::size_t t = 0; t + 1 < v.frames; ++t)
    for (std::size_t y = 0; y < v.rows; ++y)
      for (std::size_t x = 0; x < v.cols; ++x) {
        const cplx d = v(t + 1, y, x) - v(t, y, x);
        s += std::sqrt(d.real() * d.real() + d.imag() * d.imag() + eps * eps) - eps;
      }
  return s;
}

struct Instance {
  std::size_t n, frames;
  CoilSet coils;
  Trajectory traj;
  NufftPlan plan;
  DcfWeights dcf;
  ComplexVideo truth;
  RadialKspace y;

  Instance(std::size_t n_, std::size_t t_, std::size_t spokes, std::size_t ncoils, unsigned seed)
      : n(n_),
        frames(t_),
        coils([&] {
          Rng rng(seed);
          return make_coil_maps(n_, n_, ncoils, rng);
        }()),
        traj(golden_angle_trajectory(t_, spokes, 2 * n_, n_)),
        plan(n_, n_, traj),
        dcf(density_compensation(traj)),
        truth(t_, n_, n_) {
    const double c = 0.5 * static_cast<double>(n);
    for (std::size_t t = 0; t < frames; ++t)
      for (std::size_t yy = 0; yy < n; ++yy)
        for (std::size_t x = 0; x < n; ++x) {
          const double r = std::hypot(x - c - 0.5 * t, yy - c) / (0.2 * n);
          truth(t, yy, x) = std::exp(-r * r) * cplx(1.0, 0.3);
        }
    MultiCoilVideo mc(coils.size(), frames, n, n);
    for (std::size_t k = 0; k < coils.size(); ++k)
      for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t i = 0; i < n * n; ++i) mc.frame(k, t)[i] = coils.maps[k].data[i] * truth.frame(t)[i];
    y = radial_sample(mc, plan);
  }
};

}  // namespace

TEST_CASE("temporal TV") {
  const ComplexVideo constant(4, 3, 3, cplx(0.4, -1.0));
  CHECK(temporal_tv(constant, 1e-6) == 0.0);

  ComplexVideo jump(2, 1, 1);
  jump.data = {0.0, 1.0};
  CHECK(temporal_tv(jump, 1e-12) == doctest::Approx(1.0).epsilon(1e-12));

  ComplexVideo v(5, 4, 6);
  v.data = test::random_complex(v.data.size(), 3);
  for (double eps : {1e-6, 1e-3, 0.5}) CHECK(temporal_tv(v, eps) == doctest::Approx(brute_tv(v, eps)).epsilon(1e-12));

  CHECK_THROWS_AS(temporal_tv(ComplexVideo(1, 2, 2), 1e-6), Error);
}

TEST_CASE("params validation") {
  CsParams p;
  CHECK(p.lambda == 5e-4);
  CHECK(p.n_iters == 50);
  CHECK(p.tv_epsilon == 1e-6);
  CHECK(p.step_safety == 0.9);
  CHECK_NOTHROW(p.validate());
  p.lambda = -1;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.n_iters = 0;
  CHECK_THROWS_AS(p.validate(), Error);
  p = {};
  p.tv_epsilon = 0;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("gradient matches central finite differences") {
  Instance inst(8, 3, 5, 3, 7);
  // Perturb the data so the residual is nonzero.
  for (std::size_t i = 0; i < inst.y.data.size(); ++i) inst.y.data[i] += 0.05 * test::random_complex(1, 900 + i)[0];
  for (double eps : {1e-6, 1e-3}) {
    const CsProblem problem(inst.y, inst.coils, inst.plan, 0.3, eps);
    ComplexVideo x(3, 8, 8);
    x.data = test::random_complex(x.data.size(), 11);
    ComplexVideo g;
    problem.evaluate(x, &g);
    const double h = 1e-6;
    double worst = 0, gnorm = 0;
    for (const auto &z : g.data) gnorm = std::max(gnorm, std::abs(z));
    for (std::size_t i = 0; i < x.data.size(); ++i) {
      for (const cplx dir : {cplx(1, 0), cplx(0, 1)}) {
        ComplexVideo xp = x, xm = x;
        xp.data[i] += h * dir;
        xm.data[i] -= h * dir;
        const double fd = (problem.objective(xp) - problem.objective(xm)) / (2 * h);
        const double an = dir.real() != 0 ? g.data[i].real() : g.data[i].imag();
        worst = std::max(worst, std::abs(fd - an));
      }
    }
    CAPTURE(eps);
    CHECK(worst / gnorm < 1e-4);
  }
}

TEST_CASE("normal operator and power iteration") {
  Instance inst(12, 2, 7, 2, 3);
  const CsProblem problem(inst.y, inst.coils, inst.plan, 0.0, 1e-6);
  ComplexVideo a(2, 12, 12), b(2, 12, 12);
  a.data = test::random_complex(a.data.size(), 1);
  b.data = test::random_complex(b.data.size(), 2);
  // Self-adjoint and positive semidefinite.
  const cplx ab = test::dot(a.data, problem.normal(b).data), ba = test::dot(problem.normal(a).data, b.data);
  CHECK(std::abs(ab - ba) / std::abs(ab) < 1e-10);
  CHECK(test::dot(a.data, problem.normal(a).data).real() > 0.0);
  // The estimate bounds every Rayleigh quotient up to the power-iteration gap.
  const double l = problem.data_lipschitz(30);
  for (unsigned s = 0; s < 5; ++s) {
    ComplexVideo v(2, 12, 12);
    v.data = test::random_complex(v.data.size(), 50 + s);
    const double rq = test::dot(v.data, problem.normal(v).data).real() / std::pow(test::norm(v.data), 2);
    CHECK(rq <= l * 1.001);
  }
  CHECK(problem.data_lipschitz(10) == problem.data_lipschitz(10));
}

TEST_CASE("least squares recovery with dense sampling") {
  Instance inst(32, 4, 64, 6, 4);
  CsParams p;
  p.lambda = 0.0;
  const auto res = cs_reconstruct(inst.y, inst.coils, inst.plan, inst.dcf, p);
  CHECK(res.objective.size() == 51);
  CHECK(test::rel_l2(res.image.data, inst.truth.data) < 0.05);
}

TEST_CASE("objective descends and strong TV flattens time") {
  Instance inst(24, 4, 13, 4, 8);
  for (std::size_t i = 0; i < inst.y.data.size(); ++i) inst.y.data[i] += 0.01 * test::random_complex(1, 4000 + i)[0];
  CsParams p;
  const auto res = cs_reconstruct(inst.y, inst.coils, inst.plan, inst.dcf, p);
  REQUIRE(res.objective.size() == 51);
  for (std::size_t k = 4; k < res.objective.size(); ++k) CHECK(res.objective[k] <= res.objective[k - 1] * (1 + 1e-8));
  CHECK(res.objective.back() < res.objective.front());
  CHECK(res.step == doctest::Approx(1.8 / res.lipschitz).epsilon(1e-15));

  p.lambda = 1e3;
  const CsProblem problem(inst.y, inst.coils, inst.plan, p.lambda, p.tv_epsilon);
  const double tv0 = temporal_tv(problem.adjoint_init(inst.dcf), p.tv_epsilon);
  const auto strong = cs_reconstruct(inst.y, inst.coils, inst.plan, inst.dcf, p);
  CHECK(temporal_tv(strong.image, p.tv_epsilon) < tv0);
  for (std::size_t k = 1; k < strong.objective.size(); ++k) CHECK(strong.objective[k] <= strong.objective[k - 1]);
}

TEST_CASE("shape errors") {
  Instance inst(8, 2, 3, 2, 1);
  CoilSet one = inst.coils;
  one.maps.pop_back();
  CHECK_THROWS_AS(CsProblem(inst.y, one, inst.plan, 0.1, 1e-6), Error);
  const CsProblem problem(inst.y, inst.coils, inst.plan, 0.1, 1e-6);
  CHECK_THROWS_AS(problem.objective(ComplexVideo(3, 8, 8)), Error);
}
