#include "fracsynth/coils.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracsynth/parallel.hpp"

namespace fracsynth {

CoilCompression compute_coil_compression(const CoilStack &data, std::size_t n_out) {
  const std::size_t nc = data.coils;
  if (n_out < 1 || n_out > nc)
    fail(ErrorCode::InvalidArgument, "compressed coil count must lie in [1, coils]");
  const std::size_t m = data.frames * data.frame_size();

  // Gram matrix G = A A^H. Each entry is summed serially in index order so
  // the result does not depend on the thread count.
  Eigen::MatrixXcd gram(nc, nc);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < nc; ++i)
    for (std::size_t j = i; j < nc; ++j) pairs.emplace_back(i, j);
  std::vector<cplx> values(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const cplx *a = data.data.data() + pairs[p].first * m;
    const cplx *b = data.data.data() + pairs[p].second * m;
    cplx acc = 0.0;
    for (std::size_t s = 0; s < m; ++s) acc += a[s] * std::conj(b[s]);
    values[p] = acc;
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pairs[p];
    gram(i, j) = values[p];
    gram(j, i) = std::conj(values[p]);
  }
  if (gram.diagonal().real().sum() == 0.0)
    fail(ErrorCode::DegenerateInput, "coil compression of all-zero data");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  std::vector<std::size_t> order(nc);
  std::iota(order.begin(), order.end(), 0);
  const auto &lambda = eig.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambda(a) > lambda(b); });

  CoilCompression cc;
  cc.n_in = nc;
  cc.n_out = n_out;
  cc.basis.resize(nc * nc);
  cc.singular_values.resize(nc);
  double total = 0.0, kept = 0.0;
  for (std::size_t k = 0; k < nc; ++k) {
    const double l = std::max(0.0, lambda(order[k]));
    cc.singular_values[k] = std::sqrt(l);
    total += l;
    if (k < n_out) kept += l;
    for (std::size_t c = 0; c < nc; ++c) cc.basis[c * nc + k] = eig.eigenvectors()(c, order[k]);
  }
  cc.retained_energy = kept / total;
  return cc;
}

CoilStack CoilCompression::apply(const CoilStack &in) const {
  if (in.coils != n_in) fail(ErrorCode::ShapeMismatch, "coil count differs from the compression basis");
  CoilStack out(n_out, in.frames, in.rows, in.cols);
  const std::size_t m = in.frames * in.frame_size();
  parallel_for(n_out, [&](std::size_t k) {
    cplx *dst = out.data.data() + k * m;
    for (std::size_t c = 0; c < n_in; ++c) {
      const cplx u = std::conj(basis[c * n_in + k]);
      const cplx *src = in.data.data() + c * m;
      for (std::size_t s = 0; s < m; ++s) dst[s] += u * src[s];
    }
  });
  return out;
}

CoilSet CoilCompression::apply(const CoilSet &maps) const {
  if (maps.size() != n_in) fail(ErrorCode::ShapeMismatch, "coil count differs from the compression basis");
  CoilStack stack(n_in, 1, maps.maps[0].rows, maps.maps[0].cols);
  for (std::size_t c = 0; c < n_in; ++c)
    std::copy(maps.maps[c].data.begin(), maps.maps[c].data.end(), stack.frame(c, 0).begin());
  const CoilStack mixed = apply(stack);
  CoilSet out;
  for (std::size_t k = 0; k < n_out; ++k) {
    Image<cplx> map(stack.rows, stack.cols);
    std::copy(mixed.frame(k, 0).begin(), mixed.frame(k, 0).end(), map.data.begin());
    out.maps.push_back(std::move(map));
  }
  return out;
}

MultiCoilVideo svd_coil_compress(const MultiCoilVideo &mc, std::size_t n_out) {
  MultiCoilVideo out;
  static_cast<CoilStack &>(out) = compute_coil_compression(mc, n_out).apply(mc);
  return out;
}

CartesianKspace svd_coil_compress(const CartesianKspace &k, std::size_t n_out) {
  CartesianKspace out;
  static_cast<CoilStack &>(out) = compute_coil_compression(k, n_out).apply(k);
  return out;
}

ScalarVideo rss_combine(const CoilStack &mc) {
  if (mc.coils < 1) fail(ErrorCode::InvalidArgument, "rss of an empty coil stack");
  ScalarVideo out(mc.frames, mc.rows, mc.cols);
  const std::size_t m = out.data.size();
  parallel_for(mc.frames, [&](std::size_t t) {
    const std::size_t fs = mc.frame_size();
    for (std::size_t i = t * fs; i < (t + 1) * fs; ++i) {
      double acc = 0.0;
      for (std::size_t c = 0; c < mc.coils; ++c) acc += std::norm(mc.data[c * m + i]);
      out.data[i] = std::sqrt(acc);
    }
  });
  return out;
}

}  // namespace fracsynth
