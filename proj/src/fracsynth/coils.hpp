#pragma once

#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/forward.hpp"

namespace fracsynth {

/// Projection of C physical coils onto the top n_out left singular vectors
/// of the (C x M) coil-by-sample matrix.
struct CoilCompression {
  std::size_t n_in = 0;
  std::size_t n_out = 0;
  std::vector<cplx> basis;               // C x C, column k is singular vector k
  std::vector<double> singular_values;   // descending, length C
  double retained_energy = 0.0;          // sum_{k<n_out} s_k^2 / sum_k s_k^2

  /// Virtual coil k = sum_c conj(basis[c, k]) * coil c.
  CoilStack apply(const CoilStack &in) const;
  CoilSet apply(const CoilSet &maps) const;
};

CoilCompression compute_coil_compression(const CoilStack &data, std::size_t n_out);

MultiCoilVideo svd_coil_compress(const MultiCoilVideo &mc, std::size_t n_out);
CartesianKspace svd_coil_compress(const CartesianKspace &k, std::size_t n_out);

/// sqrt(sum_c |mc[c]|^2) per pixel.
ScalarVideo rss_combine(const CoilStack &mc);

}  // namespace fracsynth
