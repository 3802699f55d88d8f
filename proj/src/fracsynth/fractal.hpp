#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/quaternion.hpp"

namespace fracsynth {

/// Endpoint-inclusive uniform 4D grid over X x Y x Z x T.
struct GridSpec4 {
  std::array<double, 2> x_range{-1.0, 1.0};
  std::array<double, 2> y_range{-1.0, 1.0};
  std::array<double, 2> z_range{-0.5, 0.5};
  std::array<double, 2> t_range{-0.2, 0.2};
  std::size_t nx = 17;
  std::size_t ny = 17;
  std::size_t nz = 17;
  std::size_t nt = 17;

  static GridSpec4 uniform(std::size_t n) { return GridSpec4{.nx = n, .ny = n, .nz = n, .nt = n}; }

  void validate() const;
};

/// Coordinate of sample i on an axis with n samples; a single sample sits at
/// the midpoint.
double axis_coordinate(const std::array<double, 2> &range, std::size_t n,
                       std::size_t i);

struct IterationParams {
  int max_iter = 100;
  double escape_threshold = 4.0;

  void validate() const;
};

struct CountRange {
  int lo = 10;
  int hi = 30;
};

struct CatalogueEntry {
  Quaternion c;
  int count = 0;
};

struct CCatalogue {
  CountRange range;
  int max_iter = 100;
  std::vector<CatalogueEntry> entries;

  std::string to_json() const;
  static CCatalogue from_json(const std::string &text);
};

/// Smallest n >= 1 with |q_n| > threshold for q_n = q_{n-1}^2 + c, or
/// max_iter when the orbit stays bounded.
int julia_iterations(const Quaternion &q0, const Quaternion &c,
                     const IterationParams &params);

int mandelbrot_iterations(const Quaternion &c, const IterationParams &params);

/// Every grid coordinate whose Mandelbrot count lies in [lo, hi], in
/// t-major, then z, y, x order. Throws EmptyCatalogue when nothing qualifies.
CCatalogue scan_c_catalogue(const GridSpec4 &grid, const IterationParams &params,
                            CountRange range);

/// The z = 0 plane of the Julia field: nt frames of ny x nx counts.
ScalarVideo render_julia_slice(const Quaternion &c, const GridSpec4 &grid,
                               const IterationParams &params);

/// Full 4D field, laid out as [nt][nz][ny][nx].
std::vector<int> render_julia_volume(const Quaternion &c, const GridSpec4 &grid,
                                     const IterationParams &params);

}  // namespace fracsynth
