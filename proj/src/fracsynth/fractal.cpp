#include "fracsynth/fractal.hpp"

#include <json.hpp>

#include "fracsynth/parallel.hpp"

namespace fracsynth {

using nlohmann::json;

void GridSpec4::validate() const {
  if (nx == 0 || ny == 0 || nz == 0 || nt == 0)
    fail(ErrorCode::InvalidArgument, "grid counts must be >= 1");
  for (const auto *r : {&x_range, &y_range, &z_range, &t_range}) {
    if (!((*r)[0] <= (*r)[1]))
      fail(ErrorCode::InvalidArgument, "grid extent must satisfy lo <= hi");
  }
}

double axis_coordinate(const std::array<double, 2> &range, std::size_t n,
                       std::size_t i) {
  if (n == 1) return 0.5 * (range[0] + range[1]);
  const double step = (range[1] - range[0]) / static_cast<double>(n - 1);
  // Pin the last sample to the endpoint exactly.
  if (i + 1 == n) return range[1];
  return range[0] + step * static_cast<double>(i);
}

void IterationParams::validate() const {
  if (max_iter <= 30)
    fail(ErrorCode::InvalidArgument, "max_iter must exceed 30");
  if (!(escape_threshold > 0.0))
    fail(ErrorCode::InvalidArgument, "escape threshold must be positive");
}

int julia_iterations(const Quaternion &q0, const Quaternion &c,
                     const IterationParams &params) {
  const double bound2 = params.escape_threshold * params.escape_threshold;
  Quaternion q = q0;
  for (int n = 1; n <= params.max_iter; ++n) {
    q = quat_square(q) + c;
    if (q.norm2() > bound2) return n;
  }
  return params.max_iter;
}

int mandelbrot_iterations(const Quaternion &c, const IterationParams &params) {
  return julia_iterations(Quaternion{}, c, params);
}

CCatalogue scan_c_catalogue(const GridSpec4 &grid, const IterationParams &params,
                            CountRange range) {
  grid.validate();
  params.validate();
  if (range.lo > range.hi || range.hi > params.max_iter)
    fail(ErrorCode::InvalidArgument, "catalogue range must satisfy lo <= hi <= max_iter");

  const std::size_t plane = grid.nx * grid.ny;
  const std::size_t planes = grid.nt * grid.nz;
  std::vector<std::vector<CatalogueEntry>> per_plane(planes);
  parallel_for(planes, [&](std::size_t p) {
    const std::size_t it = p / grid.nz;
    const std::size_t iz = p % grid.nz;
    const double t = axis_coordinate(grid.t_range, grid.nt, it);
    const double z = axis_coordinate(grid.z_range, grid.nz, iz);
    for (std::size_t k = 0; k < plane; ++k) {
      const Quaternion c{axis_coordinate(grid.x_range, grid.nx, k % grid.nx),
                         axis_coordinate(grid.y_range, grid.ny, k / grid.nx), z, t};
      const int n = mandelbrot_iterations(c, params);
      if (n >= range.lo && n <= range.hi) per_plane[p].push_back({c, n});
    }
  });

  CCatalogue out{range, params.max_iter, {}};
  for (auto &entries : per_plane)
    out.entries.insert(out.entries.end(), entries.begin(), entries.end());
  if (out.entries.empty())
    fail(ErrorCode::EmptyCatalogue,
         "no grid point has a Mandelbrot count in [" + std::to_string(range.lo) +
             ", " + std::to_string(range.hi) + "]; refine or move the scan grid");
  return out;
}

ScalarVideo render_julia_slice(const Quaternion &c, const GridSpec4 &grid,
                               const IterationParams &params) {
  grid.validate();
  ScalarVideo out(grid.nt, grid.ny, grid.nx);
  parallel_for(grid.nt * grid.ny, [&](std::size_t row) {
    const std::size_t it = row / grid.ny;
    const std::size_t iy = row % grid.ny;
    const double t = axis_coordinate(grid.t_range, grid.nt, it);
    const double y = axis_coordinate(grid.y_range, grid.ny, iy);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Quaternion q0{axis_coordinate(grid.x_range, grid.nx, ix), y, 0.0, t};
      out(it, iy, ix) = julia_iterations(q0, c, params);
    }
  });
  return out;
}

std::vector<int> render_julia_volume(const Quaternion &c, const GridSpec4 &grid,
                                     const IterationParams &params) {
  grid.validate();
  std::vector<int> out(grid.nt * grid.nz * grid.ny * grid.nx);
  parallel_for(grid.nt * grid.nz * grid.ny, [&](std::size_t row) {
    const std::size_t iy = row % grid.ny;
    const std::size_t iz = (row / grid.ny) % grid.nz;
    const std::size_t it = row / (grid.ny * grid.nz);
    const double t = axis_coordinate(grid.t_range, grid.nt, it);
    const double z = axis_coordinate(grid.z_range, grid.nz, iz);
    const double y = axis_coordinate(grid.y_range, grid.ny, iy);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const Quaternion q0{axis_coordinate(grid.x_range, grid.nx, ix), y, z, t};
      out[row * grid.nx + ix] = julia_iterations(q0, c, params);
    }
  });
  return out;
}

std::string CCatalogue::to_json() const {
  json doc;
  doc["range"] = {range.lo, range.hi};
  doc["max_iter"] = max_iter;
  json list = json::array();
  for (const auto &e : entries)
    list.push_back({{"c", {e.c.w, e.c.x, e.c.y, e.c.z}}, {"count", e.count}});
  doc["entries"] = std::move(list);
  return doc.dump(1);
}

CCatalogue CCatalogue::from_json(const std::string &text) {
  CCatalogue out;
  try {
    const json doc = json::parse(text);
    out.range = {doc.at("range").at(0).get<int>(), doc.at("range").at(1).get<int>()};
    out.max_iter = doc.at("max_iter").get<int>();
    for (const auto &e : doc.at("entries")) {
      const auto &c = e.at("c");
      out.entries.push_back({{c.at(0).get<double>(), c.at(1).get<double>(),
                              c.at(2).get<double>(), c.at(3).get<double>()},
                             e.at("count").get<int>()});
    }
  } catch (const json::exception &ex) {
    fail(ErrorCode::InvalidArgument, std::string("malformed catalogue: ") + ex.what());
  }
  if (out.entries.empty()) fail(ErrorCode::EmptyCatalogue, "catalogue has no entries");
  return out;
}

}  // namespace fracsynth
