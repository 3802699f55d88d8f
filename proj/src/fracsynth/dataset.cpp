#include "fracsynth/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracsynth/container.hpp"

namespace fracsynth {

namespace fs = std::filesystem;

Split split_dataset(std::size_t n) {
  if (n < 3) fail(ErrorCode::InvalidArgument, "splitting needs at least 3 examples");
  const double dn = static_cast<double>(n);
  std::size_t sizes[3];
  sizes[0] = static_cast<std::size_t>(std::llround(0.75 * dn));
  sizes[1] = static_cast<std::size_t>(std::llround(0.10 * dn));
  sizes[1] = std::min(sizes[1], n - sizes[0]);
  sizes[2] = n - sizes[0] - sizes[1];
  for (int i = 0; i < 3; ++i) {
    while (sizes[i] == 0) {
      int largest = 0;
      for (int j = 1; j < 3; ++j)
        if (sizes[j] > sizes[largest]) largest = j;
      --sizes[largest];
      ++sizes[i];
    }
  }
  Split s;
  std::size_t next = 0;
  auto fill = [&next](std::vector<std::size_t> &part, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) part.push_back(next++);
  };
  fill(s.train, sizes[0]);
  fill(s.val, sizes[1]);
  fill(s.test, sizes[2]);
  return s;
}

std::string example_dir_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", index);
  return buf;
}

void write_json(const nlohmann::json &doc, const fs::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
}

nlohmann::json read_json(const fs::path &path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception &ex) {
    fail(ErrorCode::Io, path.string() + ": " + ex.what());
  }
}

nlohmann::json write_example(const DatasetExample &ex, const fs::path &dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());
  write_array(to_array(ex.input), dir / "input.arr");
  write_array(to_array(ex.target), dir / "target.arr");
  write_array(to_array(ex.radial), dir / "radial.arr");
  write_array(to_array(ex.coils), dir / "coils.arr");
  write_json(ex.meta, dir / "meta.json");

  nlohmann::json record = ex.meta;
  record["files"] = {{"input", "input.arr"}, {"target", "target.arr"},
                     {"radial", "radial.arr"}, {"coils", "coils.arr"},
                     {"meta", "meta.json"}};
  return record;
}

DatasetExample read_example(const fs::path &dir) {
  for (const char *name : {"input.arr", "target.arr", "meta.json"})
    if (!fs::exists(dir / name)) fail(ErrorCode::Io, "missing " + (dir / name).string());
  DatasetExample ex;
  ex.input = multicoil_from(read_array(dir / "input.arr"));
  ex.target = scalar_video_from(read_array(dir / "target.arr"));
  ex.meta = read_json(dir / "meta.json");
  ex.index = ex.meta.value("index", std::size_t{0});
  if (fs::exists(dir / "radial.arr")) ex.radial = radial_from(read_array(dir / "radial.arr"));
  if (fs::exists(dir / "coils.arr")) ex.coils = coilset_from(read_array(dir / "coils.arr"));
  return ex;
}

}  // namespace fracsynth
