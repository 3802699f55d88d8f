#include <doctest.h>

#include <cstring>
#include <set>

#include "fracsynth/container.hpp"
#include "fracsynth/pipeline.hpp"
#include "support.hpp"

using namespace fracsynth;

namespace {

PipelineConfig small_config() {
  PipelineConfig cfg;
  cfg.size = 24;
  cfg.frames = 4;
  cfg.coils = 6;
  cfg.compressed_coils = 4;
  cfg.spokes = 7;
  cfg.examples = 3;
  cfg.seed = 17;
  return cfg;
}

bool same_bytes(const std::filesystem::path &a, const std::filesystem::path &b) {
  const auto x = encode_array(read_array(a)), y = encode_array(read_array(b));
  return x == y;
}

}  // namespace

TEST_CASE("split sizes") {
  const Split s = split_dataset(692);
  CHECK(s.train.size() == 519);
  CHECK(s.val.size() == 69);
  CHECK(s.test.size() == 104);

  const Split t = split_dataset(3);
  CHECK(t.train.size() == 1);
  CHECK(t.val.size() == 1);
  CHECK(t.test.size() == 1);
  CHECK_THROWS_AS(split_dataset(2), Error);

  for (std::size_t n : {3, 4, 7, 10, 50, 101, 692, 1000}) {
    const Split p = split_dataset(n);
    std::set<std::size_t> all;
    for (const auto *part : {&p.train, &p.val, &p.test}) {
      CHECK(!part->empty());
      all.insert(part->begin(), part->end());
    }
    CAPTURE(n);
    CHECK(all.size() == n);
    CHECK(p.train.size() + p.val.size() + p.test.size() == n);
    CHECK(*all.rbegin() == n - 1);
  }
}

TEST_CASE("directory names") {
  CHECK(example_dir_name(0) == "000000");
  CHECK(example_dir_name(42) == "000042");
  CHECK(example_dir_name(691) == "000691");
}

TEST_CASE("example write and read") {
  const auto cfg = small_config();
  const CCatalogue cat = scan_catalogue(cfg);
  const RadialSampler sampler(cfg.size, cfg.frames, cfg.spokes, cfg.readout());
  const DatasetExample ex = generate_example(cfg, cat, 1, sampler);

  test::TempDir dir;
  const auto record = write_example(ex, dir / "ex");
  for (const char *f : {"input.arr", "target.arr", "radial.arr", "coils.arr", "meta.json"})
    CHECK(std::filesystem::exists(dir / "ex" / f));
  CHECK(record["files"]["input"] == "input.arr");

  const Array input = read_array(dir / "ex" / "input.arr");
  CHECK(input.dtype == Dtype::C64);
  CHECK(input.shape == std::vector<std::size_t>{4, 4, 24, 24});
  const Array target = read_array(dir / "ex" / "target.arr");
  CHECK(target.dtype == Dtype::F32);
  CHECK(target.shape == std::vector<std::size_t>{4, 24, 24});

  const DatasetExample back = read_example(dir / "ex");
  CHECK(back.index == 1);
  CHECK(encode_array(to_array(back.input)) == encode_array(to_array(ex.input)));
  CHECK(encode_array(to_array(back.target)) == encode_array(to_array(ex.target)));
  CHECK(encode_array(to_array(back.radial)) == encode_array(to_array(ex.radial)));
  CHECK(back.meta == ex.meta);

  // Writing what was read reproduces the files.
  write_example(back, dir / "again");
  for (const char *f : {"input.arr", "target.arr", "radial.arr", "coils.arr"})
    CHECK(same_bytes(dir / "ex" / f, dir / "again" / f));

  const auto &entry = cat.entries[1 % cat.entries.size()];
  const auto c = back.meta["c"].get<std::vector<double>>();
  CHECK(c == std::vector<double>{entry.c.w, entry.c.x, entry.c.y, entry.c.z});
  CHECK(back.meta["c_count"] == entry.count);

  CHECK_THROWS_AS(read_example(dir / "nowhere"), Error);
}

TEST_CASE("different indices draw different parameters") {
  const auto cfg = small_config();
  const CCatalogue cat = scan_catalogue(cfg);
  const RadialSampler sampler(cfg.size, cfg.frames, cfg.spokes, cfg.readout());
  const auto a = generate_example(cfg, cat, 0, sampler).meta;
  const auto b = generate_example(cfg, cat, 1, sampler).meta;
  CHECK(a["example_seed"] != b["example_seed"]);
  CHECK(a["synthesis"] != b["synthesis"]);
  CHECK(a["mask"] != b["mask"]);
  CHECK(a["coils"] != b["coils"]);
  CHECK(a["noise_sigma"] != b["noise_sigma"]);
  CHECK(a["phase_control"] != b["phase_control"]);

  PipelineConfig other = cfg;
  other.seed = 18;
  CHECK(generate_example(other, cat, 0, sampler).meta["synthesis"] != a["synthesis"]);
  CHECK(generate_example(cfg, cat, 0, sampler).meta == a);
}

TEST_CASE("json helpers") {
  test::TempDir dir;
  const nlohmann::json doc = {{"a", 1}, {"b", {1.5, "x"}}};
  write_json(doc, dir / "d.json");
  CHECK(read_json(dir / "d.json") == doc);
  CHECK_THROWS_AS(read_json(dir / "missing.json"), Error);
}
