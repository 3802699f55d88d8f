#include <doctest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <random>

#include "fracsynth/container.hpp"
#include "support.hpp"

using namespace fracsynth;

namespace {

ErrorCode code_of(const std::vector<std::uint8_t> &bytes) {
  try {
    decode_array(bytes);
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("decode succeeded");
  return ErrorCode::Io;
}

Array small_f32() {
  Array a{Dtype::F32, {2, 3}, {1, 2, 3, 4, 5, 6}};
  return a;
}

}  // namespace

TEST_CASE("layout") {
  const auto bytes = encode_array(small_f32());
  REQUIRE(bytes.size() > 12);
  CHECK(std::memcmp(bytes.data(), "FSYN0001", 8) == 0);
  const std::uint32_t hlen = bytes[8] | bytes[9] << 8 | bytes[10] << 16 | bytes[11] << 24;
  const std::string header(bytes.begin() + 12, bytes.begin() + 12 + hlen);
  const auto doc = nlohmann::json::parse(header);
  CHECK(doc["dtype"] == "f32");
  CHECK(doc["order"] == "row-major");
  CHECK(doc["shape"] == nlohmann::json::array({2, 3}));
  CHECK(bytes.size() - 12 - hlen == 24);
  CHECK(small_f32().payload_bytes() == 24);
  // 1.0f little-endian
  const std::uint8_t one[4] = {0x00, 0x00, 0x80, 0x3f};
  CHECK(std::memcmp(bytes.data() + 12 + hlen, one, 4) == 0);
}

TEST_CASE("large complex round trip is bit-identical") {
  Array a{Dtype::C64, {10, 20, 64, 64}, {}};
  a.values.resize(2 * a.elements());
  std::mt19937 gen(99);
  std::uniform_int_distribution<std::uint32_t> bits;
  for (auto &v : a.values) {
    // random finite bit patterns, including negative zero and subnormals
    std::uint32_t u = bits(gen);
    if (((u >> 23) & 0xff) == 0xff) u &= ~(1u << 23);
    v = std::bit_cast<float>(u);
  }
  test::TempDir dir;
  const auto path = dir / "x.arr";
  const std::size_t written = write_array(a, path);
  CHECK(written == std::filesystem::file_size(path));
  const Array b = read_array(path);
  CHECK(b.dtype == Dtype::C64);
  CHECK(b.shape == a.shape);
  REQUIRE(b.values.size() == a.values.size());
  CHECK(std::memcmp(a.values.data(), b.values.data(), a.values.size() * 4) == 0);
  CHECK(encode_array(b) == encode_array(a));
}

TEST_CASE("typed conversions") {
  ComplexVideo v(2, 3, 4);
  v.data = test::random_complex(v.data.size(), 5);
  for (auto &z : v.data) z = {static_cast<float>(z.real()), static_cast<float>(z.imag())};
  const auto back = complex_video_from(decode_array(encode_array(to_array(v))));
  CHECK(back.data == v.data);
  CHECK_THROWS_AS(scalar_video_from(to_array(v)), Error);
  CHECK_THROWS_AS(multicoil_from(to_array(v)), Error);

  ScalarVideo s(2, 2, 2);
  for (std::size_t i = 0; i < s.data.size(); ++i) s.data[i] = 0.125 * i;
  CHECK(scalar_video_from(to_array(s)).data == s.data);
}

TEST_CASE("rejections") {
  const auto good = encode_array(small_f32());

  auto bad = good;
  bad[0] = 'X';
  CHECK(code_of(bad) == ErrorCode::BadMagic);
  CHECK(code_of({'F', 'S'}) == ErrorCode::BadMagic);

  CHECK(code_of({good.begin(), good.end() - 1}) == ErrorCode::TruncatedPayload);
  CHECK(code_of({good.begin(), good.begin() + 20}) == ErrorCode::TruncatedPayload);
  auto longer = good;
  longer.push_back(0);
  CHECK(code_of(longer) == ErrorCode::TruncatedPayload);

  Array empty{Dtype::F32, {}, {}};
  try {
    encode_array(empty);
    FAIL("empty shape accepted");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::UnsupportedDtype);
  }

  auto make = [](const std::string &header) {
    std::vector<std::uint8_t> out{'F', 'S', 'Y', 'N', '0', '0', '0', '1'};
    const auto n = static_cast<std::uint32_t>(header.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
    out.insert(out.end(), header.begin(), header.end());
    return out;
  };
  CHECK(code_of(make(R"({"dtype":"f32","shape":[],"order":"row-major"})")) == ErrorCode::UnsupportedDtype);
  CHECK(code_of(make(R"({"dtype":"f64","shape":[1],"order":"row-major"})")) == ErrorCode::UnsupportedDtype);
  CHECK(code_of(make(R"({"dtype":"f32","shape":[1],"order":"col-major"})")) == ErrorCode::UnsupportedDtype);

  test::TempDir dir;
  CHECK_THROWS_AS(read_array(dir / "missing.arr"), Error);
}
