#include "fracsynth/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <json.hpp>

namespace fracsynth {

namespace {

constexpr char kMagic[8] = {'F', 'S', 'Y', 'N', '0', '0', '0', '1'};

void put_u32(std::vector<std::uint8_t> &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t *p) {
  return std::uint32_t{p[0]} | std::uint32_t{p[1]} << 8 | std::uint32_t{p[2]} << 16 |
         std::uint32_t{p[3]} << 24;
}

void check_shape(const Array &a, Dtype dtype, std::size_t ndim, const char *what) {
  if (a.dtype != dtype || a.shape.size() != ndim)
    fail(ErrorCode::ShapeMismatch, std::string("array is not a ") + what);
}

}  // namespace

std::size_t Array::elements() const {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::size_t Array::payload_bytes() const {
  return elements() * (dtype == Dtype::C64 ? 8 : 4);
}

std::vector<std::uint8_t> encode_array(const Array &a) {
  if (a.shape.empty()) fail(ErrorCode::UnsupportedDtype, "arrays need at least one dimension");
  if (a.values.size() * 4 != a.payload_bytes())
    fail(ErrorCode::ShapeMismatch, "value count does not match the shape");
  nlohmann::json header;
  header["dtype"] = a.dtype == Dtype::C64 ? "c64" : "f32";
  header["shape"] = a.shape;
  header["order"] = "row-major";
  const std::string text = header.dump();

  std::vector<std::uint8_t> out(std::begin(kMagic), std::end(kMagic));
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  out.reserve(out.size() + a.values.size() * 4);
  for (float f : a.values) put_u32(out, std::bit_cast<std::uint32_t>(f));
  return out;
}

Array decode_array(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 8) != 0)
    fail(ErrorCode::BadMagic, "not an FSYN0001 array container");
  const std::uint32_t header_len = get_u32(bytes.data() + 8);
  if (bytes.size() < 12 + std::size_t{header_len})
    fail(ErrorCode::TruncatedPayload, "container header is truncated");

  Array a;
  try {
    const auto header = nlohmann::json::parse(bytes.begin() + 12, bytes.begin() + 12 + header_len);
    const auto dtype = header.at("dtype").get<std::string>();
    if (dtype == "f32")
      a.dtype = Dtype::F32;
    else if (dtype == "c64")
      a.dtype = Dtype::C64;
    else
      fail(ErrorCode::UnsupportedDtype, "unsupported dtype '" + dtype + "'");
    if (header.contains("order") && header.at("order") != "row-major")
      fail(ErrorCode::UnsupportedDtype, "only row-major order is supported");
    a.shape = header.at("shape").get<std::vector<std::size_t>>();
  } catch (const nlohmann::json::exception &ex) {
    fail(ErrorCode::BadMagic, std::string("malformed container header: ") + ex.what());
  }
  if (a.shape.empty()) fail(ErrorCode::UnsupportedDtype, "arrays need at least one dimension");

  const std::size_t offset = 12 + header_len;
  const std::size_t need = a.payload_bytes();
  if (bytes.size() - offset < need) fail(ErrorCode::TruncatedPayload, "container payload is truncated");
  if (bytes.size() - offset > need) fail(ErrorCode::TruncatedPayload, "container has trailing bytes");
  a.values.resize(need / 4);
  for (std::size_t i = 0; i < a.values.size(); ++i)
    a.values[i] = std::bit_cast<float>(get_u32(bytes.data() + offset + 4 * i));
  return a;
}

std::size_t write_array(const Array &a, const std::filesystem::path &path) {
  const auto bytes = encode_array(a);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "write failed for " + path.string());
  return bytes.size();
}

Array read_array(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_array(bytes);
}

Array to_array(const ScalarVideo &v) {
  Array a{Dtype::F32, {v.frames, v.rows, v.cols}, {}};
  a.values.assign(v.data.begin(), v.data.end());
  return a;
}

namespace {
Array complex_array(std::vector<std::size_t> shape, std::span<const cplx> data) {
  Array a{Dtype::C64, std::move(shape), {}};
  a.values.reserve(2 * data.size());
  for (const auto &z : data) {
    a.values.push_back(static_cast<float>(z.real()));
    a.values.push_back(static_cast<float>(z.imag()));
  }
  return a;
}

std::vector<cplx> complex_values(const Array &a) {
  std::vector<cplx> out(a.values.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {a.values[2 * i], a.values[2 * i + 1]};
  return out;
}
}  // namespace

Array to_array(const ComplexVideo &v) { return complex_array({v.frames, v.rows, v.cols}, v.data); }

Array to_array(const CoilStack &s) {
  return complex_array({s.coils, s.frames, s.rows, s.cols}, s.data);
}

Array to_array(const RadialKspace &k) {
  return complex_array({k.coils, k.frames, k.samples}, k.data);
}

Array to_array(const CoilSet &coils) {
  if (coils.maps.empty()) fail(ErrorCode::ShapeMismatch, "empty coil set");
  std::vector<cplx> flat;
  for (const auto &m : coils.maps) flat.insert(flat.end(), m.data.begin(), m.data.end());
  return complex_array({coils.size(), coils.maps[0].rows, coils.maps[0].cols}, flat);
}

ScalarVideo scalar_video_from(const Array &a) {
  check_shape(a, Dtype::F32, 3, "f32 [T,H,W] video");
  ScalarVideo v(a.shape[0], a.shape[1], a.shape[2]);
  std::copy(a.values.begin(), a.values.end(), v.data.begin());
  return v;
}

ComplexVideo complex_video_from(const Array &a) {
  check_shape(a, Dtype::C64, 3, "c64 [T,H,W] video");
  ComplexVideo v(a.shape[0], a.shape[1], a.shape[2]);
  v.data = complex_values(a);
  return v;
}

MultiCoilVideo multicoil_from(const Array &a) {
  check_shape(a, Dtype::C64, 4, "c64 [C,T,H,W] stack");
  MultiCoilVideo m(a.shape[0], a.shape[1], a.shape[2], a.shape[3]);
  m.data = complex_values(a);
  return m;
}

RadialKspace radial_from(const Array &a) {
  check_shape(a, Dtype::C64, 3, "c64 [C,T,S] radial k-space");
  RadialKspace k(a.shape[0], a.shape[1], a.shape[2]);
  k.data = complex_values(a);
  return k;
}

CoilSet coilset_from(const Array &a) {
  check_shape(a, Dtype::C64, 3, "c64 [C,H,W] coil set");
  const auto values = complex_values(a);
  const std::size_t fs = a.shape[1] * a.shape[2];
  CoilSet set;
  for (std::size_t c = 0; c < a.shape[0]; ++c) {
    Image<cplx> map(a.shape[1], a.shape[2]);
    std::copy(values.begin() + c * fs, values.begin() + (c + 1) * fs, map.data.begin());
    set.maps.push_back(std::move(map));
  }
  return set;
}

}  // namespace fracsynth
