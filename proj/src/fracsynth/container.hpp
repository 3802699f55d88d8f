#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/forward.hpp"
#include "fracsynth/pair.hpp"

namespace fracsynth {

// Container layout:
//   8 bytes   magic "FSYN0001"
//   4 bytes   header length, little-endian u32
//   header    JSON {"dtype": "f32"|"c64", "order": "row-major", "shape": [...]}
//   payload   little-endian f32 values; c64 is interleaved (re, im)

enum class Dtype { F32, C64 };

struct Array {
  Dtype dtype = Dtype::F32;
  std::vector<std::size_t> shape;
  std::vector<float> values;  // complex arrays hold 2 floats per element

  std::size_t elements() const;
  std::size_t payload_bytes() const;
};

std::vector<std::uint8_t> encode_array(const Array &a);
Array decode_array(std::span<const std::uint8_t> bytes);

/// Returns the number of bytes written.
std::size_t write_array(const Array &a, const std::filesystem::path &path);
Array read_array(const std::filesystem::path &path);

Array to_array(const ScalarVideo &v);
Array to_array(const ComplexVideo &v);
Array to_array(const CoilStack &s);
Array to_array(const RadialKspace &k);
Array to_array(const CoilSet &coils);

ScalarVideo scalar_video_from(const Array &a);
ComplexVideo complex_video_from(const Array &a);
MultiCoilVideo multicoil_from(const Array &a);
RadialKspace radial_from(const Array &a);
CoilSet coilset_from(const Array &a);

}  // namespace fracsynth
