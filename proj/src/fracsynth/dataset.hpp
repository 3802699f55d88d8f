#pragma once

#include <filesystem>
#include <json.hpp>
#include <string>
#include <vector>

#include "fracsynth/common.hpp"
#include "fracsynth/forward.hpp"
#include "fracsynth/pair.hpp"

namespace fracsynth {

struct DatasetExample {
  std::size_t index = 0;
  MultiCoilVideo input;  // compressed coils, aliased, RSS max 1
  ScalarVideo target;    // RSS of the fully sampled data, max 1
  RadialKspace radial;   // undersampled samples behind `input`
  CoilSet coils;         // compressed sensitivities
  nlohmann::json meta;   // c value, sampled parameters, scales
};

struct Split {
  std::vector<std::size_t> train, val, test;
};

/// Contiguous split with sizes round(0.75 n), round(0.10 n) and the
/// remainder; every partition keeps at least one example.
Split split_dataset(std::size_t n);

/// "000042"
std::string example_dir_name(std::size_t index);

/// Writes input.arr, target.arr, radial.arr, coils.arr and meta.json into
/// `dir` and returns the manifest record.
nlohmann::json write_example(const DatasetExample &ex, const std::filesystem::path &dir);

DatasetExample read_example(const std::filesystem::path &dir);

void write_json(const nlohmann::json &doc, const std::filesystem::path &path);
nlohmann::json read_json(const std::filesystem::path &path);

}  // namespace fracsynth
