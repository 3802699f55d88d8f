#pragma once

#include <cstdint>

namespace fracsynth {

/// One splitmix64 step from state x: mixes x + 0x9E3779B97F4A7C15.
std::uint64_t splitmix64(std::uint64_t x);

/// xoshiro256++ seeded by four successive splitmix64 outputs.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller; consumes two uniforms per call.
  double normal();

 private:
  std::uint64_t s_[4];
};

/// Random-stream purposes. Values are part of the file format contract.
enum class Purpose : std::uint64_t {
  Fractal = 0,
  Synthesis = 1,
  Mask = 2,
  Phase = 3,
  Coils = 4,
  Noise = 5,
};

std::uint64_t example_seed(std::uint64_t dataset_seed, std::uint64_t index);

/// Child seed of `parent` for an integer key.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key);

Rng derive_rng(std::uint64_t dataset_seed, std::uint64_t index, Purpose purpose);

}  // namespace fracsynth
