#pragma once

// Portable seeded generator: xoshiro256** seeded through SplitMix64, with
// Box-Muller normals. The stream is fully determined by the seed on every
// platform, unlike std::normal_distribution.

#include <array>
#include <cstdint>

namespace uwoc {

std::uint64_t splitmix64(std::uint64_t& state);

class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the second variate of each pair is
  /// cached and returned by the following call.
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace uwoc
