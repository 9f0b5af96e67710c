#pragma once

// Counter-based random numbers (Philox4x32-10) with a hierarchical seed.
// A stream is a pure function of (experiment_id, stream_id, path_id): the
// experiment and stream ids form the Philox key, the path id fills the upper
// half of the 128-bit counter and the draw index the lower half.

#include <array>
#include <cstdint>

namespace eb {

struct RngSeed {
  std::uint64_t experiment_id = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t path_id = 0;

  bool operator==(const RngSeed&) const = default;
};

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// One Philox4x32 block with 10 rounds.
PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key);

std::uint64_t splitmix64(std::uint64_t x);

class CounterRng {
 public:
  explicit CounterRng(const RngSeed& seed);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  // Standard normal by the Box-Muller transform (bit-reproducible on one build).
  double normal();

 private:
  PhiloxKey key_{};
  std::uint64_t path_ = 0;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace eb
