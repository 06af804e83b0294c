#pragma once

#include <array>
#include <cstdint>

namespace gpsm {

/// Addresses one reproducible random stream.  The master seed keys the
/// generator; the replication index selects a disjoint counter block, so
/// streams can be consumed in any order (or in parallel) with identical
/// results.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replication_index = 0;
};

/// Philox 4x32 with 10 rounds: a small counter-based PRF.  Bit-exact across
/// platforms and thread schedules; no shared state.
class PhiloxRng {
 public:
  explicit PhiloxRng(const SeedSpec& seed);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform on (0, 1] with 53-bit resolution (safe under log()).
  double next_uniform();

  /// Standard normal via Box-Muller; draws two uniforms per pair.
  double next_normal();

 private:
  void refill();

  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> block_{};
  int block_pos_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace gpsm
