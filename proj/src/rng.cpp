#include "gpsm/rng.hpp"

#include <cmath>

#include "gpsm/mathutil.hpp"

namespace gpsm {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57;

inline std::uint32_t mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t* hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  *hi = static_cast<std::uint32_t>(p >> 32);
  return static_cast<std::uint32_t>(p);
}

inline std::array<std::uint32_t, 4> philox_round(const std::array<std::uint32_t, 4>& c,
                                                 const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, hi1;
  const std::uint32_t lo0 = mul_hi_lo(kPhiloxM4x32A, c[0], &hi0);
  const std::uint32_t lo1 = mul_hi_lo(kPhiloxM4x32B, c[2], &hi1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

PhiloxRng::PhiloxRng(const SeedSpec& seed)
    : counter_{0, 0, static_cast<std::uint32_t>(seed.replication_index),
               static_cast<std::uint32_t>(seed.replication_index >> 32)},
      key_{static_cast<std::uint32_t>(seed.master_seed),
           static_cast<std::uint32_t>(seed.master_seed >> 32)},
      block_pos_(4) {}

void PhiloxRng::refill() {
  std::array<std::uint32_t, 4> c = counter_;
  std::array<std::uint32_t, 2> k = key_;
  for (int round = 0; round < 9; ++round) {
    c = philox_round(c, k);
    k[0] += kPhiloxW32A;
    k[1] += kPhiloxW32B;
  }
  block_ = philox_round(c, k);
  block_pos_ = 0;
  if (++counter_[0] == 0) ++counter_[1];  // 64-bit block counter within the stream
}

std::uint32_t PhiloxRng::next_u32() {
  if (block_pos_ == 4) refill();
  return block_[block_pos_++];
}

std::uint64_t PhiloxRng::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double PhiloxRng::next_uniform() {
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double PhiloxRng::next_normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * kPi * u2;
  cached_normal_ = r * std::sin(angle);
  has_cached_normal_ = true;
  return r * std::cos(angle);
}

}  // namespace gpsm
