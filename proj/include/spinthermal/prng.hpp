#pragma once

#include <array>
#include <cstdint>

namespace spinthermal {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11), fixed at
// 10 rounds. Counter-based output is a pure function of (counter, key), so
// streams can be split without coordination and results are identical on
// every platform. Verified against the reference known-answer vectors in
// the test suite. Stream layout used here:
//   counter = {block_lo, block_hi, stream, 0}, key = {seed_lo, seed_hi}.
// Version tag: "philox4x32-10/v1" (recorded in run manifests).

inline constexpr char kPrngVersion[] = "philox4x32-10/v1";

namespace detail {

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
  constexpr std::uint64_t kMul0 = 0xD2511F53u;
  constexpr std::uint64_t kMul1 = 0xCD9E8D57u;
  const std::uint64_t p0 = kMul0 * ctr[0];
  const std::uint64_t p1 = kMul1 * ctr[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

/// One Philox4x32-10 block: four output words from (counter, key).
inline std::array<std::uint32_t, 4> philox4x32(
    std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  detail::philox_round(counter, key);
  for (int r = 1; r < 10; ++r) {
    key[0] += kWeyl0;
    key[1] += kWeyl1;
    detail::philox_round(counter, key);
  }
  return counter;
}

/// Sequential view of one Philox stream.
class PhiloxRng {
 public:
  explicit PhiloxRng(std::uint64_t seed, std::uint32_t stream = 0)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(stream) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buffer_[pos_++];
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = next_u32();
    const std::uint64_t hi = next_u32();
    return lo | (hi << 32);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [-1, 1).
  double next_symmetric() { return 2.0 * next_double() - 1.0; }

 private:
  void refill() {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_),
                          static_cast<std::uint32_t>(block_ >> 32), stream_, 0},
                         key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t stream_ = 0;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int pos_ = 4;
};

/// Deterministic per-realization seed derived from a master seed. Uses a
/// dedicated Philox stream so realization seeds never collide with draws
/// made from them.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       0x5eed0001u, 0u},
      {static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32)});
  return static_cast<std::uint64_t>(out[0]) |
         (static_cast<std::uint64_t>(out[1]) << 32);
}

}  // namespace spinthermal
