#pragma once

#include <cmath>
#include <cstdint>

namespace sbd::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Stable child-seed derivation. derive(seed, a) is the same on every run
/// and platform, which is what makes event streams and replica seeds
/// reproducible. Counter-based: no sequential state involved.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a) {
  return mix64(seed + kGolden + mix64(a + kGolden));
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}

inline double to_unit(std::uint64_t bits) {
  // 53-bit mantissa, value in [0, 1)
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// splitmix64 sequential stream. Small, fast, and identical across
/// platforms (std:: distributions are implementation-defined, so all
/// uniform/exponential draws go through this instead).
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  double next_unit() { return to_unit(next_u64()); }

  double next_exponential(double rate) {
    return -std::log1p(-next_unit()) / rate;
  }

  /// Unbiased integer in [0, n) via rejection.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace sbd::rng
