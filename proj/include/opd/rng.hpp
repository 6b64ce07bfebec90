#ifndef OPD_RNG_HPP
#define OPD_RNG_HPP

#include <array>
#include <cstdint>

namespace opd {

// SplitMix64 step; used to expand seeds and to derive per-run seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seeded random stream with a platform-independent draw sequence.
//
// Engine: xoshiro256** (Blackman & Vigna), state filled from the seed by
// four successive SplitMix64 outputs. Derived draws:
//   uniform01()     = (x >> 11) * 2^-53, in [0, 1)
//   neighbor_pick() = x >> 62, in {0, 1, 2, 3}
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept : seed_(seed) {
    std::uint64_t z = seed;
    for (auto& word : state_) {
      word = mix64(z);
      z += 0x9e3779b97f4a7c15ULL;
    }
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  double uniform01() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  unsigned neighbor_pick() noexcept { return static_cast<unsigned>(next_u64() >> 62); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace opd

#endif  // OPD_RNG_HPP
