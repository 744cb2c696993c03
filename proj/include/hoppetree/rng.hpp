#pragma once

#include <bit>
#include <cstdint>

namespace hoppetree {

// SplitMix64 finalizer; used for key mixing and generator seeding.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    return mix64(state += 0x9e3779b97f4a7c15ULL);
  }
};

// xoshiro256++ (Blackman & Vigna), seeded through SplitMix64. One instance
// per replicate / per (generation, index) lane gives order-independent
// determinism under any degree of parallelism.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  static Xoshiro256pp for_stream(std::uint64_t seed, std::uint64_t stream) {
    return Xoshiro256pp(mix64(seed) ^ mix64(0xd1b54a32d192ed03ULL * (stream + 1)));
  }

  static Xoshiro256pp for_stream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    return Xoshiro256pp(mix64(seed) ^ mix64(0xd1b54a32d192ed03ULL * (hi + 1)) ^
                        mix64(0x8cb92ba72f3d8dd7ULL * (lo + 1)));
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1), 53 significant bits.
  double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound) via 128-bit multiply-shift.
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace hoppetree
