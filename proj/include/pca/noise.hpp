#pragma once
// Counter-based uniform noise r^t_k. Every value is a pure function of
// (seed, t, k), so coupling-from-the-past restarts re-read exactly the same
// randomness without storing it.

#include <cstdint>

namespace pca {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class NoiseRow {
 public:
  constexpr NoiseRow(std::uint64_t seed, std::int64_t t)
      : key_(mix64(mix64(seed + 0x9e3779b97f4a7c15ULL) ^
                   (static_cast<std::uint64_t>(t) * 0xd1b54a32d192ed03ULL))) {}

  // 53 random bits mapped onto [0,1).
  constexpr double operator()(std::int64_t k) const {
    const std::uint64_t h =
        mix64(key_ ^ (static_cast<std::uint64_t>(k) * 0xaef17502108ef2d9ULL + 0x632be59bd9b4e019ULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
};

constexpr double uniform_at(std::uint64_t seed, std::int64_t t, std::int64_t k) {
  return NoiseRow(seed, t)(k);
}

class NoiseField {
 public:
  explicit constexpr NoiseField(std::uint64_t seed) : seed_(seed) {}

  constexpr std::uint64_t seed() const { return seed_; }
  constexpr double operator()(std::int64_t t, std::int64_t k) const { return uniform_at(seed_, t, k); }
  constexpr NoiseRow row(std::int64_t t) const { return NoiseRow(seed_, t); }

 private:
  std::uint64_t seed_;
};

// Seed of the i-th replicate of an experiment run with `base`.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(mix64(base ^ 0x5851f42d4c957f2dULL) + index);
}

}  // namespace pca
