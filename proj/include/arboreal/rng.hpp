// Counter-based random streams.
//
// Every draw is a pure function of (replica seed, vertex id, slot), so a
// sample does not depend on traversal order: level-order, parallel and
// depth-first generators produce bit-identical configurations, and a
// generator may skip subtrees without perturbing the rest.
#pragma once

#include <cstdint>

namespace arboreal {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of replica r under a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replica) {
  return mix64(mix64(master_seed + kGoldenGamma) ^ (replica * kGoldenGamma + 0x632be59bd9b4e019ULL));
}

/// Slots reserved per vertex: the spawn coin, the surviving child's position,
/// then one Bernoulli draw per child.
enum : std::uint32_t { kSlotSpawn = 0, kSlotPick = 1, kSlotChild0 = 2 };

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, int d) : seed_(seed), stride_(static_cast<std::uint64_t>(d) + 2) {}

  std::uint64_t bits(std::uint64_t vertex, std::uint32_t slot) const {
    return mix64(seed_ + kGoldenGamma * (vertex * stride_ + slot + 1));
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t vertex, std::uint32_t slot) const {
    return static_cast<double>(bits(vertex, slot) >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stride_;
};

}  // namespace arboreal
