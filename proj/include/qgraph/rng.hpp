#pragma once

#include <cstdint>

namespace qgraph {

// SplitMix64 (Steele, Lea & Flood; public-domain reference by S. Vigna).
// The whole algorithm is the few lines below, so length vectors are
// reproducible bit for bit on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Seed of realization `index` in an ensemble started from `base`.
inline std::uint64_t realization_seed(std::uint64_t base, std::uint64_t index) {
  SplitMix64 mix(base ^ (0xd1b54a32d192ed03ULL * (index + 1)));
  return mix.next();
}

}  // namespace qgraph
