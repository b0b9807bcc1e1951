#pragma once

#include <cstdint>
#include <initializer_list>

namespace braidnav {

/// Deterministic, platform-independent stream (splitmix64). Used instead of
/// <random> distributions so result tables are byte-identical everywhere.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
};

/// Hash-combine a master seed with stream tags (scenario, cell, ...).
inline std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t p : parts) {
    SplitMix64 s(h ^ (p + 0x632be59bd9b4e019ull));
    h = s.next();
  }
  return h;
}

}  // namespace braidnav
