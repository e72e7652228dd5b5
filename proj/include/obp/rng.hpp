#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace obp {

// Deterministic randomness helpers. The raw mt19937_64 output sequence is
// pinned by the standard; std::uniform_int_distribution and std::shuffle are
// not, so bounded draws and shuffles are hand-rolled here.
class Rng {
public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  uint64_t u64() { return eng_(); }
  bool coin() { return u64() & 1; }

  // Unbiased draw from [0, bound), bound >= 1 (Lemire's rejection method).
  uint64_t below(uint64_t bound) {
    uint64_t x = u64();
    unsigned __int128 m = (unsigned __int128)x * bound;
    uint64_t lo = (uint64_t)m;
    if (lo < bound) {
      uint64_t threshold = (0 - bound) % bound;
      while (lo < threshold) {
        x = u64();
        m = (unsigned __int128)x * bound;
        lo = (uint64_t)m;
      }
    }
    return (uint64_t)(m >> 64);
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = (size_t)below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

private:
  std::mt19937_64 eng_;
};

// splitmix64 finalizer; used to derive independent seed streams.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t base, uint64_t stream) { return mix64(base + mix64(stream)); }

}  // namespace obp
