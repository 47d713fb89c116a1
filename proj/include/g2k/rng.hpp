#pragma once

#include <cstdint>
#include <random>

namespace g2k {

/// Explicitly seeded generator. The library never draws ambient entropy;
/// every random choice flows through one of these. Draws are bit-for-bit
/// reproducible across platforms (mt19937_64 output is fully specified and
/// range reduction is done here, not by a std distribution).
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : seed_(seed), engine_(seed) {}

  uint64_t seed() const noexcept { return seed_; }

  uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be nonzero.
  uint64_t below(uint64_t bound) {
    if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
    const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
      uint64_t r = next();
      if (r < limit) return r % bound;
    }
  }

  /// Independent child stream, used to keep sub-computations reproducible
  /// regardless of how many draws the parent made before.
  SeededRng fork(uint64_t salt) {
    uint64_t s = next() ^ (salt * 0x9e3779b97f4a7c15ULL);
    return SeededRng(s);
  }

 private:
  uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace g2k
