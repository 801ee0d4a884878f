#pragma once

#include <cstdint>

namespace pit {

// splitmix64: deterministic, seedable, good enough for test-corpus generation
// and candidate searches. Not a crypto RNG.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound)
    std::uint64_t below(std::uint64_t bound) {
        // rejection sampling keeps the distribution exact
        std::uint64_t limit = ~0ULL - (~0ULL % bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // uniform in [lo, hi] inclusive
    std::uint64_t range(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

  private:
    std::uint64_t state_;
};

}  // namespace pit
