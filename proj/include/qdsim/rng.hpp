#pragma once

#include <cstdint>
#include <random>

namespace qdsim {

// Deterministic random source. All draws go through hand-rolled transforms on
// top of std::mt19937_64 so that sequences are identical across platforms and
// standard libraries (std::uniform_*_distribution is not portable).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for trial `stream` of a run with `master_seed`.
  static Rng derive(std::uint64_t master_seed, std::uint64_t stream) {
    return Rng(mix(master_seed ^ mix(stream + 0x9e3779b97f4a7c15ull)));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound > 0. Rejection sampling, no modulo bias.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  int next_bit() { return static_cast<int>(next_u64() >> 63); }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // splitmix64 finalizer
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace qdsim
