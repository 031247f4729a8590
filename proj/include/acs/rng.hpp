#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace acs {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives a substream seed; stream tags keep index draws, label draws and
// instance realization decoupled so trials replay exactly.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base + 0x632be59bd9b4e019ull * (stream + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, bound). Rejection keeps the mapping exact and makes the
  // draw sequence a pure function of the seed.
  int uniform_below(int bound) {
    if (bound <= 0) throw std::invalid_argument("uniform_below: bound must be positive");
    const std::uint64_t b = static_cast<std::uint64_t>(bound);
    const std::uint64_t residue = (std::numeric_limits<std::uint64_t>::max() % b + 1) % b;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - residue;
    for (;;) {
      std::uint64_t x = gen_();
      if (x <= limit) return static_cast<int>(x % b);
    }
  }

  double uniform01() { return (gen_() >> 11) * 0x1.0p-53; }

  int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

 private:
  std::mt19937_64 gen_;
};

}  // namespace acs
