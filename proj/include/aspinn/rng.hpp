#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace aspinn {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent substream seed for (seed, tags...). Results are stable across
// platforms; every randomized quantity in the library is keyed this way.
inline std::uint64_t derive_seed(std::uint64_t seed,
                                 std::initializer_list<std::uint64_t> tags) {
  std::uint64_t s = splitmix64(seed);
  for (std::uint64_t t : tags) s = splitmix64(s ^ (t + 0x9e3779b97f4a7c15ULL));
  return s;
}

// Uniform draws built directly on mt19937_64 output. std distributions are
// implementation-defined, so they are avoided for reproducible streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // [0, 1)
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + unit() * (hi - lo); }

  // strictly inside (lo, hi)
  double uniform_open(double lo, double hi) {
    double x = lo + unit() * (hi - lo);
    while (x <= lo || x >= hi) x = lo + unit() * (hi - lo);
    return x;
  }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace aspinn
