#ifndef KGV_RNG_HPP
#define KGV_RNG_HPP

#include <cstdint>

namespace kgv {

// splitmix64: tiny, portable, and platform-independent, so a recorded seed
// reproduces every randomized report byte-for-byte anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // derive an independent stream (stable split for parallel work)
  Rng split(std::uint64_t tag) {
    Rng probe(state_ ^ (0xd1b54a32d192ed03ULL * (tag + 1)));
    return Rng(probe.next_u64());
  }

 private:
  std::uint64_t state_;
};

}  // namespace kgv

#endif  // KGV_RNG_HPP
