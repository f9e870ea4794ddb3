#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace spikekit {

// splitmix64; also used to derive stream seeds from (seed, index) pairs.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t index) {
  uint64_t s = seed ^ (0x2545f4914f6cdd1dULL * (index + 1));
  return splitmix64(s);
}

// Deterministic generator with a platform-independent sampling contract.
// The standard <random> distributions are implementation-defined, which
// would tie trace bytes to a particular libstdc++ version.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // avoid the all-zero fixed point of the underlying mix
    next_u64();
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi] inclusive
  int64_t uniform_int(int64_t lo, int64_t hi) {
    uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  bool coin() { return (next_u64() & 1ULL) != 0; }

  // Fisher-Yates
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(uniform_int(0, static_cast<int64_t>(i) - 1));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
};

}  // namespace spikekit
