// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace vega {

// Deterministic 64-bit PRNG (splitmix64). Used everywhere a reproducible
// stream is needed (permutation tables, seed vectors, test stimuli) so that
// golden values are stable across platforms and standard-library versions.
class splitmix64 {
 public:
  explicit splitmix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased uniform draw in [0, bound) via rejection sampling.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  bool bit() { return next() >> 63; }

 private:
  uint64_t state_;
};

// In-place Fisher-Yates shuffle driven by splitmix64.
template <typename T>
void fisher_yates(std::vector<T>& v, splitmix64& rng) {
  for (size_t i = v.size(); i > 1; --i) {
    size_t j = static_cast<size_t>(rng.below(i));
    T tmp = v[i - 1];
    v[i - 1] = v[j];
    v[j] = tmp;
  }
}

}  // namespace vega
