// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include <vega/bitvec.hpp>

namespace vega::hdc {

// Four fixed random permutations plus the pseudo-random seed vector used by
// item-memory rematerialization. The silicon wiring is not public, so the
// tables are generated from a documented deterministic scheme: one splitmix64
// stream seeded with master_seed drives four Fisher-Yates shuffles (perm 0..3)
// and then a balanced shuffle of the seed vector (exactly dim/2 ones).
struct permutation_set {
  uint32_t dim = 0;
  uint64_t master_seed = 0;
  std::array<std::vector<uint32_t>, 4> perms;  // perms[k][i] = P_k(i)
  std::array<std::vector<uint32_t>, 4> inv;    // inv[k][P_k(i)] = i
  hd_vector seed;

  static permutation_set generate(uint32_t dim, uint64_t master_seed = 0);
};

// output bit i = input bit perms[perm_id]^-1(i)
hd_vector permute(const hd_vector& v, uint32_t perm_id, const permutation_set& pset);

// bind = XOR
hd_vector bind(const hd_vector& a, const hd_vector& b);

// Majority bundling via per-bit signed saturating 8-bit counters.
class bundle_accumulator {
 public:
  explicit bundle_accumulator(uint32_t dim);

  void accumulate(const hd_vector& v);
  uint32_t accumulated() const { return count_; }
  uint32_t dim() const { return dim_; }
  int8_t counter(uint32_t i) const { return counters_.at(i); }

  enum class tie_rule { zero, one };
  hd_vector finalize(tie_rule tie = tie_rule::zero) const;

 private:
  uint32_t dim_;
  uint32_t count_ = 0;
  std::vector<int8_t> counters_;
};

// Item-memory encoding: start from the seed vector and apply one permutation
// per input bit (LSB first); the bit selects within the pair chosen by
// pair_select (perm index = 2*pair_select + bit).
hd_vector im_encode(uint64_t word, uint32_t width_d, const permutation_set& pset,
                    uint32_t pair_select);

// Continuous item memory: flip the first round(level/max_level * dim/2) bit
// positions of base (ascending index, round half up).
hd_vector cim_encode(uint32_t level, uint32_t max_level, const hd_vector& base);
uint32_t cim_flip_count(uint32_t level, uint32_t max_level, uint32_t dim);

struct lookup_result {
  uint32_t index;
  uint32_t distance;
};

// Up to 16 rows of prototype vectors, queried by minimum Hamming distance.
class associative_memory {
 public:
  static constexpr uint32_t kRows = 16;

  explicit associative_memory(uint32_t dim);

  uint32_t dim() const { return dim_; }
  void write(uint32_t row, const hd_vector& v);
  const std::optional<hd_vector>& row(uint32_t r) const;
  uint32_t occupied() const;

  // Minimal-distance row, ties broken by lowest index (sequential scan).
  lookup_result lookup(const hd_vector& query) const;

 private:
  uint32_t dim_;
  std::array<std::optional<hd_vector>, kRows> rows_;
};

}  // namespace vega::hdc
