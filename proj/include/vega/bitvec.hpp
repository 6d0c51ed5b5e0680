// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <vega/common.hpp>
#include <vega/rng.hpp>

namespace vega::hdc {

// The four vector widths supported by the encoder datapath.
inline constexpr std::array<uint32_t, 4> kLegalDims{512, 1024, 1536, 2048};

bool is_legal_dim(uint32_t dim);

// Dense binary hypervector. All legal dims are multiples of 64, so the
// backing words have no partial tail.
class hd_vector {
 public:
  hd_vector() = default;  // empty (dim 0); only valid as a placeholder
  explicit hd_vector(uint32_t dim);

  static hd_vector random(uint32_t dim, splitmix64& rng);

  uint32_t dim() const { return dim_; }
  bool empty() const { return dim_ == 0; }

  bool get(uint32_t i) const;
  void set(uint32_t i, bool value);
  void flip(uint32_t i);

  uint32_t popcount() const;

  hd_vector operator^(const hd_vector& o) const;
  hd_vector operator&(const hd_vector& o) const;
  hd_vector operator~() const;

  bool operator==(const hd_vector& o) const = default;

  const std::vector<uint64_t>& words() const { return words_; }

  std::string to_hex() const;
  static hd_vector from_hex(uint32_t dim, const std::string& hex);

 private:
  void check_index(uint32_t i) const;
  void check_same_dim(const hd_vector& o) const;

  uint32_t dim_ = 0;
  std::vector<uint64_t> words_;
};

// popcount(a XOR b)
uint32_t hamming(const hd_vector& a, const hd_vector& b);

}  // namespace vega::hdc
