// SPDX-License-Identifier: Apache-2.0
#include <vega/bitvec.hpp>

#include <algorithm>
#include <bit>

namespace vega::hdc {

bool is_legal_dim(uint32_t dim) {
  return std::find(kLegalDims.begin(), kLegalDims.end(), dim) != kLegalDims.end();
}

hd_vector::hd_vector(uint32_t dim) : dim_(dim) {
  if (!is_legal_dim(dim))
    throw error(strf("illegal hd_vector dim %u (legal: 512/1024/1536/2048)", dim));
  words_.assign(dim / 64, 0);
}

hd_vector hd_vector::random(uint32_t dim, splitmix64& rng) {
  hd_vector v(dim);
  for (auto& w : v.words_) w = rng.next();
  return v;
}

void hd_vector::check_index(uint32_t i) const {
  if (i >= dim_) throw error(strf("bit index %u out of range (dim %u)", i, dim_));
}

void hd_vector::check_same_dim(const hd_vector& o) const {
  if (dim_ != o.dim_)
    throw error(strf("hd_vector dim mismatch: %u vs %u", dim_, o.dim_));
}

bool hd_vector::get(uint32_t i) const {
  check_index(i);
  return (words_[i / 64] >> (i % 64)) & 1;
}

void hd_vector::set(uint32_t i, bool value) {
  check_index(i);
  uint64_t mask = 1ull << (i % 64);
  if (value)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

void hd_vector::flip(uint32_t i) {
  check_index(i);
  words_[i / 64] ^= 1ull << (i % 64);
}

uint32_t hd_vector::popcount() const {
  uint32_t n = 0;
  for (uint64_t w : words_) n += static_cast<uint32_t>(std::popcount(w));
  return n;
}

hd_vector hd_vector::operator^(const hd_vector& o) const {
  check_same_dim(o);
  hd_vector r(dim_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] ^ o.words_[i];
  return r;
}

hd_vector hd_vector::operator&(const hd_vector& o) const {
  check_same_dim(o);
  hd_vector r(dim_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = words_[i] & o.words_[i];
  return r;
}

hd_vector hd_vector::operator~() const {
  if (dim_ == 0) throw error("operator~ on empty hd_vector");
  hd_vector r(dim_);
  for (size_t i = 0; i < words_.size(); ++i) r.words_[i] = ~words_[i];
  return r;
}

std::string hd_vector::to_hex() const {
  // Word 0 first, each word as 16 lowercase hex digits (LSB-first word order).
  std::string out;
  out.reserve(words_.size() * 16);
  for (uint64_t w : words_) out += strf("%016llx", static_cast<unsigned long long>(w));
  return out;
}

hd_vector hd_vector::from_hex(uint32_t dim, const std::string& hex) {
  hd_vector v(dim);
  if (hex.size() != v.words_.size() * 16)
    throw parse_error(strf("hex string length %zu does not match dim %u", hex.size(), dim));
  for (size_t i = 0; i < v.words_.size(); ++i) {
    v.words_[i] = std::stoull(hex.substr(i * 16, 16), nullptr, 16);
  }
  return v;
}

uint32_t hamming(const hd_vector& a, const hd_vector& b) {
  return (a ^ b).popcount();
}

}  // namespace vega::hdc
