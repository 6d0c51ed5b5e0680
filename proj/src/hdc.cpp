// SPDX-License-Identifier: Apache-2.0
#include <vega/hdc.hpp>

#include <numeric>

namespace vega::hdc {

permutation_set permutation_set::generate(uint32_t dim, uint64_t master_seed) {
  if (!is_legal_dim(dim))
    throw error(strf("illegal permutation_set dim %u", dim));
  permutation_set p;
  p.dim = dim;
  p.master_seed = master_seed;
  splitmix64 rng(master_seed);
  for (uint32_t k = 0; k < 4; ++k) {
    std::vector<uint32_t> perm(dim);
    std::iota(perm.begin(), perm.end(), 0);
    fisher_yates(perm, rng);
    std::vector<uint32_t> inv(dim);
    for (uint32_t i = 0; i < dim; ++i) inv[perm[i]] = i;
    p.perms[k] = std::move(perm);
    p.inv[k] = std::move(inv);
  }
  // Balanced seed vector: dim/2 ones shuffled over all positions.
  std::vector<uint32_t> ones(dim);
  std::iota(ones.begin(), ones.end(), 0);
  fisher_yates(ones, rng);
  p.seed = hd_vector(dim);
  for (uint32_t i = 0; i < dim / 2; ++i) p.seed.set(ones[i], true);
  return p;
}

hd_vector permute(const hd_vector& v, uint32_t perm_id, const permutation_set& pset) {
  if (perm_id >= 4) throw error(strf("perm_id %u out of range", perm_id));
  if (v.dim() != pset.dim)
    throw error(strf("permute dim mismatch: vector %u vs set %u", v.dim(), pset.dim));
  hd_vector out(v.dim());
  const auto& inv = pset.inv[perm_id];
  for (uint32_t i = 0; i < v.dim(); ++i)
    if (v.get(inv[i])) out.set(i, true);
  return out;
}

hd_vector bind(const hd_vector& a, const hd_vector& b) { return a ^ b; }

bundle_accumulator::bundle_accumulator(uint32_t dim) : dim_(dim) {
  if (!is_legal_dim(dim)) throw error(strf("illegal bundle dim %u", dim));
  counters_.assign(dim, 0);
}

void bundle_accumulator::accumulate(const hd_vector& v) {
  if (v.dim() != dim_)
    throw error(strf("bundle dim mismatch: %u vs %u", v.dim(), dim_));
  for (uint32_t i = 0; i < dim_; ++i) {
    int c = counters_[i] + (v.get(i) ? 1 : -1);
    if (c > 127) c = 127;
    if (c < -128) c = -128;
    counters_[i] = static_cast<int8_t>(c);
  }
  ++count_;
}

hd_vector bundle_accumulator::finalize(tie_rule tie) const {
  if (count_ == 0) throw error("bundle_finalize on empty accumulator");
  hd_vector out(dim_);
  for (uint32_t i = 0; i < dim_; ++i) {
    if (counters_[i] > 0)
      out.set(i, true);
    else if (counters_[i] == 0 && tie == tie_rule::one)
      out.set(i, true);
  }
  return out;
}

hd_vector im_encode(uint64_t word, uint32_t width_d, const permutation_set& pset,
                    uint32_t pair_select) {
  if (width_d < 1 || width_d > 32)
    throw error(strf("im_encode width %u out of range [1,32]", width_d));
  if (pair_select > 1) throw error(strf("pair_select %u out of range", pair_select));
  hd_vector v = pset.seed;
  for (uint32_t d = 0; d < width_d; ++d) {
    uint32_t bit = (word >> d) & 1;
    v = permute(v, 2 * pair_select + bit, pset);
  }
  return v;
}

uint32_t cim_flip_count(uint32_t level, uint32_t max_level, uint32_t dim) {
  // round(level / max_level * dim / 2), round half up, in exact integer math
  uint64_t num = static_cast<uint64_t>(level) * dim + max_level;
  return static_cast<uint32_t>(num / (2ull * max_level));
}

hd_vector cim_encode(uint32_t level, uint32_t max_level, const hd_vector& base) {
  if (max_level < 1) throw error("cim_encode max_level must be >= 1");
  if (level > max_level)
    throw error(strf("cim level %u out of range [0,%u]", level, max_level));
  hd_vector out = base;
  uint32_t flips = cim_flip_count(level, max_level, base.dim());
  for (uint32_t i = 0; i < flips; ++i) out.flip(i);
  return out;
}

associative_memory::associative_memory(uint32_t dim) : dim_(dim) {
  if (!is_legal_dim(dim)) throw error(strf("illegal AM dim %u", dim));
}

void associative_memory::write(uint32_t row, const hd_vector& v) {
  if (row >= kRows) throw error(strf("AM row %u out of range [0,15]", row));
  if (v.dim() != dim_)
    throw error(strf("AM write dim mismatch: %u vs %u", v.dim(), dim_));
  rows_[row] = v;
}

const std::optional<hd_vector>& associative_memory::row(uint32_t r) const {
  if (r >= kRows) throw error(strf("AM row %u out of range [0,15]", r));
  return rows_[r];
}

uint32_t associative_memory::occupied() const {
  uint32_t n = 0;
  for (const auto& r : rows_)
    if (r) ++n;
  return n;
}

lookup_result associative_memory::lookup(const hd_vector& query) const {
  if (query.dim() != dim_)
    throw error(strf("AM lookup dim mismatch: %u vs %u", query.dim(), dim_));
  std::optional<lookup_result> best;
  for (uint32_t r = 0; r < kRows; ++r) {
    if (!rows_[r]) continue;
    uint32_t d = hamming(*rows_[r], query);
    if (!best || d < best->distance) best = lookup_result{r, d};
  }
  if (!best) throw error("AM lookup on empty memory");
  return *best;
}

}  // namespace vega::hdc
