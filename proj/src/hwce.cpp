// SPDX-License-Identifier: Apache-2.0
#include <vega/hwce.hpp>

#include <algorithm>
#include <cmath>

namespace vega::hwce {

const char* filter_name(filter_size f) { return f == filter_size::f3x3 ? "3x3" : "5x5"; }

const char* port_name(port p) {
  switch (p) {
    case port::none: return "none";
    case port::l1: return "l1";
    case port::fifo0: return "fifo0";
    case port::fifo1: return "fifo1";
    case port::fifo2: return "fifo2";
  }
  return "?";
}

filter_size filter_from_name(const std::string& s) {
  if (s == "3x3") return filter_size::f3x3;
  if (s == "5x5") return filter_size::f5x5;
  throw parse_error(strf("unknown filter size '%s' (want 3x3 or 5x5)", s.c_str()));
}

port port_from_name(const std::string& s) {
  for (port p : {port::none, port::l1, port::fifo0, port::fifo1, port::fifo2})
    if (s == port_name(p)) return p;
  throw parse_error(strf("unknown port '%s'", s.c_str()));
}

static bool legal_precision(uint32_t w) { return w == 4 || w == 8 || w == 16; }

void job::validate() const {
  if (filter == filter_size::f5x5 && n_filters != 1)
    throw error("5x5 mode drives exactly one filter");
  if (n_filters < 1 || n_filters > 3)
    throw error(strf("n_filters %u out of range [1,3]", n_filters));
  if (c_in < 1) throw error("c_in must be >= 1");
  if (!legal_precision(precision_in))
    throw error(strf("input precision %u not in {4,8,16}", precision_in));
  if (!legal_precision(precision_w))
    throw error(strf("weight precision %u not in {4,8,16}", precision_w));
  if (norm_shift > 31) throw error(strf("norm_shift %u > 31", norm_shift));
  if (!legal_precision(out_width))
    throw error(strf("output width %u not in {4,8,16}", out_width));
  if (output_sink == port::none) throw error("output sink must be l1 or a FIFO");
}

int32_t saturate_normalize(int32_t acc, uint32_t shift, uint32_t out_width,
                           bool round_before_shift) {
  if (shift > 31) throw error(strf("norm_shift %u > 31", shift));
  if (!legal_precision(out_width))
    throw error(strf("output width %u not in {4,8,16}", out_width));
  int64_t v = acc;
  if (round_before_shift && shift > 0) v += int64_t(1) << (shift - 1);
  v >>= shift;  // arithmetic (sign-propagating)
  int64_t hi = (int64_t(1) << (out_width - 1)) - 1;
  int64_t lo = -(int64_t(1) << (out_width - 1));
  return static_cast<int32_t>(std::clamp(v, lo, hi));
}

static double kind_peak_of(const job& j) {
  return j.filter == filter_size::f3x3 ? 9.0 * j.n_filters : 25.0;
}

uint64_t cycles_for_macs(uint64_t macs, bool shadowed, double kind_peak,
                         const timing_params& p) {
  if (p.eff_mac_per_cycle <= 0.0 || p.peak_mac_per_cycle <= 0.0)
    throw error("MAC throughput must be positive");
  double rate = std::min({p.eff_mac_per_cycle, p.peak_mac_per_cycle, kind_peak, 27.0});
  uint64_t compute = macs == 0 ? 0 : static_cast<uint64_t>(std::ceil(double(macs) / rate));
  return (shadowed ? 0 : p.overhead_cycles) + compute;
}

uint64_t job_cycles(const job& j, const timing_params& p) {
  j.validate();
  return cycles_for_macs(j.macs(), j.shadowed, kind_peak_of(j), p);
}

engine::engine(timing_params p) : p_(p) {
  if (p_.eff_mac_per_cycle <= 0.0 || p_.peak_mac_per_cycle <= 0.0)
    throw error("MAC throughput must be positive");
}

size_t engine::fifo_depth(uint32_t idx) const {
  if (idx > 2) throw error(strf("FIFO index %u out of range [0,2]", idx));
  return fifos_[idx].size();
}

void engine::clear_fifos() {
  for (auto& f : fifos_) f.clear();
}

static void check_range(const std::vector<int16_t>& v, uint32_t width, const char* what) {
  int32_t lo = -(1 << (width - 1));
  int32_t hi = (1 << (width - 1)) - 1;
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] < lo || v[i] > hi)
      throw error(strf("%s[%zu] = %d does not fit %u-bit precision", what, i,
                       int(v[i]), width));
}

result engine::run(const job& j, const std::vector<int16_t>& input,
                   const std::vector<int16_t>& weights,
                   const std::vector<int32_t>* l1_partials) {
  j.validate();
  const uint32_t k = j.k();
  const uint32_t ho = j.h_out(), wo = j.w_out();
  const uint64_t n_out = uint64_t(j.n_filters) * ho * wo;

  if (input.size() != uint64_t(j.c_in) * j.h_in * j.w_in)
    throw error(strf("input size %zu != c_in*h_in*w_in = %llu", input.size(),
                     static_cast<unsigned long long>(uint64_t(j.c_in) * j.h_in * j.w_in)));
  if (weights.size() != uint64_t(j.n_filters) * j.c_in * k * k)
    throw error(strf("weight size %zu != n_filters*c_in*k*k = %llu", weights.size(),
                     static_cast<unsigned long long>(uint64_t(j.n_filters) * j.c_in * k * k)));
  check_range(input, j.precision_in, "input");
  check_range(weights, j.precision_w, "weight");

  if (j.accumulate_source == port::l1) {
    if (!l1_partials) throw error("accumulate_source=l1 requires a partials buffer");
    if (l1_partials->size() != n_out)
      throw error(strf("partials size %zu != outputs %llu", l1_partials->size(),
                       static_cast<unsigned long long>(n_out)));
  } else if (l1_partials) {
    throw error("partials buffer given but accumulate_source is not l1");
  }

  std::deque<int32_t>* src_fifo = nullptr;
  if (j.accumulate_source == port::fifo0 || j.accumulate_source == port::fifo1 ||
      j.accumulate_source == port::fifo2) {
    src_fifo = &fifos_[uint32_t(j.accumulate_source) - uint32_t(port::fifo0)];
    if (src_fifo->size() < n_out)
      throw error(strf("FIFO %u holds %zu partials, job needs %llu",
                       uint32_t(j.accumulate_source) - uint32_t(port::fifo0),
                       src_fifo->size(), static_cast<unsigned long long>(n_out)));
  }
  std::deque<int32_t>* dst_fifo = nullptr;
  if (j.output_sink != port::l1) {
    dst_fifo = &fifos_[uint32_t(j.output_sink) - uint32_t(port::fifo0)];
    if (dst_fifo->size() + n_out > kFifoCapacity)
      throw error("FIFO capacity exceeded");
  }

  result r;
  r.out.resize(n_out);
  r.normalized = (j.output_sink == port::l1);
  r.macs = j.macs();
  r.cycles = cycles_for_macs(r.macs, j.shadowed, kind_peak_of(j), p_);

  auto in_at = [&](uint32_t c, uint32_t y, uint32_t x) -> int32_t {
    return input[(uint64_t(c) * j.h_in + y) * j.w_in + x];
  };
  auto w_at = [&](uint32_t f, uint32_t c, uint32_t y, uint32_t x) -> int32_t {
    return weights[((uint64_t(f) * j.c_in + c) * k + y) * k + x];
  };

  uint64_t idx = 0;
  for (uint32_t f = 0; f < j.n_filters; ++f) {
    for (uint32_t y = 0; y < ho; ++y) {
      for (uint32_t x = 0; x < wo; ++x, ++idx) {
        uint32_t acc = 0;  // modular 32-bit accumulation
        if (j.accumulate_source == port::l1)
          acc = static_cast<uint32_t>((*l1_partials)[idx]);
        else if (src_fifo) {
          acc = static_cast<uint32_t>(src_fifo->front());
          src_fifo->pop_front();
        }
        for (uint32_t c = 0; c < j.c_in; ++c)
          for (uint32_t ky = 0; ky < k; ++ky)
            for (uint32_t kx = 0; kx < k; ++kx)
              acc += static_cast<uint32_t>(in_at(c, y + ky, x + kx) * w_at(f, c, ky, kx));
        int32_t raw = static_cast<int32_t>(acc);
        if (dst_fifo) {
          dst_fifo->push_back(raw);
          r.out[idx] = raw;
        } else {
          r.out[idx] = saturate_normalize(raw, j.norm_shift, j.out_width,
                                          p_.round_before_shift);
        }
      }
    }
  }
  return r;
}

}  // namespace vega::hwce
