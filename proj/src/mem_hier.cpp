// SPDX-License-Identifier: Apache-2.0
#include <vega/mem_hier.hpp>

#include <cmath>

namespace vega::mem {

const char* channel_name(channel_id c) {
  switch (c) {
    case channel_id::hyperram_l2: return "hyperram_l2";
    case channel_id::mram_l2: return "mram_l2";
    case channel_id::l2_l1: return "l2_l1";
    case channel_id::l1: return "l1";
  }
  return "?";
}

channel_id channel_from_name(const std::string& s) {
  for (channel_id c : {channel_id::hyperram_l2, channel_id::mram_l2, channel_id::l2_l1,
                       channel_id::l1})
    if (s == channel_name(c)) return c;
  throw error(strf("unknown transfer channel '%s'", s.c_str()));
}

const channel& hier_params::at(channel_id c) const {
  switch (c) {
    case channel_id::hyperram_l2: return hyperram_l2;
    case channel_id::mram_l2: return mram_l2;
    case channel_id::l2_l1: return l2_l1;
    case channel_id::l1: return l1;
  }
  throw error("unknown transfer channel");
}

channel& hier_params::at(channel_id c) {
  return const_cast<channel&>(static_cast<const hier_params*>(this)->at(c));
}

void hier_params::validate() const {
  for (channel_id c : {channel_id::hyperram_l2, channel_id::mram_l2, channel_id::l2_l1,
                       channel_id::l1}) {
    const channel& ch = at(c);
    if (ch.bandwidth_mbps <= 0.0 || ch.energy_pj_per_byte <= 0.0)
      throw error(strf("channel %s: bandwidth and energy must be positive",
                       channel_name(c)));
  }
  if (dma_setup_s < 0.0) throw error("dma setup latency must be >= 0");
  if (active_derate <= 0.0 || active_derate > 1.0)
    throw error("active derate must be in (0,1]");
  if (retention.lo_kb <= 0.0 || retention.hi_kb <= retention.lo_kb ||
      retention.bank_kb <= 0.0 || retention.lo_uw < 0.0 ||
      retention.hi_uw <= retention.lo_uw)
    throw error("invalid retention curve");
}

retention_params hier_params::system_level_retention() {
  return retention_params{16.0, 2.8, 1600.0, 123.7, 16.0};
}

hier_params hier_params::table_as_printed() {
  hier_params p;
  p.hyperram_l2.energy_pj_per_byte = 20.0;
  p.mram_l2.energy_pj_per_byte = 880.0;
  return p;
}

double transfer_latency_s(const hier_params& p, channel_id c, uint64_t bytes,
                          bool engine_active) {
  const channel& ch = p.at(c);
  double bw = ch.bandwidth_mbps * 1e6;
  if (engine_active && (c == channel_id::l2_l1 || c == channel_id::l1))
    bw *= p.active_derate;
  return double(bytes) / bw + p.dma_setup_s;
}

double transfer_energy_j(const hier_params& p, channel_id c, uint64_t bytes) {
  return double(bytes) * p.at(c).energy_pj_per_byte * 1e-12;
}

double retention_power_uw(const retention_params& r, double retained_kb) {
  if (!(retained_kb > 0.0))
    throw error(strf("retained size %g kB out of range", retained_kb));
  double banks = std::ceil(retained_kb / r.bank_kb);
  double q_kb = banks * r.bank_kb;
  if (q_kb < r.lo_kb || q_kb > r.hi_kb)
    throw error(strf("retained size %g kB (quantized %g kB) outside [%g, %g] kB",
                     retained_kb, q_kb, r.lo_kb, r.hi_kb));
  double t = (q_kb - r.lo_kb) / (r.hi_kb - r.lo_kb);
  return r.lo_uw + t * (r.hi_uw - r.lo_uw);
}

}  // namespace vega::mem
