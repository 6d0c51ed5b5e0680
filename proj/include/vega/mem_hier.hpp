// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include <vega/common.hpp>

namespace vega::mem {

enum class channel_id { hyperram_l2, mram_l2, l2_l1, l1 };

const char* channel_name(channel_id c);
channel_id channel_from_name(const std::string& s);

struct channel {
  double bandwidth_mbps = 0.0;      // 1 MB = 1e6 bytes
  double energy_pj_per_byte = 0.0;
};

struct retention_params {
  double lo_kb = 16.0;
  double lo_uw = 1.2;
  double hi_kb = 1600.0;
  double hi_uw = 112.0;
  double bank_kb = 16.0;  // retained size quantizes up to bank granularity
};

struct hier_params {
  channel hyperram_l2{300.0, 880.0};  // energy columns corrected (see README)
  channel mram_l2{200.0, 20.0};
  channel l2_l1{1900.0, 1.4};
  channel l1{8000.0, 0.9};
  double dma_setup_s = 1e-6;   // fixed per-transfer setup, configurable to 0
  double active_derate = 0.9;  // L2<->L1 / L1 bandwidth factor under compute contention
  uint64_t l1_bytes = 131072;
  uint64_t l2_shared_bytes = 1572864;  // 1.5 MB interleaved
  uint64_t l2_private_bytes = 65536;
  uint64_t mram_bytes = 4194304;
  retention_params retention;  // block-level curve: 1.2..112 uW

  const channel& at(channel_id c) const;
  channel& at(channel_id c);
  void validate() const;

  // Alternate parameter sets.
  static retention_params system_level_retention();  // includes always-on domain
  static hier_params table_as_printed();  // HyperRAM/MRAM energy columns swapped
};

// bytes / bandwidth + per-transfer setup; the derate applies to L2<->L1 and
// L1 channels while the compute engine is active.
double transfer_latency_s(const hier_params& p, channel_id c, uint64_t bytes,
                          bool engine_active = false);
double transfer_energy_j(const hier_params& p, channel_id c, uint64_t bytes);

// Linear retention power over quantized bank count; errors outside
// [lo_kb, hi_kb] after quantization.
double retention_power_uw(const retention_params& r, double retained_kb);

}  // namespace vega::mem
