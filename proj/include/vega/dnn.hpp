// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <vega/config.hpp>

namespace vega::dnn {

enum class layer_kind { conv, pointwise, depthwise, fc, residual_add };
const char* kind_name(layer_kind k);
layer_kind kind_from_name(const std::string& s);

enum class engine_kind { sw, hwce };
const char* engine_name(engine_kind e);

enum class weight_home { mram, hyperram };
const char* home_name(weight_home h);

// One network layer with recomputed geometry/byte counts (8-bit tensors).
struct layer {
  std::string name;
  layer_kind kind = layer_kind::conv;
  uint32_t k = 1;
  uint32_t stride = 1;
  uint32_t c_in = 0, c_out = 0;
  uint32_t h_in = 0, w_in = 0;
  uint32_t h_out = 0, w_out = 0;       // derived (same padding: ceil(h/stride))
  uint64_t macs = 0;                   // derived; 0 for residual_add
  uint64_t elems = 0;                  // residual_add work items
  uint64_t weight_bytes = 0;
  uint64_t act_in_bytes = 0;
  uint64_t act_out_bytes = 0;
  bool force_sw = false;               // descriptor engine hint "sw"
};

struct network {
  std::string name;
  std::vector<layer> layers;
  uint64_t total_macs() const;
  uint64_t total_weight_bytes() const;
};

// Derive h/w_out, macs, elems and the three byte counts from geometry,
// validating declared byte counts when present (UINT64_MAX = not declared).
layer make_layer(std::string name, layer_kind kind, uint32_t k, uint32_t stride,
                 uint32_t c_in, uint32_t c_out, uint32_t h_in, uint32_t w_in,
                 uint64_t declared_weight_bytes = UINT64_MAX,
                 uint64_t declared_act_in_bytes = UINT64_MAX,
                 uint64_t declared_act_out_bytes = UINT64_MAX);

network load_network(const std::string& path);
network parse_network(const std::string& json_text, const std::string& origin);

// Divisor-exhaustive double-buffered tiling: maximize per-tile MACs, then
// fewest tiles, then largest C_out_t, under w + in + out <= l1_bytes/2.
struct tiling {
  uint32_t c_out_t = 0, h_t = 0, w_t = 0, c_in_t = 0;
  uint64_t in_bytes = 0, w_bytes = 0, out_bytes = 0;  // per tile
  uint32_t n_channel_groups = 0, n_spatial = 0;
  uint64_t work_per_tile = 0;  // MACs (elements for residual_add)
  uint64_t n_tiles() const { return uint64_t(n_channel_groups) * n_spatial; }
  uint64_t l1_footprint() const { return 2 * (in_bytes + w_bytes + out_bytes); }
};
tiling tile_layer(const layer& l, uint64_t l1_bytes);

// Greedy prefix fill of MRAM in network order; remainder to HyperRAM.
struct placement {
  std::vector<weight_home> home;
  uint64_t mram_bytes = 0;
  int last_mram = -1;       // index of last MRAM-resident layer, -1 if none
  int first_hyperram = -1;  // index of first HyperRAM layer, -1 if none
};
placement place_greedy(const network& n, uint64_t mram_capacity);
placement place_uniform(const network& n, weight_home h, uint64_t mram_capacity);

struct layer_report {
  std::string name;
  layer_kind kind = layer_kind::conv;
  engine_kind engine = engine_kind::sw;
  weight_home home = weight_home::mram;
  tiling tile;
  bool prefetch = true;    // stage-1 prefetched; false = streamed during own run
  double fetch_s = 0;      // stage-1 (L3->L2 weights) duration
  double start_s = 0, end_s = 0;
  double span_s = 0;       // end - start
  double stall_s = 0;      // wait on stage 1 beyond the previous layer's end
  double compute_sum_s = 0, in_sum_s = 0, out_sum_s = 0, l3_stream_s = 0;
  bool compute_bound = true;
  uint64_t macs = 0;
  uint64_t l3_bytes = 0;
  uint64_t l2l1_in_bytes = 0, l2l1_out_bytes = 0;  // weights ride the in channel
  double e_compute_j = 0, e_l3_j = 0, e_l2l1_j = 0;
};

struct network_report {
  std::string network;
  engine_kind engine = engine_kind::sw;
  std::string weights_mode;  // greedy | mram | hyperram
  double f_cl_hz = 0;
  double total_s = 0;
  uint64_t total_macs = 0;
  uint64_t total_weight_bytes = 0;
  int last_mram = -1;
  int first_hyperram = -1;
  double e_compute_j = 0, e_l3_j = 0, e_l2l1_j = 0;
  double e_total_j() const { return e_compute_j + e_l3_j + e_l2l1_j; }
  std::vector<layer_report> layers;
};

// Discrete-event simulation of the 4-stage pipeline: stage 1 (L3->L2 weights)
// prefetched one layer ahead when the L2 working sets fit, otherwise streamed
// during the layer's own execution; stages 2-4 are software-pipelined across
// tiles with 2-deep double buffering.
network_report simulate(const network& n, const placement& p, engine_kind eng,
                        const sim_config& cfg, const std::string& weights_mode_label);

}  // namespace vega::dnn
