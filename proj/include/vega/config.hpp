// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <vega/common.hpp>
#include <vega/hwce.hpp>
#include <vega/mem_hier.hpp>

namespace vega {

// Power-state parameters (anchored defaults; see README for sources).
struct power_params {
  std::string boundary = "chip_level";      // chip_level | unit_level
  double cognitive_floor_uw = 0.01;         // always-on domain residual
  double cognitive_retention_uw_per_kb = 0.15;
  double soc_active_lo_mw = 0.7;
  double soc_active_lo_f_hz = 32e3;
  double soc_active_hi_mw = 15.0;
  double soc_active_hi_f_hz = 450e6;
  double cluster_active_mw = 25.4;
  double cluster_active_hwce_mw = 49.4;
  mem::retention_params retentive =
      mem::hier_params::system_level_retention();  // retentive-sleep curve
  double wake_transition_j = 0.0;  // per wake event in duty-cycle profiles
};

// Whole-simulator configuration: every tunable has a flat dotted key in the
// config file; built-in defaults are the calibrated model values.
struct sim_config {
  mem::hier_params mem;
  hwce::timing_params hwce;
  double hwce_pj_per_mac = 1.54;
  double sw_conv_mac_per_cycle = 15.5;       // k x k convolutions
  double sw_pointwise_mac_per_cycle = 15.5;  // 1x1 / FC / matmul-like
  double sw_depthwise_mac_per_cycle = 3.0;
  double sw_residual_elem_per_cycle = 8.0;
  double sw_pj_per_mac = 3.26;
  double f_soc_hz = 250e6;
  double f_cl_hz = 250e6;
  power_params power;

  void validate() const;
};

// Named built-in presets applied on top of defaults (before config file and
// CLI flags): "default", "hwce-450", "nvm-energy-as-printed", "system-level".
void apply_profile(sim_config& cfg, const std::string& profile);
std::vector<std::string> profile_names();

// Key-value text format: `key = value` lines, `#` comments. Unknown keys and
// malformed values are hard errors. Doubles serialize with shortest
// round-trip formatting so save/load is bit-exact.
void apply_config_line(sim_config& cfg, const std::string& line, size_t lineno);
sim_config load_config(const std::string& path, sim_config base = {});
void save_config(const sim_config& cfg, const std::string& path);
std::string config_to_text(const sim_config& cfg);

// All registered keys in serialization order (for docs/tests).
std::vector<std::string> config_keys();

std::string format_double(double v);  // shortest round-trip
double parse_double(const std::string& s);

}  // namespace vega
