// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <vega/config.hpp>

namespace vega::power {

enum class mode {
  cognitive_sleep,
  retentive_sleep,
  soc_active,
  cluster_active,
  cluster_active_hwce,
};

const char* mode_name(mode m);
mode mode_from_name(const std::string& s);

struct mode_cfg {
  double f_hz = 32e3;        // cognitive/soc clock; ignored by cluster modes
  double retained_kb = 0.0;  // retained SRAM (cognitive/retentive)
};

double mode_power_w(mode m, const mode_cfg& c, const sim_config& cfg);

struct segment {
  mode m = mode::cognitive_sleep;
  mode_cfg cfg;
  double seconds = 0.0;
};

struct duty_profile {
  std::vector<segment> segments;
  double wake_events_per_s = 0.0;  // charges the configured transition energy
};

// Two accepted JSON shapes: an explicit segment list, or an event-rate form
// (event_rate_hz, active_s, active{}, sleep{}) that expands to one period.
// Optional battery_mah/battery_v request a lifetime estimate.
struct profile_request {
  duty_profile profile;
  bool has_battery = false;
  double battery_mah = 0.0;
  double battery_v = 0.0;
};
profile_request profile_from_json(const std::string& json_text, const std::string& origin);

double average_power_w(const duty_profile& p, const sim_config& cfg);
double battery_lifetime_h(double battery_mah, double battery_v, double avg_power_w);

struct estimate {
  std::vector<double> segment_power_w;  // parallel to profile.segments
  double total_s = 0.0;
  double average_w = 0.0;
  bool has_battery = false;
  double battery_mah = 0.0, battery_v = 0.0;
  double lifetime_h = 0.0;
};
estimate estimate_profile(const profile_request& req, const sim_config& cfg);

}  // namespace vega::power
