// SPDX-License-Identifier: Apache-2.0
#include <vega/power_modes.hpp>

#include <algorithm>

#include <json.hpp>

#include <vega/cwu_power.hpp>
#include <vega/mem_hier.hpp>

namespace vega::power {

using nlohmann::json;

const char* mode_name(mode m) {
  switch (m) {
    case mode::cognitive_sleep: return "cognitive_sleep";
    case mode::retentive_sleep: return "retentive_sleep";
    case mode::soc_active: return "soc_active";
    case mode::cluster_active: return "cluster_active";
    case mode::cluster_active_hwce: return "cluster_active_hwce";
  }
  return "?";
}

mode mode_from_name(const std::string& s) {
  for (mode m : {mode::cognitive_sleep, mode::retentive_sleep, mode::soc_active,
                 mode::cluster_active, mode::cluster_active_hwce})
    if (s == mode_name(m)) return m;
  throw parse_error(strf("unknown power mode '%s'", s.c_str()));
}

double mode_power_w(mode m, const mode_cfg& c, const sim_config& cfg) {
  if (c.retained_kb < 0.0) throw error("retained_kb must be >= 0");
  switch (m) {
    case mode::cognitive_sleep: {
      auto bd = cwu::power_table::characterized().at(c.f_hz);
      double uw;
      if (cfg.power.boundary == "unit_level") {
        uw = bd.total_uw;  // CWU macro boundary incl. sensor interface pads
      } else {
        // chip boundary: datapath + leakage + always-on residual, no pads
        uw = bd.dyn_datapath_uw + bd.leak_uw + cfg.power.cognitive_floor_uw;
      }
      uw += cfg.power.cognitive_retention_uw_per_kb * c.retained_kb;
      return uw * 1e-6;
    }
    case mode::retentive_sleep:
      return mem::retention_power_uw(cfg.power.retentive, c.retained_kb) * 1e-6;
    case mode::soc_active: {
      const auto& p = cfg.power;
      double t = (c.f_hz - p.soc_active_lo_f_hz) /
                 (p.soc_active_hi_f_hz - p.soc_active_lo_f_hz);
      double mw = p.soc_active_lo_mw + t * (p.soc_active_hi_mw - p.soc_active_lo_mw);
      mw = std::clamp(mw, std::min(p.soc_active_lo_mw, p.soc_active_hi_mw),
                      std::max(p.soc_active_lo_mw, p.soc_active_hi_mw));
      return mw * 1e-3;
    }
    case mode::cluster_active:
      return cfg.power.cluster_active_mw * 1e-3;
    case mode::cluster_active_hwce:
      return cfg.power.cluster_active_hwce_mw * 1e-3;
  }
  throw error("unknown power mode");
}

namespace {

mode_cfg cfg_from_json(const json& j, const std::string& where) {
  mode_cfg c;
  if (j.contains("f_hz")) {
    if (!j.at("f_hz").is_number())
      throw parse_error(strf("%s: f_hz must be a number", where.c_str()));
    c.f_hz = j.at("f_hz").get<double>();
  }
  if (j.contains("retained_kb")) {
    if (!j.at("retained_kb").is_number())
      throw parse_error(strf("%s: retained_kb must be a number", where.c_str()));
    c.retained_kb = j.at("retained_kb").get<double>();
  }
  return c;
}

double num_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw parse_error(strf("%s: missing numeric field '%s'", where.c_str(), key));
  return j.at(key).get<double>();
}

}  // namespace

profile_request profile_from_json(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(strf("%s: %s", origin.c_str(), e.what()));
  }
  if (!j.is_object())
    throw parse_error(strf("%s: top level must be an object", origin.c_str()));
  if (!j.contains("schema_version") || !j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int64_t>() != kSchemaVersion)
    throw parse_error(strf("%s: schema_version must be %d", origin.c_str(), kSchemaVersion));

  profile_request req;
  if (j.contains("segments")) {
    const json& segs = j.at("segments");
    if (!segs.is_array() || segs.empty())
      throw parse_error(strf("%s: 'segments' must be a non-empty array", origin.c_str()));
    for (const json& sj : segs) {
      std::string where = origin + ", segment " +
                          std::to_string(req.profile.segments.size());
      if (!sj.is_object() || !sj.contains("mode") || !sj.at("mode").is_string())
        throw parse_error(strf("%s: needs a 'mode' string", where.c_str()));
      segment s;
      s.m = mode_from_name(sj.at("mode").get<std::string>());
      s.cfg = cfg_from_json(sj, where);
      s.seconds = num_field(sj, "seconds", where);
      if (s.seconds <= 0.0)
        throw parse_error(strf("%s: seconds must be positive", where.c_str()));
      req.profile.segments.push_back(s);
    }
  } else if (j.contains("event_rate_hz")) {
    double rate = num_field(j, "event_rate_hz", origin);
    double active_s = num_field(j, "active_s", origin);
    if (rate <= 0.0 || active_s <= 0.0)
      throw parse_error(strf("%s: event_rate_hz and active_s must be positive",
                             origin.c_str()));
    double period = 1.0 / rate;
    if (active_s >= period)
      throw parse_error(strf("%s: active_s %g exceeds the event period %g", origin.c_str(),
                             active_s, period));
    auto get_mode = [&](const char* key) -> segment {
      if (!j.contains(key) || !j.at(key).is_object() || !j.at(key).contains("mode"))
        throw parse_error(strf("%s: missing '%s' mode object", origin.c_str(), key));
      const json& mj = j.at(key);
      segment s;
      s.m = mode_from_name(mj.at("mode").get<std::string>());
      s.cfg = cfg_from_json(mj, origin + std::string(", ") + key);
      return s;
    };
    segment act = get_mode("active");
    act.seconds = active_s;
    segment slp = get_mode("sleep");
    slp.seconds = period - active_s;
    req.profile.segments = {act, slp};
    req.profile.wake_events_per_s = rate;
  } else {
    throw parse_error(strf("%s: need either 'segments' or 'event_rate_hz'", origin.c_str()));
  }

  if (j.contains("battery_mah") || j.contains("battery_v")) {
    req.has_battery = true;
    req.battery_mah = num_field(j, "battery_mah", origin);
    req.battery_v = num_field(j, "battery_v", origin);
  }
  return req;
}

double average_power_w(const duty_profile& p, const sim_config& cfg) {
  if (p.segments.empty()) throw error("duty-cycle profile has no segments");
  double e = 0.0, t = 0.0;
  for (const segment& s : p.segments) {
    if (s.seconds <= 0.0) throw error("segment durations must be positive");
    e += mode_power_w(s.m, s.cfg, cfg) * s.seconds;
    t += s.seconds;
  }
  double avg = e / t;
  if (p.wake_events_per_s > 0.0)
    avg += p.wake_events_per_s * cfg.power.wake_transition_j;
  return avg;
}

double battery_lifetime_h(double battery_mah, double battery_v, double avg_power_w) {
  if (battery_mah <= 0.0 || battery_v <= 0.0 || avg_power_w <= 0.0)
    throw error("battery capacity, voltage and average power must be positive");
  return battery_mah * battery_v / (1000.0 * avg_power_w);
}

estimate estimate_profile(const profile_request& req, const sim_config& cfg) {
  estimate e;
  for (const segment& s : req.profile.segments) {
    e.segment_power_w.push_back(mode_power_w(s.m, s.cfg, cfg));
    e.total_s += s.seconds;
  }
  e.average_w = average_power_w(req.profile, cfg);
  e.has_battery = req.has_battery;
  if (req.has_battery) {
    e.battery_mah = req.battery_mah;
    e.battery_v = req.battery_v;
    e.lifetime_h = battery_lifetime_h(req.battery_mah, req.battery_v, e.average_w);
  }
  return e;
}

}  // namespace vega::power
