// SPDX-License-Identifier: Apache-2.0
#include <vega/config.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace vega {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw error("double formatting failed");
  return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
  const char* b = s.data();
  const char* e = b + s.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e)
    throw parse_error(strf("bad numeric value '%s'", s.c_str()));
  return v;
}

namespace {

struct field {
  const char* key;
  std::function<std::string(const sim_config&)> get;
  std::function<void(sim_config&, const std::string&)> set;
};

std::vector<field> make_registry() {
  std::vector<field> r;
  auto dbl = [&r](const char* key, auto access) {
    r.push_back({key,
                 [access](const sim_config& c) { return format_double(access(const_cast<sim_config&>(c))); },
                 [access](sim_config& c, const std::string& v) { access(c) = parse_double(v); }});
  };
  auto u64 = [&r](const char* key, auto access) {
    r.push_back({key,
                 [access](const sim_config& c) {
                   return std::to_string(access(const_cast<sim_config&>(c)));
                 },
                 [access](sim_config& c, const std::string& v) {
                   uint64_t out = 0;
                   auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
                   if (ec != std::errc() || ptr != v.data() + v.size())
                     throw parse_error(strf("bad integer value '%s'", v.c_str()));
                   access(c) = out;
                 }});
  };
  auto boolean = [&r](const char* key, auto access) {
    r.push_back({key,
                 [access](const sim_config& c) {
                   return std::string(access(const_cast<sim_config&>(c)) ? "true" : "false");
                 },
                 [access](sim_config& c, const std::string& v) {
                   if (v == "true" || v == "1") access(c) = true;
                   else if (v == "false" || v == "0") access(c) = false;
                   else throw parse_error(strf("bad boolean value '%s'", v.c_str()));
                 }});
  };
  auto str = [&r](const char* key, auto access) {
    r.push_back({key,
                 [access](const sim_config& c) {
                   return access(const_cast<sim_config&>(c));
                 },
                 [access](sim_config& c, const std::string& v) { access(c) = v; }});
  };

#define DBL(key, expr) dbl(key, [](sim_config& c) -> double& { return c.expr; })
#define U64(key, expr) u64(key, [](sim_config& c) -> uint64_t& { return c.expr; })
#define BOOL(key, expr) boolean(key, [](sim_config& c) -> bool& { return c.expr; })
#define STR(key, expr) str(key, [](sim_config& c) -> std::string& { return c.expr; })

  DBL("mem.hyperram_l2.bandwidth_mbps", mem.hyperram_l2.bandwidth_mbps);
  DBL("mem.hyperram_l2.energy_pj_per_byte", mem.hyperram_l2.energy_pj_per_byte);
  DBL("mem.mram_l2.bandwidth_mbps", mem.mram_l2.bandwidth_mbps);
  DBL("mem.mram_l2.energy_pj_per_byte", mem.mram_l2.energy_pj_per_byte);
  DBL("mem.l2_l1.bandwidth_mbps", mem.l2_l1.bandwidth_mbps);
  DBL("mem.l2_l1.energy_pj_per_byte", mem.l2_l1.energy_pj_per_byte);
  DBL("mem.l1.bandwidth_mbps", mem.l1.bandwidth_mbps);
  DBL("mem.l1.energy_pj_per_byte", mem.l1.energy_pj_per_byte);
  DBL("mem.dma_setup_us", mem.dma_setup_s);  // stored in seconds; key in us
  r.back().get = [](const sim_config& c) { return format_double(c.mem.dma_setup_s * 1e6); };
  r.back().set = [](sim_config& c, const std::string& v) {
    c.mem.dma_setup_s = parse_double(v) / 1e6;  // division is correctly rounded
  };
  DBL("mem.l2_l1.active_derate", mem.active_derate);
  U64("mem.l1_bytes", mem.l1_bytes);
  U64("mem.l2_shared_bytes", mem.l2_shared_bytes);
  U64("mem.l2_private_bytes", mem.l2_private_bytes);
  U64("mem.mram_bytes", mem.mram_bytes);
  DBL("mem.retention.lo_kb", mem.retention.lo_kb);
  DBL("mem.retention.lo_uw", mem.retention.lo_uw);
  DBL("mem.retention.hi_kb", mem.retention.hi_kb);
  DBL("mem.retention.hi_uw", mem.retention.hi_uw);
  DBL("mem.retention.bank_kb", mem.retention.bank_kb);
  DBL("hwce.eff_mac_per_cycle", hwce.eff_mac_per_cycle);
  DBL("hwce.peak_mac_per_cycle", hwce.peak_mac_per_cycle);
  U64("hwce.overhead_cycles", hwce.overhead_cycles);
  BOOL("hwce.round_before_shift", hwce.round_before_shift);
  DBL("hwce.pj_per_mac", hwce_pj_per_mac);
  DBL("sw.conv_mac_per_cycle", sw_conv_mac_per_cycle);
  DBL("sw.pointwise_mac_per_cycle", sw_pointwise_mac_per_cycle);
  DBL("sw.depthwise_mac_per_cycle", sw_depthwise_mac_per_cycle);
  DBL("sw.residual_elem_per_cycle", sw_residual_elem_per_cycle);
  DBL("sw.pj_per_mac", sw_pj_per_mac);
  DBL("clock.f_soc_hz", f_soc_hz);
  DBL("clock.f_cl_hz", f_cl_hz);
  STR("power.boundary", power.boundary);
  DBL("power.cognitive_floor_uw", power.cognitive_floor_uw);
  DBL("power.cognitive_retention_uw_per_kb", power.cognitive_retention_uw_per_kb);
  DBL("power.soc_active_lo_mw", power.soc_active_lo_mw);
  DBL("power.soc_active_lo_f_hz", power.soc_active_lo_f_hz);
  DBL("power.soc_active_hi_mw", power.soc_active_hi_mw);
  DBL("power.soc_active_hi_f_hz", power.soc_active_hi_f_hz);
  DBL("power.cluster_active_mw", power.cluster_active_mw);
  DBL("power.cluster_active_hwce_mw", power.cluster_active_hwce_mw);
  DBL("power.retentive.lo_kb", power.retentive.lo_kb);
  DBL("power.retentive.lo_uw", power.retentive.lo_uw);
  DBL("power.retentive.hi_kb", power.retentive.hi_kb);
  DBL("power.retentive.hi_uw", power.retentive.hi_uw);
  DBL("power.retentive.bank_kb", power.retentive.bank_kb);
  DBL("power.wake_transition_uj", power.wake_transition_j);
  r.back().get = [](const sim_config& c) {
    return format_double(c.power.wake_transition_j * 1e6);
  };
  r.back().set = [](sim_config& c, const std::string& v) {
    c.power.wake_transition_j = parse_double(v) / 1e6;
  };

#undef DBL
#undef U64
#undef BOOL
#undef STR
  return r;
}

const std::vector<field>& registry() {
  static const std::vector<field> r = make_registry();
  return r;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void sim_config::validate() const {
  mem.validate();
  if (hwce.eff_mac_per_cycle <= 0.0 || hwce.peak_mac_per_cycle <= 0.0)
    throw error("hwce throughput must be positive");
  for (double v : {sw_conv_mac_per_cycle, sw_pointwise_mac_per_cycle,
                   sw_depthwise_mac_per_cycle, sw_residual_elem_per_cycle})
    if (v <= 0.0) throw error("sw throughput must be positive");
  if (sw_pj_per_mac < 0.0 || hwce_pj_per_mac < 0.0)
    throw error("energy per MAC must be >= 0");
  if (f_soc_hz <= 0.0 || f_cl_hz <= 0.0) throw error("clocks must be positive");
  if (power.boundary != "chip_level" && power.boundary != "unit_level")
    throw error(strf("power.boundary '%s' must be chip_level or unit_level",
                     power.boundary.c_str()));
  if (power.wake_transition_j < 0.0) throw error("wake transition energy must be >= 0");
}

std::vector<std::string> profile_names() {
  return {"default", "hwce-450", "nvm-energy-as-printed", "system-level"};
}

void apply_profile(sim_config& cfg, const std::string& profile) {
  if (profile == "default") return;
  if (profile == "hwce-450") {
    cfg.f_cl_hz = 450e6;
    cfg.hwce.eff_mac_per_cycle = 27.0;
    return;
  }
  if (profile == "nvm-energy-as-printed") {
    cfg.mem.hyperram_l2.energy_pj_per_byte = 20.0;
    cfg.mem.mram_l2.energy_pj_per_byte = 880.0;
    return;
  }
  if (profile == "system-level") {
    cfg.mem.retention = mem::hier_params::system_level_retention();
    return;
  }
  std::string names;
  for (const auto& n : profile_names()) names += (names.empty() ? "" : ", ") + n;
  throw error(strf("unknown profile '%s' (valid: %s)", profile.c_str(), names.c_str()));
}

void apply_config_line(sim_config& cfg, const std::string& raw, size_t lineno) {
  std::string line = raw;
  size_t hash = line.find('#');
  if (hash != std::string::npos) line.erase(hash);
  line = trim(line);
  if (line.empty()) return;
  size_t eq = line.find('=');
  if (eq == std::string::npos)
    throw parse_error(strf("config line %zu: expected 'key = value'", lineno));
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  for (const auto& f : registry()) {
    if (key == f.key) {
      try {
        f.set(cfg, value);
      } catch (const parse_error& e) {
        throw parse_error(strf("config line %zu (%s): %s", lineno, key.c_str(), e.what()));
      }
      return;
    }
  }
  throw parse_error(strf("config line %zu: unknown key '%s'", lineno, key.c_str()));
}

sim_config load_config(const std::string& path, sim_config base) {
  std::ifstream in(path);
  if (!in) throw io_error(strf("cannot open config file '%s'", path.c_str()));
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) apply_config_line(base, line, ++lineno);
  base.validate();
  return base;
}

std::string config_to_text(const sim_config& cfg) {
  std::string out;
  for (const auto& f : registry()) {
    out += f.key;
    out += " = ";
    out += f.get(cfg);
    out += "\n";
  }
  return out;
}

void save_config(const sim_config& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error(strf("cannot write config file '%s'", path.c_str()));
  out << config_to_text(cfg);
  if (!out) throw io_error(strf("write failed for '%s'", path.c_str()));
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : registry()) keys.push_back(f.key);
  return keys;
}

}  // namespace vega
