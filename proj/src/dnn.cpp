// SPDX-License-Identifier: Apache-2.0
#include <vega/dnn.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <vega/hwce.hpp>
#include <vega/mem_hier.hpp>

namespace vega::dnn {

using nlohmann::json;

const char* kind_name(layer_kind k) {
  switch (k) {
    case layer_kind::conv: return "conv";
    case layer_kind::pointwise: return "pointwise";
    case layer_kind::depthwise: return "depthwise";
    case layer_kind::fc: return "fc";
    case layer_kind::residual_add: return "residual_add";
  }
  return "?";
}

layer_kind kind_from_name(const std::string& s) {
  for (layer_kind k : {layer_kind::conv, layer_kind::pointwise, layer_kind::depthwise,
                       layer_kind::fc, layer_kind::residual_add})
    if (s == kind_name(k)) return k;
  throw parse_error(strf("unknown layer kind '%s'", s.c_str()));
}

const char* engine_name(engine_kind e) { return e == engine_kind::sw ? "sw" : "hwce"; }
const char* home_name(weight_home h) { return h == weight_home::mram ? "mram" : "hyperram"; }

uint64_t network::total_macs() const {
  uint64_t n = 0;
  for (const auto& l : layers) n += l.macs;
  return n;
}

uint64_t network::total_weight_bytes() const {
  uint64_t n = 0;
  for (const auto& l : layers) n += l.weight_bytes;
  return n;
}

layer make_layer(std::string name, layer_kind kind, uint32_t k, uint32_t stride,
                 uint32_t c_in, uint32_t c_out, uint32_t h_in, uint32_t w_in,
                 uint64_t declared_weight_bytes, uint64_t declared_act_in_bytes,
                 uint64_t declared_act_out_bytes) {
  layer l;
  l.name = std::move(name);
  l.kind = kind;
  l.k = k;
  l.stride = stride;
  l.c_in = c_in;
  l.c_out = c_out;
  l.h_in = h_in;
  l.w_in = w_in;
  const char* nm = l.name.c_str();
  if (c_in == 0 || c_out == 0 || h_in == 0 || w_in == 0 || k == 0 || stride == 0)
    throw parse_error(strf("layer '%s': dimensions must be positive", nm));
  switch (kind) {
    case layer_kind::conv:
      break;
    case layer_kind::pointwise:
    case layer_kind::fc:
      if (k != 1) throw parse_error(strf("layer '%s': %s requires k=1", nm, kind_name(kind)));
      break;
    case layer_kind::depthwise:
      if (c_in != c_out)
        throw parse_error(strf("layer '%s': depthwise requires c_in == c_out", nm));
      break;
    case layer_kind::residual_add:
      if (k != 1 || stride != 1 || c_in != c_out)
        throw parse_error(strf("layer '%s': residual_add requires k=1, stride=1, "
                               "c_in == c_out", nm));
      break;
  }
  if (kind == layer_kind::fc && (h_in != 1 || w_in != 1))
    throw parse_error(strf("layer '%s': fc requires 1x1 spatial input", nm));

  l.h_out = (h_in + stride - 1) / stride;  // same padding
  l.w_out = (w_in + stride - 1) / stride;
  uint64_t hw_out = uint64_t(l.h_out) * l.w_out;
  uint64_t kk = uint64_t(k) * k;
  switch (kind) {
    case layer_kind::conv:
      l.macs = kk * c_in * c_out * hw_out;
      l.weight_bytes = kk * c_in * c_out;
      break;
    case layer_kind::pointwise:
    case layer_kind::fc:
      l.macs = uint64_t(c_in) * c_out * hw_out;
      l.weight_bytes = uint64_t(c_in) * c_out;
      break;
    case layer_kind::depthwise:
      l.macs = kk * c_out * hw_out;
      l.weight_bytes = kk * c_out;
      break;
    case layer_kind::residual_add:
      l.macs = 0;
      l.elems = uint64_t(c_out) * hw_out;
      l.weight_bytes = 0;
      break;
  }
  uint64_t in_act = uint64_t(c_in) * h_in * w_in;
  l.act_in_bytes = (kind == layer_kind::residual_add) ? 2 * in_act : in_act;
  l.act_out_bytes = uint64_t(c_out) * hw_out;

  auto check = [&](const char* what, uint64_t declared, uint64_t computed) {
    if (declared != UINT64_MAX && declared != computed)
      throw parse_error(strf("layer '%s': declared %s %llu does not match computed %llu",
                             nm, what, static_cast<unsigned long long>(declared),
                             static_cast<unsigned long long>(computed)));
  };
  check("weight_bytes", declared_weight_bytes, l.weight_bytes);
  check("act_in_bytes", declared_act_in_bytes, l.act_in_bytes);
  check("act_out_bytes", declared_act_out_bytes, l.act_out_bytes);
  return l;
}

namespace {

std::vector<uint32_t> divisors(uint32_t n) {
  std::vector<uint32_t> d;
  for (uint32_t i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

uint64_t u64_field(const json& j, const char* key, const std::string& where,
                   bool required = true, uint64_t fallback = 0) {
  if (!j.contains(key)) {
    if (required) throw parse_error(strf("%s: missing field '%s'", where.c_str(), key));
    return fallback;
  }
  const json& v = j.at(key);
  if (!v.is_number_integer() || v.get<int64_t>() < 0)
    throw parse_error(strf("%s: field '%s' must be a non-negative integer",
                           where.c_str(), key));
  return v.get<uint64_t>();
}

std::string str_field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string())
    throw parse_error(strf("%s: missing string field '%s'", where.c_str(), key));
  return j.at(key).get<std::string>();
}

}  // namespace

network parse_network(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw parse_error(strf("%s: %s", origin.c_str(), e.what()));
  }
  if (!j.is_object()) throw parse_error(strf("%s: top level must be an object", origin.c_str()));
  uint64_t sv = u64_field(j, "schema_version", origin);
  if (sv != uint64_t(kSchemaVersion))
    throw parse_error(strf("%s: schema_version %llu unsupported (expected %d)",
                           origin.c_str(), static_cast<unsigned long long>(sv),
                           kSchemaVersion));
  network net;
  net.name = str_field(j, "name", origin);
  if (!j.contains("layers") || !j.at("layers").is_array() || j.at("layers").empty())
    throw parse_error(strf("%s: 'layers' must be a non-empty array", origin.c_str()));
  for (const json& lj : j.at("layers")) {
    std::string where = origin + ", layer " + std::to_string(net.layers.size());
    if (!lj.is_object()) throw parse_error(strf("%s: layer must be an object", where.c_str()));
    std::string name = str_field(lj, "name", where);
    where = origin + ", layer '" + name + "'";
    layer_kind kind = kind_from_name(str_field(lj, "kind", where));
    uint32_t k = uint32_t(u64_field(lj, "k", where, false, 1));
    uint32_t stride = uint32_t(u64_field(lj, "stride", where, false, 1));
    uint32_t c_in = uint32_t(u64_field(lj, "c_in", where));
    uint32_t c_out = uint32_t(u64_field(lj, "c_out", where));
    uint32_t h_in = uint32_t(u64_field(lj, "h_in", where));
    uint32_t w_in = uint32_t(u64_field(lj, "w_in", where));
    uint64_t wb = u64_field(lj, "weight_bytes", where, false, UINT64_MAX);
    uint64_t ab_in = u64_field(lj, "act_in_bytes", where, false, UINT64_MAX);
    uint64_t ab_out = u64_field(lj, "act_out_bytes", where, false, UINT64_MAX);
    layer l = make_layer(name, kind, k, stride, c_in, c_out, h_in, w_in, wb, ab_in, ab_out);
    if (lj.contains("engine")) {
      std::string e = str_field(lj, "engine", where);
      if (e == "sw") l.force_sw = true;
      else if (e != "auto")
        throw parse_error(strf("%s: engine hint '%s' must be sw or auto", where.c_str(),
                               e.c_str()));
    }
    for (const auto& existing : net.layers)
      if (existing.name == l.name)
        throw parse_error(strf("%s: duplicate layer name", where.c_str()));
    net.layers.push_back(std::move(l));
  }
  return net;
}

network load_network(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(strf("cannot open network descriptor '%s'", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_network(ss.str(), path);
}

tiling tile_layer(const layer& l, uint64_t l1_bytes) {
  const uint64_t budget = l1_bytes / 2;  // double buffering halves the space
  const bool dw = l.kind == layer_kind::depthwise;
  const bool res = l.kind == layer_kind::residual_add;
  const uint64_t kk = uint64_t(l.k) * l.k;

  tiling best;
  bool found = false;
  uint64_t best_work = 0, best_tiles = 0;

  for (uint32_t ct : divisors(l.c_out)) {
    uint64_t w_tile;
    if (res) w_tile = 0;
    else if (dw) w_tile = kk * ct;
    else if (l.kind == layer_kind::conv) w_tile = kk * l.c_in * ct;
    else w_tile = uint64_t(l.c_in) * ct;  // pointwise / fc
    if (w_tile > budget) continue;
    for (uint32_t ht : divisors(l.h_out)) {
      uint32_t ih = std::min<uint32_t>((ht - 1) * l.stride + l.k, l.h_in);
      for (uint32_t wt : divisors(l.w_out)) {
        uint32_t iw = std::min<uint32_t>((wt - 1) * l.stride + l.k, l.w_in);
        uint32_t cin_t = dw ? ct : l.c_in;
        uint64_t in_b = res ? 2ull * ct * ht * wt : uint64_t(cin_t) * ih * iw;
        uint64_t out_b = uint64_t(ct) * ht * wt;
        if (w_tile + in_b + out_b > budget) continue;
        uint64_t work;
        if (res) work = uint64_t(ct) * ht * wt;
        else if (dw) work = kk * ct * ht * wt;
        else if (l.kind == layer_kind::conv) work = kk * l.c_in * ct * ht * wt;
        else work = uint64_t(l.c_in) * ct * ht * wt;
        uint64_t n_c = l.c_out / ct;
        uint64_t n_s = uint64_t(l.h_out / ht) * (l.w_out / wt);
        uint64_t n = n_c * n_s;
        bool better = !found || work > best_work ||
                      (work == best_work &&
                       (n < best_tiles || (n == best_tiles && ct > best.c_out_t)));
        if (better) {
          found = true;
          best_work = work;
          best_tiles = n;
          best = tiling{ct, ht, wt, cin_t, in_b, w_tile, out_b,
                        uint32_t(n_c), uint32_t(n_s), work};
        }
      }
    }
  }
  if (!found)
    throw error(strf("no feasible tiling for layer '%s' within %llu-byte L1",
                     l.name.c_str(), static_cast<unsigned long long>(l1_bytes)));
  return best;
}

placement place_greedy(const network& n, uint64_t mram_capacity) {
  placement p;
  uint64_t cum = 0;
  bool spilled = false;
  for (size_t i = 0; i < n.layers.size(); ++i) {
    const layer& l = n.layers[i];
    if (!spilled && cum + l.weight_bytes <= mram_capacity) {
      cum += l.weight_bytes;
      p.home.push_back(weight_home::mram);
      p.last_mram = int(i);
    } else {
      spilled = true;  // greedy prefix: once spilled, everything else spills
      p.home.push_back(weight_home::hyperram);
      if (p.first_hyperram < 0) p.first_hyperram = int(i);
    }
  }
  p.mram_bytes = cum;
  return p;
}

placement place_uniform(const network& n, weight_home h, uint64_t mram_capacity) {
  placement p;
  p.home.assign(n.layers.size(), h);
  if (h == weight_home::mram) {
    p.mram_bytes = n.total_weight_bytes();
    if (p.mram_bytes > mram_capacity)
      throw error(strf("network weights (%llu B) exceed MRAM capacity (%llu B)",
                       static_cast<unsigned long long>(p.mram_bytes),
                       static_cast<unsigned long long>(mram_capacity)));
    p.last_mram = int(n.layers.size()) - 1;
  } else {
    p.first_hyperram = n.layers.empty() ? -1 : 0;
  }
  return p;
}

namespace {

struct pipeline_out {
  double makespan = 0;
  double compute_sum = 0, in_sum = 0, out_sum = 0;
  uint64_t in_bytes = 0, out_bytes = 0;  // L2<->L1 traffic incl. weights
};

// Stages 2-4 over one layer's tiles: channel-outer / spatial-inner order,
// weights ride the in-DMA on the first spatial tile of each channel group,
// 2-deep double buffering on the input buffers.
pipeline_out run_tiles(const layer& l, const tiling& t, engine_kind eng,
                       const sim_config& cfg) {
  const double bw = cfg.mem.l2_l1.bandwidth_mbps * 1e6 * cfg.mem.active_derate;
  const double setup = cfg.mem.dma_setup_s;
  const uint64_t n = t.n_tiles();
  const double f = cfg.f_cl_hz;

  double sw_rate;
  switch (l.kind) {
    case layer_kind::depthwise: sw_rate = cfg.sw_depthwise_mac_per_cycle; break;
    case layer_kind::residual_add: sw_rate = cfg.sw_residual_elem_per_cycle; break;
    case layer_kind::conv: sw_rate = cfg.sw_conv_mac_per_cycle; break;
    default: sw_rate = cfg.sw_pointwise_mac_per_cycle; break;
  }

  auto tile_compute_s = [&](uint64_t idx) {
    if (eng == engine_kind::hwce) {
      double kind_peak = l.k == 3 ? 27.0 : 25.0;
      uint64_t cycles =
          hwce::cycles_for_macs(t.work_per_tile, /*shadowed=*/idx > 0, kind_peak, cfg.hwce);
      return double(cycles) / f;
    }
    return double(t.work_per_tile) / sw_rate / f;
  };
  const double dt_out = double(t.out_bytes) / bw + setup;

  pipeline_out r;
  double in_prev = 0, cp_prev = 0, cp_prev2 = 0, out_prev = 0;
  for (uint64_t i = 0; i < n; ++i) {
    bool first_of_group = (i % t.n_spatial) == 0;
    uint64_t b_in = t.in_bytes + (first_of_group ? t.w_bytes : 0);
    double dt_in = double(b_in) / bw + setup;
    r.in_bytes += b_in;
    double in_start = (i > 0) ? in_prev : 0.0;
    if (i >= 2) in_start = std::max(in_start, cp_prev2);
    double in_done = in_start + dt_in;

    double tc = tile_compute_s(i);
    double cp_start = std::max(in_done, (i > 0) ? cp_prev : 0.0);
    double cp_done = cp_start + tc;

    double out_start = std::max(cp_done, (i > 0) ? out_prev : 0.0);
    double out_done = out_start + dt_out;
    r.out_bytes += t.out_bytes;

    r.compute_sum += tc;
    r.in_sum += dt_in;
    r.out_sum += dt_out;
    cp_prev2 = cp_prev;
    cp_prev = cp_done;
    in_prev = in_done;
    out_prev = out_done;
    r.makespan = out_done;
  }
  return r;
}

}  // namespace

network_report simulate(const network& n, const placement& p, engine_kind eng,
                        const sim_config& cfg, const std::string& weights_mode_label) {
  if (p.home.size() != n.layers.size())
    throw error("placement does not cover the network");
  cfg.validate();

  network_report rep;
  rep.network = n.name;
  rep.engine = eng;
  rep.weights_mode = weights_mode_label;
  rep.f_cl_hz = cfg.f_cl_hz;
  rep.total_macs = n.total_macs();
  rep.total_weight_bytes = n.total_weight_bytes();
  rep.last_mram = p.last_mram;
  rep.first_hyperram = p.first_hyperram;

  const uint64_t l2 = cfg.mem.l2_shared_bytes;
  double prev_start = 0, prev_end = 0, fetch_free = 0;

  for (size_t i = 0; i < n.layers.size(); ++i) {
    const layer& l = n.layers[i];
    const tiling t = tile_layer(l, cfg.mem.l1_bytes);
    const weight_home home = p.home[i];
    const mem::channel_id home_ch = home == weight_home::mram
                                        ? mem::channel_id::mram_l2
                                        : mem::channel_id::hyperram_l2;
    const engine_kind layer_eng =
        (eng == engine_kind::hwce && l.kind == layer_kind::conv &&
         (l.k == 3 || l.k == 5) && !l.force_sw)
            ? engine_kind::hwce
            : engine_kind::sw;

    double fetch_s = mem::transfer_latency_s(cfg.mem, home_ch, l.weight_bytes);
    pipeline_out pl = run_tiles(l, t, layer_eng, cfg);

    // stage 1: prefetch during the previous layer iff both working sets
    // co-reside in shared L2; otherwise stream L3->L2 during the layer itself
    bool prefetch = true;
    if (i > 0) {
      const layer& prev = n.layers[i - 1];
      if (l.weight_bytes + prev.weight_bytes + prev.act_in_bytes + prev.act_out_bytes > l2)
        prefetch = false;
    }
    if (l.weight_bytes + l.act_in_bytes + l.act_out_bytes > l2) prefetch = false;

    double start, end, l3_stream_s;
    if (prefetch) {
      double f_start = std::max(fetch_free, prev_start);  // one-layer lookahead
      double f_end = f_start + fetch_s;
      start = std::max(prev_end, f_end);
      end = start + pl.makespan;
      fetch_free = f_end;
      l3_stream_s = 0.0;
    } else {
      start = prev_end;
      end = start + std::max(pl.makespan, fetch_s);
      fetch_free = end;
      l3_stream_s = fetch_s;
    }

    layer_report lr;
    lr.name = l.name;
    lr.kind = l.kind;
    lr.engine = layer_eng;
    lr.home = home;
    lr.tile = t;
    lr.prefetch = prefetch;
    lr.fetch_s = fetch_s;
    lr.start_s = start;
    lr.end_s = end;
    lr.span_s = end - start;
    lr.stall_s = start - prev_end;
    lr.compute_sum_s = pl.compute_sum;
    lr.in_sum_s = pl.in_sum;
    lr.out_sum_s = pl.out_sum;
    lr.l3_stream_s = l3_stream_s;
    lr.compute_bound =
        pl.compute_sum >= std::max({pl.in_sum, pl.out_sum, l3_stream_s});
    lr.macs = l.macs;
    lr.l3_bytes = l.weight_bytes;
    lr.l2l1_in_bytes = pl.in_bytes;
    lr.l2l1_out_bytes = pl.out_bytes;
    double e_mac = layer_eng == engine_kind::hwce ? cfg.hwce_pj_per_mac : cfg.sw_pj_per_mac;
    lr.e_compute_j = double(l.macs) * e_mac * 1e-12;
    lr.e_l3_j = mem::transfer_energy_j(cfg.mem, home_ch, l.weight_bytes);
    lr.e_l2l1_j =
        mem::transfer_energy_j(cfg.mem, mem::channel_id::l2_l1, pl.in_bytes + pl.out_bytes);

    rep.e_compute_j += lr.e_compute_j;
    rep.e_l3_j += lr.e_l3_j;
    rep.e_l2l1_j += lr.e_l2l1_j;
    rep.layers.push_back(std::move(lr));

    prev_start = start;
    prev_end = end;
  }
  rep.total_s = prev_end;
  return rep;
}

}  // namespace vega::dnn
