// SPDX-License-Identifier: Apache-2.0
#include <vega/report.hpp>

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include <vega/common.hpp>

namespace vega::report {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string ms(double seconds) { return strf("%.6f", seconds * 1e3); }
std::string mj(double joules) { return strf("%.6f", joules * 1e3); }
double ms_v(double seconds) { return seconds * 1e3; }
double mj_v(double joules) { return joules * 1e3; }

const char* bound_name(bool compute_bound) { return compute_bound ? "compute" : "memory"; }

ordered_json meta_json(const meta& m) {
  ordered_json j;
  j["profile"] = m.profile;
  j["seed"] = m.seed;
  return j;
}

std::string layer_name_or_empty(const dnn::network_report& r, int idx) {
  if (idx < 0 || idx >= static_cast<int>(r.layers.size())) return {};
  return r.layers[static_cast<size_t>(idx)].name;
}

}  // namespace

std::string dnn_csv(const dnn::network_report& r) {
  std::string out;
  out += strf("# schema_version=%d\n", kSchemaVersion);
  out += "# report=dnn_schedule\n";
  out += "# network=" + r.network + "\n";
  out += std::string("# engine=") + dnn::engine_name(r.engine) + "\n";
  out += "# weights=" + r.weights_mode + "\n";
  out += "# f_cl_hz=" + format_double(r.f_cl_hz) + "\n";
  out += "# total_ms=" + ms(r.total_s) + "\n";
  out += "# e_total_mj=" + mj(r.e_total_j()) + "\n";
  out +=
      "layer,kind,engine,home,prefetch,tiles,c_out_t,h_t,w_t,"
      "start_ms,end_ms,span_ms,stall_ms,fetch_ms,compute_ms,in_dma_ms,out_dma_ms,"
      "l3_stream_ms,bound,macs,l3_bytes,l2l1_in_bytes,l2l1_out_bytes,"
      "e_compute_mj,e_l3_mj,e_l2l1_mj\n";
  for (const auto& l : r.layers) {
    out += l.name;
    out += ',';
    out += dnn::kind_name(l.kind);
    out += ',';
    out += dnn::engine_name(l.engine);
    out += ',';
    out += dnn::home_name(l.home);
    out += ',';
    out += l.prefetch ? "1" : "0";
    out += strf(",%llu,%u,%u,%u", static_cast<unsigned long long>(l.tile.n_tiles()),
                l.tile.c_out_t, l.tile.h_t, l.tile.w_t);
    out += ',' + ms(l.start_s) + ',' + ms(l.end_s) + ',' + ms(l.span_s) + ',' + ms(l.stall_s);
    out += ',' + ms(l.fetch_s) + ',' + ms(l.compute_sum_s) + ',' + ms(l.in_sum_s) + ',' +
           ms(l.out_sum_s) + ',' + ms(l.l3_stream_s);
    out += ',';
    out += bound_name(l.compute_bound);
    out += strf(",%llu,%llu,%llu,%llu", static_cast<unsigned long long>(l.macs),
                static_cast<unsigned long long>(l.l3_bytes),
                static_cast<unsigned long long>(l.l2l1_in_bytes),
                static_cast<unsigned long long>(l.l2l1_out_bytes));
    out += ',' + mj(l.e_compute_j) + ',' + mj(l.e_l3_j) + ',' + mj(l.e_l2l1_j) + '\n';
  }
  return out;
}

std::string dnn_json(const dnn::network_report& r, const meta& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "dnn_schedule";
  j["metadata"] = meta_json(m);
  j["network"] = r.network;
  j["engine"] = dnn::engine_name(r.engine);
  j["weights"] = r.weights_mode;
  j["f_cl_hz"] = r.f_cl_hz;
  ordered_json totals;
  totals["time_ms"] = ms_v(r.total_s);
  totals["macs"] = r.total_macs;
  totals["weight_bytes"] = r.total_weight_bytes;
  if (r.last_mram >= 0)
    totals["last_mram"] = layer_name_or_empty(r, r.last_mram);
  else
    totals["last_mram"] = nullptr;
  if (r.first_hyperram >= 0)
    totals["first_hyperram"] = layer_name_or_empty(r, r.first_hyperram);
  else
    totals["first_hyperram"] = nullptr;
  ordered_json te;
  te["compute"] = mj_v(r.e_compute_j);
  te["l3"] = mj_v(r.e_l3_j);
  te["l2l1"] = mj_v(r.e_l2l1_j);
  te["total"] = mj_v(r.e_total_j());
  totals["energy_mj"] = te;
  j["totals"] = totals;

  ordered_json layers = ordered_json::array();
  for (const auto& l : r.layers) {
    ordered_json e;
    e["name"] = l.name;
    e["kind"] = dnn::kind_name(l.kind);
    e["engine"] = dnn::engine_name(l.engine);
    e["home"] = dnn::home_name(l.home);
    e["prefetch"] = l.prefetch;
    ordered_json tile;
    tile["c_out_t"] = l.tile.c_out_t;
    tile["h_t"] = l.tile.h_t;
    tile["w_t"] = l.tile.w_t;
    tile["c_in_t"] = l.tile.c_in_t;
    tile["n_tiles"] = l.tile.n_tiles();
    tile["in_bytes"] = l.tile.in_bytes;
    tile["w_bytes"] = l.tile.w_bytes;
    tile["out_bytes"] = l.tile.out_bytes;
    e["tile"] = tile;
    ordered_json t;
    t["start"] = ms_v(l.start_s);
    t["end"] = ms_v(l.end_s);
    t["span"] = ms_v(l.span_s);
    t["stall"] = ms_v(l.stall_s);
    t["fetch"] = ms_v(l.fetch_s);
    t["compute"] = ms_v(l.compute_sum_s);
    t["in_dma"] = ms_v(l.in_sum_s);
    t["out_dma"] = ms_v(l.out_sum_s);
    t["l3_stream"] = ms_v(l.l3_stream_s);
    e["times_ms"] = t;
    e["bound"] = bound_name(l.compute_bound);
    e["macs"] = l.macs;
    e["l3_bytes"] = l.l3_bytes;
    ordered_json bb;
    bb["in"] = l.l2l1_in_bytes;
    bb["out"] = l.l2l1_out_bytes;
    e["l2l1_bytes"] = bb;
    ordered_json en;
    en["compute"] = mj_v(l.e_compute_j);
    en["l3"] = mj_v(l.e_l3_j);
    en["l2l1"] = mj_v(l.e_l2l1_j);
    e["energy_mj"] = en;
    layers.push_back(std::move(e));
  }
  j["layers"] = layers;
  return j.dump(2) + "\n";
}

std::string dnn_svg(const dnn::network_report& r) {
  // Stacked per-layer channel-occupancy bars: compute (orange), L2<->L1 DMA
  // (blue), exposed L3 streaming (green).
  constexpr double kBarW = 14.0, kGap = 6.0;
  constexpr double kLeft = 56.0, kTop = 44.0, kPlotH = 210.0, kBottom = 84.0;
  const size_t n = r.layers.size();
  const double plot_w = n > 0 ? n * (kBarW + kGap) - kGap : kBarW;
  const double width = kLeft + plot_w + 170.0;  // room for the legend
  const double height = kTop + kPlotH + kBottom;

  double max_ms = 0.0;
  for (const auto& l : r.layers) {
    double stack = ms_v(l.compute_sum_s) + ms_v(l.in_sum_s + l.out_sum_s) + ms_v(l.l3_stream_s);
    max_ms = std::max(max_ms, stack);
  }
  if (max_ms <= 0.0) max_ms = 1.0;
  const double scale = kPlotH / max_ms;

  std::string s;
  s += strf(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
      "viewBox=\"0 0 %.0f %.0f\">\n",
      width, height, width, height);
  s += strf("<rect x=\"0\" y=\"0\" width=\"%.0f\" height=\"%.0f\" fill=\"#ffffff\"/>\n", width,
            height);
  s += strf(
      "<text x=\"%.1f\" y=\"20\" font-family=\"monospace\" font-size=\"12\" "
      "fill=\"#000000\">%s &#8212; %s / %s</text>\n",
      kLeft, r.network.c_str(), dnn::engine_name(r.engine), r.weights_mode.c_str());

  // Axis with quarter gridlines.
  const double base_y = kTop + kPlotH;
  for (int q = 0; q <= 4; ++q) {
    double v = max_ms * q / 4.0;
    double y = base_y - v * scale;
    s += strf(
        "<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#dddddd\" "
        "stroke-width=\"1\"/>\n",
        kLeft, y, kLeft + plot_w, y);
    s += strf(
        "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"8\" "
        "fill=\"#000000\" text-anchor=\"end\">%.3f</text>\n",
        kLeft - 4.0, y + 3.0, v);
  }
  s += strf(
      "<text x=\"12\" y=\"%.1f\" font-family=\"monospace\" font-size=\"9\" fill=\"#000000\" "
      "transform=\"rotate(-90 12 %.1f)\" text-anchor=\"middle\">ms</text>\n",
      kTop + kPlotH / 2.0, kTop + kPlotH / 2.0);

  for (size_t i = 0; i < n; ++i) {
    const auto& l = r.layers[i];
    const double x = kLeft + i * (kBarW + kGap);
    struct seg {
      double v;
      const char* color;
      const char* label;
    };
    const seg segs[3] = {
        {ms_v(l.compute_sum_s), "#ff7f0e", "compute"},
        {ms_v(l.in_sum_s + l.out_sum_s), "#1f77b4", "l2l1 dma"},
        {ms_v(l.l3_stream_s), "#2ca02c", "l3 stream"},
    };
    double y = base_y;
    for (const auto& g : segs) {
      if (g.v <= 0.0) continue;
      double h = g.v * scale;
      y -= h;
      s += strf("<rect x=\"%.1f\" y=\"%.2f\" width=\"%.1f\" height=\"%.2f\" fill=\"%s\">", x, y,
                kBarW, h, g.color);
      s += strf("<title>%s %s %.6f ms</title></rect>\n", l.name.c_str(), g.label, g.v);
    }
    s += strf(
        "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"7\" fill=\"#000000\" "
        "transform=\"rotate(-60 %.1f %.1f)\" text-anchor=\"end\">%s</text>\n",
        x + kBarW / 2.0, base_y + 10.0, x + kBarW / 2.0, base_y + 10.0, l.name.c_str());
  }

  // Legend.
  const double lx = kLeft + plot_w + 24.0;
  const char* names[3] = {"compute", "l2l1 dma", "l3 stream"};
  const char* colors[3] = {"#ff7f0e", "#1f77b4", "#2ca02c"};
  for (int i = 0; i < 3; ++i) {
    double y = kTop + 10.0 + i * 16.0;
    s += strf("<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"%s\"/>\n", lx, y,
              colors[i]);
    s += strf(
        "<text x=\"%.1f\" y=\"%.1f\" font-family=\"monospace\" font-size=\"9\" "
        "fill=\"#000000\">%s</text>\n",
        lx + 14.0, y + 9.0, names[i]);
  }
  s += "</svg>\n";
  return s;
}

std::string power_json(const power::profile_request& req, const power::estimate& e,
                       const meta& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "power_estimate";
  j["metadata"] = meta_json(m);
  ordered_json segs = ordered_json::array();
  for (size_t i = 0; i < req.profile.segments.size(); ++i) {
    const auto& sg = req.profile.segments[i];
    ordered_json o;
    o["mode"] = power::mode_name(sg.m);
    o["f_hz"] = sg.cfg.f_hz;
    o["retained_kb"] = sg.cfg.retained_kb;
    o["seconds"] = sg.seconds;
    o["power_w"] = i < e.segment_power_w.size() ? e.segment_power_w[i] : 0.0;
    segs.push_back(std::move(o));
  }
  j["segments"] = segs;
  j["wake_events_per_s"] = req.profile.wake_events_per_s;
  j["total_s"] = e.total_s;
  j["average_w"] = e.average_w;
  j["average_uw"] = e.average_w * 1e6;
  if (e.has_battery) {
    ordered_json b;
    b["mah"] = e.battery_mah;
    b["v"] = e.battery_v;
    b["lifetime_h"] = e.lifetime_h;
    j["battery"] = b;
  } else {
    j["battery"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string cwu_json(const cwu::run_result& r, const meta& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["report"] = "cwu_run";
  j["metadata"] = meta_json(m);
  if (r.wake) {
    ordered_json w;
    w["sample_index"] = r.wake->sample_index;
    w["matched_row"] = r.wake->matched_row;
    w["distance"] = r.wake->distance;
    w["elapsed_cycles"] = r.wake->elapsed_cycles;
    j["wake"] = w;
  } else {
    j["wake"] = nullptr;
  }
  j["samples_consumed"] = r.samples_consumed;
  j["cycles"] = r.cycles;
  j["steps"] = r.steps;
  return j.dump(2) + "\n";
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos : eol - pos);
    pos = eol == std::string::npos ? text.size() : eol + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;       // blank
    if (line[first] == '#') continue;               // comment
    std::vector<std::string> cells;
    size_t cpos = 0;
    while (true) {
      size_t comma = line.find(',', cpos);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(cpos));
        break;
      }
      cells.push_back(line.substr(cpos, comma - cpos));
      cpos = comma + 1;
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw write_error("cannot create output file: " + path);
  f.write(content.data(), static_cast<std::streamsize>(content.size()));
  f.flush();
  if (!f.good()) throw write_error("failed writing output file: " + path);
}

}  // namespace vega::report
