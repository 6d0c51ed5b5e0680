// SPDX-License-Identifier: Apache-2.0
//
// vega-twin: command-line front end for the Vega SoC digital twin.
//
// Exit codes (machine-parsable, also tagged on stderr as "[E<code>]"):
//   0   success
//   64  usage error (bad flags/arguments)
//   65  malformed input data (schema/parse/range violations)
//   66  missing or unreadable input file
//   70  internal error
//   73  cannot create or write an output file

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <vega/common.hpp>
#include <vega/config.hpp>
#include <vega/cwu_asm.hpp>
#include <vega/cwu_vm.hpp>
#include <vega/dnn.hpp>
#include <vega/hdc.hpp>
#include <vega/hwce.hpp>
#include <vega/npy.hpp>
#include <vega/power_modes.hpp>
#include <vega/report.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Flag/argument combinations CLI11 cannot express (maps to exit 64).
class usage_error : public vega::error {
 public:
  using vega::error::error;
};

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw vega::io_error("cannot open input file: " + path);
  std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (f.bad()) throw vega::io_error("read failed: " + path);
  return text;
}

std::vector<uint8_t> read_binary(const std::string& path) {
  std::string s = read_file(path);
  return std::vector<uint8_t>(s.begin(), s.end());
}

json parse_json_file(const std::string& path) {
  std::string text = read_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw vega::parse_error(path + ": " + e.what());
  }
}

void require_schema_version(const json& j, const std::string& origin) {
  if (!j.is_object() || !j.contains("schema_version") ||
      !j["schema_version"].is_number_integer() || j["schema_version"].get<int>() != vega::kSchemaVersion)
    throw vega::parse_error(origin + ": missing or unsupported schema_version (expected " +
                            std::to_string(vega::kSchemaVersion) + ")");
}

uint64_t get_u64(const json& j, const char* key, uint64_t def, const std::string& origin) {
  if (!j.contains(key)) return def;
  const auto& v = j[key];
  if (!v.is_number_integer() || (v.is_number_integer() && v.get<int64_t>() < 0))
    throw vega::parse_error(origin + ": field '" + key + "' must be a non-negative integer");
  return v.get<uint64_t>();
}

bool get_bool(const json& j, const char* key, bool def, const std::string& origin) {
  if (!j.contains(key)) return def;
  if (!j[key].is_boolean())
    throw vega::parse_error(origin + ": field '" + key + "' must be a boolean");
  return j[key].get<bool>();
}

std::string get_str(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j[key].is_string())
    throw vega::parse_error(origin + ": missing string field '" + key + "'");
  return j[key].get<std::string>();
}

// Raw sample stream: ".csv" = rows of "value" or "sample_index,value" with an
// optional header row; anything else = packed little-endian int32.
std::vector<int64_t> load_stream(const std::string& path) {
  fs::path p(path);
  if (p.extension() == ".csv") {
    auto rows = vega::report::parse_csv(read_file(path));
    std::vector<int64_t> out;
    for (size_t r = 0; r < rows.size(); ++r) {
      const auto& cells = rows[r];
      const std::string& cell = cells.size() >= 2 ? cells[1] : cells[0];
      std::string t = cell;
      size_t a = t.find_first_not_of(" \t");
      size_t b = t.find_last_not_of(" \t");
      t = a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
      errno = 0;
      char* end = nullptr;
      long long v = std::strtoll(t.c_str(), &end, 10);
      if (t.empty() || end == nullptr || *end != '\0' || errno != 0) {
        if (r == 0) continue;  // header row
        throw vega::parse_error(path + ": row " + std::to_string(r + 1) +
                                ": cannot parse sample value '" + cell + "'");
      }
      out.push_back(v);
    }
    return out;
  }
  auto bytes = read_binary(path);
  if (bytes.size() % 4 != 0)
    throw vega::parse_error(path + ": binary stream length is not a multiple of 4 bytes");
  std::vector<int64_t> out(bytes.size() / 4);
  for (size_t i = 0; i < out.size(); ++i) {
    uint32_t u = uint32_t(bytes[4 * i]) | uint32_t(bytes[4 * i + 1]) << 8 |
                 uint32_t(bytes[4 * i + 2]) << 16 | uint32_t(bytes[4 * i + 3]) << 24;
    out[i] = static_cast<int32_t>(u);
  }
  return out;
}

std::string resolve_relative(const std::string& base_file, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute()) return path;
  return (fs::path(base_file).parent_path() / p).string();
}

// ---------------------------------------------------------------------------
// cwu-asm

int run_cwu_asm(const std::string& input, const std::string& out, bool force_asm,
                bool force_dis) {
  auto bytes = read_binary(input);
  bool is_binary = bytes.size() >= 4 && bytes[0] == 'V' && bytes[1] == 'C' && bytes[2] == 'W' &&
                   bytes[3] == 'U';
  if (force_asm && force_dis) throw usage_error("--assemble and --disassemble are exclusive");
  bool disassemble = force_dis || (!force_asm && is_binary);
  if (disassemble) {
    if (!is_binary) throw vega::parse_error(input + ": not a microcode binary (bad magic)");
    auto prog = vega::cwu::from_binary(bytes);
    std::string text = vega::cwu::disassemble(prog);
    if (out.empty())
      std::cout << text;
    else
      vega::report::write_file(out, text);
    return 0;
  }
  std::string src(bytes.begin(), bytes.end());
  auto prog = vega::cwu::assemble(src);
  if (out.empty()) throw usage_error("assembling requires --out (binary is not written to stdout)");
  auto bin = vega::cwu::to_binary(prog);
  vega::report::write_file(out, std::string(bin.begin(), bin.end()));
  std::cout << "assembled " << prog.instructions.size() << " instructions -> " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cwu-run

vega::cwu::channel_config parse_channel(const json& j, const std::string& origin) {
  vega::cwu::channel_config c;
  if (!j.contains("channel_id"))
    throw vega::parse_error(origin + ": channel entry missing 'channel_id'");
  c.channel_id = static_cast<uint32_t>(get_u64(j, "channel_id", 0, origin));
  c.input_width_bits = static_cast<uint32_t>(get_u64(j, "input_width_bits", 16, origin));
  c.width_conversion_bits = static_cast<uint32_t>(get_u64(j, "width_conversion_bits", 16, origin));
  c.offset_removal = get_bool(j, "offset_removal", false, origin);
  c.lowpass = get_bool(j, "lowpass", false, origin);
  c.lowpass_shift = static_cast<uint32_t>(get_u64(j, "lowpass_shift", 0, origin));
  c.subsample_factor = static_cast<uint32_t>(get_u64(j, "subsample_factor", 1, origin));
  c.lbp = get_bool(j, "lbp", false, origin);
  c.lbp_window = static_cast<uint32_t>(get_u64(j, "lbp_window", 0, origin));
  return c;
}

int run_cwu_run(const std::string& program_path, const std::string& channels_path,
                const std::string& out, const std::string& trace_path, uint64_t max_samples,
                uint64_t max_steps, uint64_t seed, const vega::report::meta& m) {
  auto prog_bytes = read_binary(program_path);
  vega::cwu::cwu_program prog;
  if (prog_bytes.size() >= 4 && prog_bytes[0] == 'V' && prog_bytes[1] == 'C' &&
      prog_bytes[2] == 'W' && prog_bytes[3] == 'U')
    prog = vega::cwu::from_binary(prog_bytes);
  else
    prog = vega::cwu::assemble(std::string(prog_bytes.begin(), prog_bytes.end()));

  json cj = parse_json_file(channels_path);
  require_schema_version(cj, channels_path);
  if (!cj.contains("channels") || !cj["channels"].is_array() || cj["channels"].empty())
    throw vega::parse_error(channels_path + ": missing non-empty 'channels' array");

  std::vector<vega::cwu::channel_config> channels;
  std::vector<std::pair<uint32_t, std::vector<int64_t>>> streams;
  for (const auto& e : cj["channels"]) {
    auto c = parse_channel(e, channels_path);
    channels.push_back(c);
    if (e.contains("stream")) {
      std::string sp = resolve_relative(channels_path, get_str(e, "stream", channels_path));
      streams.emplace_back(c.channel_id, load_stream(sp));
    }
  }

  auto pset = vega::hdc::permutation_set::generate(prog.vector_dim, seed);
  vega::cwu::cwu_vm vm(prog, channels, pset);
  for (auto& [ch, s] : streams) vm.set_stream(ch, std::move(s));

  if (cj.contains("am")) {
    if (!cj["am"].is_array()) throw vega::parse_error(channels_path + ": 'am' must be an array");
    for (const auto& e : cj["am"]) {
      uint32_t row = static_cast<uint32_t>(get_u64(e, "row", 0, channels_path));
      if (!e.contains("row")) throw vega::parse_error(channels_path + ": am entry missing 'row'");
      vega::hdc::hd_vector v;
      if (e.contains("hex")) {
        v = vega::hdc::hd_vector::from_hex(prog.vector_dim, get_str(e, "hex", channels_path));
      } else if (e.contains("im")) {
        const auto& im = e["im"];
        uint64_t word = get_u64(im, "word", 0, channels_path);
        uint32_t width = static_cast<uint32_t>(get_u64(im, "width", 0, channels_path));
        uint32_t pair = static_cast<uint32_t>(get_u64(im, "pair", 0, channels_path));
        v = vega::hdc::im_encode(word, width, pset, pair);
      } else if (e.contains("cim")) {
        const auto& cm = e["cim"];
        uint32_t level = static_cast<uint32_t>(get_u64(cm, "level", 0, channels_path));
        uint32_t max_level = static_cast<uint32_t>(get_u64(cm, "max_level", 0, channels_path));
        uint32_t base_row = static_cast<uint32_t>(get_u64(cm, "base_row", 0, channels_path));
        const auto& base = vm.am().row(base_row);
        if (!base)
          throw vega::parse_error(channels_path + ": cim base_row " + std::to_string(base_row) +
                                  " is not loaded yet (order matters)");
        v = vega::hdc::cim_encode(level, max_level, *base);
      } else {
        throw vega::parse_error(channels_path + ": am entry needs 'hex', 'im' or 'cim'");
      }
      vm.am().write(row, v);
    }
  }

  std::ofstream trace_f;
  if (!trace_path.empty()) {
    trace_f.open(trace_path, std::ios::binary | std::ios::trunc);
    if (!trace_f) throw vega::write_error("cannot create output file: " + trace_path);
    vm.set_trace([&trace_f](const std::string& line) { trace_f << line << '\n'; });
  }

  auto res = vm.run(max_samples == 0 ? UINT64_MAX : max_samples, max_steps);

  if (!trace_path.empty()) {
    trace_f.flush();
    if (!trace_f.good()) throw vega::write_error("failed writing output file: " + trace_path);
  }

  std::string text = vega::report::cwu_json(res, m);
  if (out.empty())
    std::cout << text;
  else
    vega::report::write_file(out, text);
  return 0;
}

// ---------------------------------------------------------------------------
// hwce-run

vega::hwce::job parse_job(const json& j, const std::string& origin) {
  require_schema_version(j, origin);
  vega::hwce::job job;
  job.filter = vega::hwce::filter_from_name(get_str(j, "filter", origin));
  job.n_filters = static_cast<uint32_t>(get_u64(j, "n_filters", 1, origin));
  job.c_in = static_cast<uint32_t>(get_u64(j, "c_in", 1, origin));
  job.h_in = static_cast<uint32_t>(get_u64(j, "h_in", 0, origin));
  job.w_in = static_cast<uint32_t>(get_u64(j, "w_in", 0, origin));
  job.precision_in = static_cast<uint32_t>(get_u64(j, "precision_in", 8, origin));
  job.precision_w = static_cast<uint32_t>(get_u64(j, "precision_w", 8, origin));
  job.norm_shift = static_cast<uint32_t>(get_u64(j, "norm_shift", 0, origin));
  job.out_width = static_cast<uint32_t>(get_u64(j, "out_width", 8, origin));
  job.shadowed = get_bool(j, "shadowed", false, origin);
  std::string src = j.contains("accumulate_source") ? get_str(j, "accumulate_source", origin)
                                                    : std::string("none");
  std::string sink = j.contains("output_sink") ? get_str(j, "output_sink", origin)
                                               : std::string("l1");
  job.accumulate_source = vega::hwce::port_from_name(src);
  job.output_sink = vega::hwce::port_from_name(sink);
  if (job.accumulate_source != vega::hwce::port::none &&
      job.accumulate_source != vega::hwce::port::l1)
    throw vega::parse_error(origin +
                            ": FIFO accumulate sources are chained via the library API; the CLI "
                            "accepts 'none' or 'l1'");
  if (job.output_sink != vega::hwce::port::l1)
    throw vega::parse_error(origin + ": the CLI writes results to L1 ('l1' sink) only");
  return job;
}

void check_shape(const vega::npy::array& a, const std::vector<uint64_t>& want,
                 const std::string& what, const std::string& path) {
  uint64_t expect = 1;
  for (auto d : want) expect *= d;
  if (a.elements() != expect)
    throw vega::parse_error(path + ": " + what + " has " + std::to_string(a.elements()) +
                            " elements, expected " + std::to_string(expect));
  if (a.shape.size() == want.size() && a.shape != want) {
    std::string s;
    for (auto d : want) s += (s.empty() ? "" : "x") + std::to_string(d);
    throw vega::parse_error(path + ": " + what + " shape mismatch (expected " + s + ")");
  }
}

int run_hwce_run(const std::string& job_path, const std::string& input_path,
                 const std::string& weights_path, const std::string& partials_path,
                 const std::string& out_path, const std::string& summary_path,
                 const vega::report::meta& m, const vega::sim_config& cfg) {
  json jj = parse_json_file(job_path);
  vega::hwce::job job = parse_job(jj, job_path);
  job.validate();

  auto in_npy = vega::npy::load(input_path);
  if (in_npy.descr != "<i2")
    throw vega::parse_error(input_path + ": input must be int16 ('<i2')");
  check_shape(in_npy, {job.c_in, job.h_in, job.w_in}, "input", input_path);
  auto input = vega::npy::to_i16(in_npy);

  auto w_npy = vega::npy::load(weights_path);
  if (w_npy.descr != "<i2")
    throw vega::parse_error(weights_path + ": weights must be int16 ('<i2')");
  check_shape(w_npy, {job.n_filters, job.c_in, job.k(), job.k()}, "weights", weights_path);
  auto weights = vega::npy::to_i16(w_npy);

  std::vector<int32_t> partials;
  const std::vector<int32_t>* partials_ptr = nullptr;
  if (!partials_path.empty()) {
    auto p_npy = vega::npy::load(partials_path);
    if (p_npy.descr != "<i4")
      throw vega::parse_error(partials_path + ": partials must be int32 ('<i4')");
    check_shape(p_npy, {job.n_filters, job.h_out(), job.w_out()}, "partials", partials_path);
    partials = vega::npy::to_i32(p_npy);
    partials_ptr = &partials;
  }

  vega::hwce::engine eng(cfg.hwce);
  auto res = eng.run(job, input, weights, partials_ptr);

  if (!out_path.empty())
    vega::npy::save(out_path,
                    vega::npy::from_i32(res.out, {job.n_filters, job.h_out(), job.w_out()}));

  nlohmann::ordered_json s;
  s["schema_version"] = vega::kSchemaVersion;
  s["report"] = "hwce_run";
  s["metadata"] = {{"profile", m.profile}, {"seed", m.seed}};
  s["filter"] = vega::hwce::filter_name(job.filter);
  s["macs"] = res.macs;
  s["cycles"] = res.cycles;
  s["normalized"] = res.normalized;
  s["out_shape"] = {job.n_filters, job.h_out(), job.w_out()};
  if (out_path.empty())
    s["out"] = nullptr;
  else
    s["out"] = out_path;
  std::string text = s.dump(2) + "\n";
  if (summary_path.empty())
    std::cout << text;
  else
    vega::report::write_file(summary_path, text);
  return 0;
}

// ---------------------------------------------------------------------------
// dnn-sim

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int run_dnn_sim(const std::vector<std::string>& networks, const std::string& weights_mode,
                const std::string& engine_name, const std::string& out_dir,
                const std::string& format_list, unsigned jobs, const vega::report::meta& m,
                const vega::sim_config& cfg) {
  auto formats = split_csv_list(format_list);
  if (formats.empty()) throw usage_error("--format must name at least one of csv,json,svg");
  for (const auto& f : formats)
    if (f != "csv" && f != "json" && f != "svg")
      throw usage_error("unknown report format '" + f + "' (expected csv, json or svg)");

  vega::dnn::engine_kind eng =
      engine_name == "hwce" ? vega::dnn::engine_kind::hwce : vega::dnn::engine_kind::sw;

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw vega::write_error("cannot create output directory: " + out_dir);

  const size_t n = networks.size();
  std::vector<std::string> lines(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<size_t> next{0};

  auto scenario = [&](size_t i) {
    const std::string& path = networks[i];
    auto net = vega::dnn::load_network(path);
    vega::dnn::placement pl;
    if (weights_mode == "greedy")
      pl = vega::dnn::place_greedy(net, cfg.mem.mram_bytes);
    else
      pl = vega::dnn::place_uniform(net,
                                    weights_mode == "mram" ? vega::dnn::weight_home::mram
                                                           : vega::dnn::weight_home::hyperram,
                                    cfg.mem.mram_bytes);
    auto rep = vega::dnn::simulate(net, pl, eng, cfg, weights_mode);
    std::string base = fs::path(path).stem().string() + "_" + engine_name + "_" + weights_mode;
    std::string written;
    for (const auto& f : formats) {
      std::string out_path = (fs::path(out_dir) / (base + "." + f)).string();
      if (f == "csv")
        vega::report::write_file(out_path, vega::report::dnn_csv(rep));
      else if (f == "json")
        vega::report::write_file(out_path, vega::report::dnn_json(rep, m));
      else
        vega::report::write_file(out_path, vega::report::dnn_svg(rep));
      written += (written.empty() ? "" : ",") + out_path;
    }
    lines[i] = vega::strf("%s: engine=%s weights=%s total_ms=%.3f e_total_mj=%.4f -> %s",
                          rep.network.c_str(), engine_name.c_str(), weights_mode.c_str(),
                          rep.total_s * 1e3, rep.e_total_j() * 1e3, written.c_str());
  };

  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= n) break;
      try {
        scenario(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };

  unsigned nthreads = std::min<unsigned>(std::max(1u, jobs), static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (size_t i = 0; i < n; ++i)
    if (!errs[i] && !lines[i].empty()) std::cout << lines[i] << "\n";
  for (size_t i = 0; i < n; ++i)
    if (errs[i]) std::rethrow_exception(errs[i]);
  return 0;
}

// ---------------------------------------------------------------------------
// power-est

int run_power_est(const std::string& duty_path, const std::string& out,
                  const vega::report::meta& m, const vega::sim_config& cfg) {
  auto req = vega::power::profile_from_json(read_file(duty_path), duty_path);
  auto est = vega::power::estimate_profile(req, cfg);
  std::string text = vega::report::power_json(req, est, m);
  if (out.empty())
    std::cout << text;
  else
    vega::report::write_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vega-twin: deterministic digital twin of the Vega IoT SoC"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  app.set_version_flag("--version", "vega-twin 1.0.0");

  std::string config_path;
  app.add_option("--config", config_path, "configuration file (key = value lines)")
      ->envname("VEGA_TWIN_CONFIG");
  std::string profile = "default";
  app.add_option("--profile", profile, "built-in parameter preset")
      ->check(CLI::IsMember(vega::profile_names()));
  uint64_t seed = 0;
  app.add_option("--seed", seed, "master seed for the deterministic permutation tables");
  bool print_config = false;
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");

  auto* asm_cmd = app.add_subcommand("cwu-asm", "assemble or disassemble wake-up microcode");
  std::string asm_in, asm_out;
  bool force_asm = false, force_dis = false;
  asm_cmd->add_option("input", asm_in, "source (.vasm) or binary (VCWU) file")->required();
  asm_cmd->add_option("--out", asm_out, "output file");
  asm_cmd->add_flag("--assemble", force_asm, "force assembly");
  asm_cmd->add_flag("--disassemble", force_dis, "force disassembly");

  auto* run_cmd = app.add_subcommand("cwu-run", "execute microcode over sample streams");
  std::string run_prog, run_channels, run_out, run_trace;
  uint64_t run_max_samples = 0, run_max_steps = 100000000ULL;
  run_cmd->add_option("--program", run_prog, "microcode file (.vasm or VCWU binary)")->required();
  run_cmd->add_option("--channels", run_channels, "channel/stream/AM description (JSON)")
      ->required();
  run_cmd->add_option("--out", run_out, "run result (JSON; stdout when omitted)");
  run_cmd->add_option("--trace", run_trace, "instruction trace (JSONL)");
  run_cmd->add_option("--max-samples", run_max_samples, "stop after N samples (0 = unlimited)");
  run_cmd->add_option("--max-steps", run_max_steps, "instruction budget");

  auto* hwce_cmd = app.add_subcommand("hwce-run", "run one convolution job bit-exactly");
  std::string hwce_job, hwce_in, hwce_w, hwce_p, hwce_out, hwce_summary;
  hwce_cmd->add_option("--job", hwce_job, "job description (JSON)")->required();
  hwce_cmd->add_option("--input", hwce_in, "input tensor (NPY int16, c x h x w)")->required();
  hwce_cmd->add_option("--weights", hwce_w, "weight tensor (NPY int16, f x c x k x k)")
      ->required();
  hwce_cmd->add_option("--partials", hwce_p, "pre-accumulated partials (NPY int32)");
  hwce_cmd->add_option("--out", hwce_out, "output tensor (NPY int32)");
  hwce_cmd->add_option("--summary", hwce_summary, "summary JSON (stdout when omitted)");

  auto* dnn_cmd = app.add_subcommand("dnn-sim", "schedule networks on the cluster");
  std::vector<std::string> dnn_nets;
  std::string dnn_weights = "greedy", dnn_engine = "sw", dnn_out = ".", dnn_format = "csv,json,svg";
  double f_soc = 0, f_cl = 0;
  unsigned dnn_jobs = 1;
  dnn_cmd->add_option("--network", dnn_nets, "network descriptor (JSON); repeatable")
      ->required()
      ->expected(-1);
  dnn_cmd->add_option("--weights", dnn_weights, "weight placement")
      ->check(CLI::IsMember({"greedy", "mram", "hyperram"}));
  dnn_cmd->add_option("--engine", dnn_engine, "compute engine")
      ->check(CLI::IsMember({"sw", "hwce"}));
  dnn_cmd->add_option("--f-soc", f_soc, "SoC clock override (Hz)");
  dnn_cmd->add_option("--f-cl", f_cl, "cluster clock override (Hz)");
  dnn_cmd->add_option("--out", dnn_out, "output directory");
  dnn_cmd->add_option("--format", dnn_format, "comma list of csv,json,svg");
  dnn_cmd->add_option("--jobs", dnn_jobs, "parallel scenarios")->check(CLI::Range(1u, 64u));

  auto* pow_cmd = app.add_subcommand("power-est", "estimate duty-cycled power and lifetime");
  std::string pow_duty, pow_out;
  pow_cmd->add_option("--duty", pow_duty, "duty-cycle profile (JSON)")->required();
  pow_cmd->add_option("--out", pow_out, "estimate (JSON; stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "vega-twin: [E64] " << e.what() << "\n";
    return 64;
  }

  try {
    vega::sim_config cfg;
    vega::apply_profile(cfg, profile);
    if (!config_path.empty()) cfg = vega::load_config(config_path, cfg);
    if (dnn_cmd->count("--f-soc")) cfg.f_soc_hz = f_soc;
    if (dnn_cmd->count("--f-cl")) cfg.f_cl_hz = f_cl;
    cfg.validate();
    vega::report::meta m{profile, seed};

    if (print_config) {
      std::cout << vega::config_to_text(cfg);
      return 0;
    }
    if (asm_cmd->parsed()) return run_cwu_asm(asm_in, asm_out, force_asm, force_dis);
    if (run_cmd->parsed())
      return run_cwu_run(run_prog, run_channels, run_out, run_trace, run_max_samples,
                         run_max_steps, seed, m);
    if (hwce_cmd->parsed())
      return run_hwce_run(hwce_job, hwce_in, hwce_w, hwce_p, hwce_out, hwce_summary, m, cfg);
    if (dnn_cmd->parsed())
      return run_dnn_sim(dnn_nets, dnn_weights, dnn_engine, dnn_out, dnn_format, dnn_jobs, m, cfg);
    if (pow_cmd->parsed()) return run_power_est(pow_duty, pow_out, m, cfg);
    throw usage_error("a subcommand is required (see --help)");
  } catch (const vega::write_error& e) {
    std::cerr << "vega-twin: [E73] " << e.what() << "\n";
    return 73;
  } catch (const vega::io_error& e) {
    std::cerr << "vega-twin: [E66] " << e.what() << "\n";
    return 66;
  } catch (const usage_error& e) {
    std::cerr << "vega-twin: [E64] " << e.what() << "\n";
    return 64;
  } catch (const vega::parse_error& e) {
    std::cerr << "vega-twin: [E65] " << e.what() << "\n";
    return 65;
  } catch (const vega::error& e) {
    std::cerr << "vega-twin: [E65] " << e.what() << "\n";
    return 65;
  } catch (const std::exception& e) {
    std::cerr << "vega-twin: [E70] " << e.what() << "\n";
    return 70;
  }
}
