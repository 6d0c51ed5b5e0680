// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: ten end-to-end checks, one PASS/FAIL line each.
// Reference numbers are frozen outputs of independent oracle scripts
// (naive convolution, exhaustive tiling search, closed-form schedule
// recurrences) and published characterization anchors. Tolerances are
// pinned next to each check.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <vega/config.hpp>
#include <vega/cwu_asm.hpp>
#include <vega/cwu_power.hpp>
#include <vega/cwu_vm.hpp>
#include <vega/dnn.hpp>
#include <vega/hdc.hpp>
#include <vega/hwce.hpp>
#include <vega/power_modes.hpp>
#include <vega/report.hpp>
#include <vega/rng.hpp>

using namespace vega;
using vega::hdc::hamming;
using vega::hdc::hd_vector;

namespace {

std::string g_data_dir = "data";

struct ctx {
  std::vector<std::string> problems;
  void require(bool ok, std::string msg) {
    if (!ok) problems.push_back(std::move(msg));
  }
  template <typename... A>
  void requiref(bool ok, const char* fmt, A... args) {
    if (!ok) problems.push_back(strf(fmt, args...));
  }
};

bool within_rel(double x, double ref, double tol) {
  return std::fabs(x - ref) <= tol * std::fabs(ref);
}

dnn::network load_net(const std::string& file) {
  return dnn::load_network(g_data_dir + "/networks/" + file);
}

// ---------------------------------------------------------------------------
// Frozen oracle values (independent schedule recurrence, SW engine @ 250 MHz,
// greedy MRAM placement). SW figures are exact transcriptions of the
// calibrated model: 1e-9 relative. Accelerated totals additionally quantize
// per-tile cycles and charge the first-tile offload overhead, which the
// continuous-rate oracle omits: 1e-3 relative.
constexpr double kRelSw = 1e-9;
constexpr double kRelHw = 1e-3;

struct repvgg_ref {
  const char* file;
  uint64_t macs, weight_bytes, mram_bytes;
  const char* last_mram;
  const char* first_hyperram;
  double sw_total_s, e_sw_total_j, hw_total_s;
  double target_s;  // published latency
};
constexpr repvgg_ref kRepVgg[3] = {
    {"repvgg_a0.json", 1388546048ull, 8311232ull, 4155840ull, "stage4_l12",
     "stage4_l13", 0.36310629136087524, 0.008302803302079999, 0.11928042549707604,
     0.358},
    {"repvgg_a1.json", 2363967488ull, 12783296ull, 3835584ull, "stage4_l6",
     "stage4_l7", 0.6148105655770606, 0.01572747503328, 0.19954463777777778, 0.610},
    {"repvgg_a2.json", 5116823552ull, 25363136ull, 3291840ull, "stage4_l2",
     "stage4_l3", 1.3252383647002473, 0.03636371971552001, 0.42749712315789523,
     1.320},
};

constexpr uint64_t kMnMacs = 300774272ull;
constexpr uint64_t kMnWeights = 3469760ull;
constexpr double kMnMramTotal = 0.10914605544010564;
constexpr double kMnMramETotal = 0.0010778290211199996;
constexpr double kMnHrTotal = 0.1060617195804565;
constexpr double kMnHrETotal = 0.004061822621119999;

// ---------------------------------------------------------------------------
// 1. Wake-up unit power anchors.
void c1_cwu_power(ctx& c) {
  auto table = cwu::power_table::characterized();
  auto lo = table.at(32e3);
  auto hi = table.at(200e3);
  // characterized rows reproduce their published totals with zero tolerance
  c.requiref(lo.total_uw == 2.97, "32 kHz total %.6f uW != 2.97", lo.total_uw);
  c.requiref(hi.total_uw == 14.9, "200 kHz total %.6f uW != 14.9", hi.total_uw);
  c.requiref(lo.max_sps_per_channel == 150.0, "32 kHz max sps %.1f != 150",
             lo.max_sps_per_channel);
  c.requiref(hi.max_sps_per_channel == 1000.0, "200 kHz max sps %.1f != 1000",
             hi.max_sps_per_channel);

  // chip-boundary sleep anchors: datapath + leak + always-on floor (no pads),
  // plus 0.15 uW/kB of retained state; 1e-9 uW absolute (float summation only)
  sim_config cfg;
  double p0 = power::mode_power_w(power::mode::cognitive_sleep, {32e3, 0.0}, cfg) * 1e6;
  double p128 =
      power::mode_power_w(power::mode::cognitive_sleep, {32e3, 128.0}, cfg) * 1e6;
  c.requiref(std::fabs(p0 - 1.7) <= 1e-9, "chip-level anchor %.9f uW != 1.7", p0);
  c.requiref(std::fabs(p128 - 20.9) <= 1e-9, "128 kB anchor %.9f uW != 20.9", p128);
}

// ---------------------------------------------------------------------------
// 2. HDC property suite.
void c2_hdc_properties(ctx& c) {
  const uint32_t dim = 512;
  auto pset = hdc::permutation_set::generate(dim, 0);
  splitmix64 rng(0x51f2a3b4c5d6e7f8ull);

  // XOR binding is an isometry of Hamming space
  for (int i = 0; i < 300 && c.problems.size() < 4; ++i) {
    auto a = hd_vector::random(dim, rng);
    auto b = hd_vector::random(dim, rng);
    auto v = hd_vector::random(dim, rng);
    c.requiref(hamming(hdc::bind(a, v), hdc::bind(b, v)) == hamming(a, b),
               "bind broke distance on case %d", i);
  }

  // bundling: idempotence and exact bitwise majority (odd counts: no ties)
  for (int i = 0; i < 200 && c.problems.size() < 8; ++i) {
    auto a = hd_vector::random(dim, rng);
    auto b = hd_vector::random(dim, rng);
    hdc::bundle_accumulator one(dim);
    one.accumulate(a);
    c.requiref(one.finalize() == a, "bundle of one != identity, case %d", i);
    hdc::bundle_accumulator acc(dim);
    acc.accumulate(a);
    acc.accumulate(a);
    acc.accumulate(b);
    c.requiref(acc.finalize() == a, "majority(a,a,b) != a, case %d", i);
  }
  for (int i = 0; i < 100 && c.problems.size() < 12; ++i) {
    std::array<hd_vector, 5> v = {hd_vector::random(dim, rng), hd_vector::random(dim, rng),
                                  hd_vector::random(dim, rng), hd_vector::random(dim, rng),
                                  hd_vector::random(dim, rng)};
    hdc::bundle_accumulator acc(dim);
    for (const auto& x : v) acc.accumulate(x);
    auto maj = acc.finalize();
    bool ok = true;
    for (uint32_t bit = 0; bit < dim && ok; ++bit) {
      int ones = 0;
      for (const auto& x : v) ones += x.get(bit);
      ok = maj.get(bit) == (ones >= 3);
    }
    c.requiref(ok, "5-way majority mismatch, case %d", i);
  }

  // IM quasi-orthogonality: mean pairwise distance within 256 +/- 3
  std::vector<hd_vector> items;
  for (uint64_t w = 0; w < 46; ++w) items.push_back(hdc::im_encode(w, 8, pset, 0));
  uint64_t pairs = 0, dist_sum = 0;
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t j = i + 1; j < items.size(); ++j) {
      dist_sum += hamming(items[i], items[j]);
      ++pairs;
    }
  double mean = double(dist_sum) / double(pairs);
  c.requiref(pairs >= 1000, "only %llu pairs sampled", (unsigned long long)pairs);
  c.requiref(mean >= 253.0 && mean <= 259.0,
             "item-memory mean distance %.3f outside [253, 259]", mean);

  // CIM: distance grows monotonically with level separation (exhaustive, M=64)
  const uint32_t max_level = 63;
  auto base = hdc::im_encode(3, 8, pset, 1);
  std::vector<hd_vector> cim;
  for (uint32_t l = 0; l <= max_level; ++l)
    cim.push_back(hdc::cim_encode(l, max_level, base));
  c.requiref(hamming(cim[0], cim[max_level]) == dim / 2,
             "extreme levels are %u apart, want dim/2", hamming(cim[0], cim[max_level]));
  for (uint32_t i = 0; i <= max_level && c.problems.size() < 16; ++i)
    for (uint32_t j = i + 1; j <= max_level; ++j)
      for (uint32_t k = j + 1; k <= max_level; ++k) {
        bool ok = hamming(cim[i], cim[j]) <= hamming(cim[i], cim[k]) &&
                  hamming(cim[j], cim[k]) <= hamming(cim[i], cim[k]);
        c.requiref(ok, "CIM monotonicity broken at (%u,%u,%u)", i, j, k);
        if (!ok) return;
      }

  // AM lookup == brute-force argmin with lowest-index ties, 1e4 random cases
  hdc::associative_memory am(dim);
  std::vector<hd_vector> rows;
  for (uint32_t r = 0; r < 16; ++r) {
    rows.push_back(hd_vector::random(dim, rng));
    am.write(r, rows.back());
  }
  for (int q = 0; q < 10000 && c.problems.size() < 20; ++q) {
    auto query = hd_vector::random(dim, rng);
    uint32_t bi = 0, bd = UINT32_MAX;
    for (uint32_t r = 0; r < 16; ++r) {
      uint32_t d = hamming(query, rows[r]);
      if (d < bd) {
        bd = d;
        bi = r;
      }
    }
    auto got = am.lookup(query);
    c.requiref(got.index == bi && got.distance == bd,
               "lookup case %d: got (%u,%u) want (%u,%u)", q, got.index, got.distance,
               bi, bd);
  }
}

// ---------------------------------------------------------------------------
// 3. Microcoded two-class wake-up, end to end.
struct wake_setup {
  hdc::permutation_set pset = hdc::permutation_set::generate(512, 0);
  hd_vector base, lab0, lab1, lab2, proto_a, proto_b;
  std::vector<cwu::channel_config> channels;
  std::array<std::vector<int64_t>, 3> raw;  // 16-bit samples per channel
  std::vector<int> label;                   // class per 12-sample window
  std::vector<hd_vector> query;             // oracle query per window
  std::vector<hdc::lookup_result> expect;   // oracle search result per window

  static constexpr int kWindows = 120;
  static constexpr int kRounds = 4;
  static constexpr std::array<std::array<int, 3>, 2> kLevels = {{{2, 8, 13}, {12, 3, 6}}};
};

wake_setup build_wake_setup() {
  wake_setup s;
  s.base = hdc::im_encode(0x55, 8, s.pset, 1);
  s.lab0 = hdc::im_encode(0xA0, 8, s.pset, 0);
  s.lab1 = hdc::im_encode(0xA1, 8, s.pset, 0);
  s.lab2 = hdc::im_encode(0xA2, 8, s.pset, 0);
  const std::array<const hd_vector*, 3> labs = {&s.lab0, &s.lab1, &s.lab2};

  for (uint32_t ch = 0; ch < 3; ++ch) {
    cwu::channel_config cc;
    cc.channel_id = ch;
    cc.input_width_bits = 16;
    cc.width_conversion_bits = 4;  // arithmetic >>12, then 4-bit symbols
    s.channels.push_back(cc);
  }

  // class prototypes composed from the clean per-channel levels
  for (int cls = 0; cls < 2; ++cls) {
    hdc::bundle_accumulator acc(512);
    for (int r = 0; r < wake_setup::kRounds; ++r)
      for (int ch = 0; ch < 3; ++ch) {
        auto v = hdc::cim_encode(uint32_t(wake_setup::kLevels[cls][ch]), 15, s.base);
        acc.accumulate(hdc::bind(v, *labs[ch]));
      }
    (cls == 0 ? s.proto_a : s.proto_b) = acc.finalize();
  }

  // synthetic streams: 12-window segments of alternating class, +/-1 level noise
  splitmix64 noise(0xC3);
  for (int w = 0; w < wake_setup::kWindows; ++w) {
    s.label.push_back((w / 12) % 2);
    for (int r = 0; r < wake_setup::kRounds; ++r)
      for (int ch = 0; ch < 3; ++ch) {
        int lvl = wake_setup::kLevels[size_t(s.label.back())][size_t(ch)] +
                  int(noise.next() % 3) - 1;
        lvl = std::clamp(lvl, 0, 15);
        int as_signed = lvl < 8 ? lvl : lvl - 16;  // 4-bit two's complement
        s.raw[size_t(ch)].push_back(int64_t(as_signed) * 4096);
      }
  }

  // oracle: recompose each window with direct primitive calls
  const std::array<std::pair<uint32_t, const hd_vector*>, 6> am_rows = {{
      {0u, &s.proto_a},
      {1u, &s.proto_b},
      {8u, &s.lab0},
      {9u, &s.lab1},
      {10u, &s.lab2},
      {11u, &s.base},
  }};
  for (int w = 0; w < wake_setup::kWindows; ++w) {
    hdc::bundle_accumulator acc(512);
    for (int r = 0; r < wake_setup::kRounds; ++r)
      for (int ch = 0; ch < 3; ++ch) {
        int64_t rv = s.raw[size_t(ch)][size_t(w * wake_setup::kRounds + r)];
        uint32_t lvl = uint32_t(rv >> 12) & 0xFu;  // the per-channel symbol path
        auto v = hdc::cim_encode(lvl, 15, s.base);
        acc.accumulate(hdc::bind(v, *labs[ch]));
      }
    s.query.push_back(acc.finalize());
    hdc::lookup_result best{0, UINT32_MAX};
    for (const auto& [row, vec] : am_rows) {
      uint32_t d = hamming(s.query.back(), *vec);
      if (d < best.distance) best = {row, d};
    }
    s.expect.push_back(best);
  }
  return s;
}

std::string wake_program_text(uint32_t threshold, uint32_t target) {
  std::string t = strf(".dim 512\n.threshold %u\n.target %u\n", threshold, target);
  t += "BUNDLE_BEGIN\n";
  for (int r = 0; r < wake_setup::kRounds; ++r)
    for (int ch = 0; ch < 3; ++ch)
      t += strf("WAIT_SAMPLE %d\nLOADV 11\nCIMENC %d\nXOR %d\nBUNDLE_ACC\n", ch, ch,
                8 + ch);
  t += "BUNDLE_END\nSEARCH\n";  // PC wraps to the window top
  return t;
}

std::optional<std::pair<uint32_t, uint32_t>> parse_search_event(const std::string& line) {
  auto ip = line.find("\"index\":");
  auto dp = line.find("\"distance\":");
  if (line.find("\"event\":\"search\"") == std::string::npos || ip == std::string::npos ||
      dp == std::string::npos)
    return std::nullopt;
  return std::make_pair(uint32_t(std::strtoul(line.c_str() + ip + 8, nullptr, 10)),
                        uint32_t(std::strtoul(line.c_str() + dp + 11, nullptr, 10)));
}

void c3_cwu_end_to_end(ctx& c) {
  auto s = build_wake_setup();
  auto prog = cwu::assemble(wake_program_text(0, 15));  // row 15 empty: never wakes
  c.requiref(prog.instructions.size() == 63, "program has %zu instructions",
             prog.instructions.size());

  cwu::cwu_vm vm(prog, s.channels, s.pset);
  vm.am().write(0, s.proto_a);
  vm.am().write(1, s.proto_b);
  vm.am().write(8, s.lab0);
  vm.am().write(9, s.lab1);
  vm.am().write(10, s.lab2);
  vm.am().write(11, s.base);
  for (uint32_t ch = 0; ch < 3; ++ch) vm.set_stream(ch, s.raw[ch]);
  std::vector<std::string> trace;
  vm.set_trace([&](const std::string& l) { trace.push_back(l); });

  // step the VM and compare, window by window, against the composed oracle
  const uint32_t pc_bundle_end = 61, pc_search = 62;
  size_t w = 0;
  int correct = 0;
  bool running = true;
  while (running) {
    uint32_t pc = vm.pc();
    running = vm.step();
    if (pc == pc_bundle_end && w < s.query.size()) {
      if (!(vm.reg() == s.query[w])) {
        c.requiref(false, "window %zu: encoder register differs from oracle", w);
        return;
      }
    } else if (pc == pc_search && w < s.expect.size()) {
      auto ev = parse_search_event(trace.back());
      if (!ev) {
        c.require(false, strf("window %zu: search trace event missing", w));
        return;
      }
      if (ev->first != s.expect[w].index || ev->second != s.expect[w].distance) {
        c.requiref(false, "window %zu: search (%u,%u) oracle (%u,%u)", w, ev->first,
                   ev->second, s.expect[w].index, s.expect[w].distance);
        return;
      }
      correct += int(ev->first) == s.label[w];
      ++w;
    }
  }
  c.requiref(w == size_t(wake_setup::kWindows), "classified %zu of %d windows", w,
             wake_setup::kWindows);
  double accuracy = double(correct) / double(wake_setup::kWindows);
  c.requiref(accuracy >= 0.90, "segment accuracy %.3f < 0.90 threshold", accuracy);
  c.require(!vm.wake().has_value(), "classification run must not wake");

  // wake path: threshold at the first window's oracle distance, target class 0
  uint32_t d0 = s.expect[0].distance;
  c.requiref(s.expect[0].index == 0, "window 0 argmin row %u != 0", s.expect[0].index);
  auto wake_prog = cwu::assemble(wake_program_text(d0, 0));
  std::vector<std::vector<int64_t>> streams;
  for (uint32_t ch = 0; ch < 3; ++ch)
    streams.emplace_back(s.raw[ch].begin(), s.raw[ch].begin() + 3 * wake_setup::kRounds);
  auto rr = cwu::run_stream(wake_prog, s.channels, streams, s.pset,
                            {{0, s.proto_a},
                             {1, s.proto_b},
                             {8, s.lab0},
                             {9, s.lab1},
                             {10, s.lab2},
                             {11, s.base}});
  c.require(rr.wake.has_value(), "wake run did not fire");
  if (rr.wake) {
    c.requiref(rr.wake->matched_row == 0, "woke on row %u", rr.wake->matched_row);
    c.requiref(rr.wake->distance == d0, "wake distance %u != oracle %u",
               rr.wake->distance, d0);
    c.requiref(rr.wake->sample_index == 12, "wake after %llu samples, want 12",
               (unsigned long long)rr.wake->sample_index);
  }
}

// ---------------------------------------------------------------------------
// 4. Convolution engine bit-exactness (zero tolerance).
int32_t ref_normalize(int64_t wrapped, uint32_t shift, uint32_t out_width, bool round) {
  int64_t v = int32_t(uint32_t(wrapped));  // modular 32-bit accumulator
  if (round && shift > 0) v += int64_t(1) << (shift - 1);
  v >>= shift;
  int64_t lo = -(int64_t(1) << (out_width - 1));
  int64_t hi = (int64_t(1) << (out_width - 1)) - 1;
  return int32_t(std::clamp(v, lo, hi));
}

std::vector<int32_t> ref_conv(const hwce::job& j, const std::vector<int16_t>& in,
                              const std::vector<int16_t>& wgt, bool round,
                              const std::vector<int32_t>* partials) {
  uint32_t k = j.k(), ho = j.h_out(), wo = j.w_out();
  std::vector<int32_t> out(size_t(j.n_filters) * ho * wo);
  for (uint32_t f = 0; f < j.n_filters; ++f)
    for (uint32_t y = 0; y < ho; ++y)
      for (uint32_t x = 0; x < wo; ++x) {
        int64_t acc = partials ? (*partials)[(size_t(f) * ho + y) * wo + x] : 0;
        for (uint32_t ch = 0; ch < j.c_in; ++ch)
          for (uint32_t ky = 0; ky < k; ++ky)
            for (uint32_t kx = 0; kx < k; ++kx)
              acc += int64_t(in[(size_t(ch) * j.h_in + y + ky) * j.w_in + x + kx]) *
                     wgt[((size_t(f) * j.c_in + ch) * k + ky) * k + kx];
        out[(size_t(f) * ho + y) * wo + x] =
            ref_normalize(acc, j.norm_shift, j.out_width, round);
      }
  return out;
}

void c4_hwce_bit_exact(ctx& c) {
  splitmix64 rng(0x11CEull);
  auto pick = [&](std::initializer_list<uint32_t> xs) {
    auto it = xs.begin();
    std::advance(it, rng.next() % xs.size());
    return *it;
  };
  auto rint = [&](uint32_t lo, uint32_t hi) { return lo + uint32_t(rng.next() % (hi - lo + 1)); };
  auto rval = [&](uint32_t bits) {
    uint32_t span = 1u << bits;
    return int16_t(int32_t(rng.next() % span) - int32_t(span / 2));
  };

  int chained = 0;
  for (int it = 0; it < 1000 && c.problems.size() < 6; ++it) {
    hwce::job j;
    j.filter = (rng.next() & 1) ? hwce::filter_size::f3x3 : hwce::filter_size::f5x5;
    j.n_filters = j.filter == hwce::filter_size::f3x3 ? rint(1, 3) : 1;
    j.c_in = rint(1, 4);
    j.h_in = rint(j.k(), j.k() + 5);
    j.w_in = rint(j.k(), j.k() + 5);
    j.precision_in = pick({4, 8, 16});
    j.precision_w = pick({4, 8, 16});
    j.norm_shift = rint(0, 8);
    j.out_width = pick({4, 8, 16});
    j.shadowed = rng.next() & 1;
    bool round = rng.next() & 1;

    std::vector<int16_t> in(size_t(j.c_in) * j.h_in * j.w_in);
    std::vector<int16_t> wgt(size_t(j.n_filters) * j.c_in * j.k() * j.k());
    for (auto& v : in) v = rval(j.precision_in);
    for (auto& v : wgt) v = rval(j.precision_w);

    std::vector<int32_t> l1;
    const std::vector<int32_t>* pl1 = nullptr;
    if (it % 5 == 0) {
      l1.resize(size_t(j.n_filters) * j.h_out() * j.w_out());
      for (auto& v : l1) v = int32_t(rng.next());
      j.accumulate_source = hwce::port::l1;
      pl1 = &l1;
    }

    hwce::timing_params tp;
    tp.round_before_shift = round;
    hwce::engine eng(tp);
    auto got = eng.run(j, in, wgt, pl1);
    auto want = ref_conv(j, in, wgt, round, pl1);
    if (got.out != want) {
      c.requiref(false, "job %d (k=%u nf=%u c=%u %ux%u p=%u/%u s=%u ow=%u): mismatch",
                 it, j.k(), j.n_filters, j.c_in, j.h_in, j.w_in, j.precision_in,
                 j.precision_w, j.norm_shift, j.out_width);
      continue;
    }
    c.requiref(got.macs == j.macs(), "job %d MAC count %llu != %llu", it,
               (unsigned long long)got.macs, (unsigned long long)j.macs());

    // FIFO chaining: split the channel slice in two, accumulate through fifo0
    if (j.filter == hwce::filter_size::f3x3 && j.c_in >= 2 && pl1 == nullptr &&
        it % 4 == 0) {
      uint32_t c1 = rint(1, j.c_in - 1);
      auto sub_job = [&](uint32_t c_lo, uint32_t c_hi) {
        hwce::job sj = j;
        sj.c_in = c_hi - c_lo;
        return sj;
      };
      auto slice_in = [&](uint32_t c_lo, uint32_t c_hi) {
        return std::vector<int16_t>(in.begin() + ptrdiff_t(c_lo) * j.h_in * j.w_in,
                                    in.begin() + ptrdiff_t(c_hi) * j.h_in * j.w_in);
      };
      auto slice_w = [&](uint32_t c_lo, uint32_t c_hi) {
        std::vector<int16_t> out;
        for (uint32_t f = 0; f < j.n_filters; ++f)
          for (uint32_t ch = c_lo; ch < c_hi; ++ch)
            for (uint32_t t = 0; t < j.k() * j.k(); ++t)
              out.push_back(wgt[(size_t(f) * j.c_in + ch) * j.k() * j.k() + t]);
        return out;
      };
      hwce::engine chain(tp);
      auto a = sub_job(0, c1);
      a.output_sink = hwce::port::fifo0;
      auto first = chain.run(a, slice_in(0, c1), slice_w(0, c1));
      c.requiref(!first.normalized, "job %d: FIFO sink must hold raw partials", it);
      auto b = sub_job(c1, j.c_in);
      b.accumulate_source = hwce::port::fifo0;
      auto second = chain.run(b, slice_in(c1, j.c_in), slice_w(c1, j.c_in));
      c.requiref(second.out == want, "job %d: chained result differs from fused", it);
      ++chained;
    }
  }
  c.requiref(chained >= 50, "only %d chained sub-cases exercised", chained);
}

// ---------------------------------------------------------------------------
// 5. RepVGG latency calibration and accelerator speedup.
void c5_repvgg_latency(ctx& c) {
  sim_config sw_cfg;  // 250 MHz software engine
  sim_config hw_cfg;
  apply_profile(hw_cfg, "hwce-450");  // calibrated accelerated operating point

  for (const auto& ref : kRepVgg) {
    auto net = load_net(ref.file);
    c.requiref(net.total_macs() == ref.macs, "%s: %llu MACs, want %llu", ref.file,
               (unsigned long long)net.total_macs(), (unsigned long long)ref.macs);
    c.requiref(net.total_weight_bytes() == ref.weight_bytes,
               "%s: %llu weight bytes, want %llu", ref.file,
               (unsigned long long)net.total_weight_bytes(),
               (unsigned long long)ref.weight_bytes);

    auto p = dnn::place_greedy(net, sw_cfg.mem.mram_bytes);
    auto sw = dnn::simulate(net, p, dnn::engine_kind::sw, sw_cfg, "greedy");
    auto hw = dnn::simulate(net, p, dnn::engine_kind::hwce, hw_cfg, "greedy");

    // +/-5% of the published latency
    c.requiref(within_rel(sw.total_s, ref.target_s, 0.05),
               "%s: SW latency %.3f ms outside %.0f ms +/- 5%%", ref.file,
               sw.total_s * 1e3, ref.target_s * 1e3);
    // exact transcription of the calibrated schedule (relative 1e-9 / 1e-3)
    c.requiref(within_rel(sw.total_s, ref.sw_total_s, kRelSw),
               "%s: SW latency %.9f s != frozen %.9f s", ref.file, sw.total_s,
               ref.sw_total_s);
    c.requiref(within_rel(sw.e_total_j(), ref.e_sw_total_j, kRelSw),
               "%s: SW energy %.9f J != frozen %.9f J", ref.file, sw.e_total_j(),
               ref.e_sw_total_j);
    c.requiref(within_rel(hw.total_s, ref.hw_total_s, kRelHw),
               "%s: accelerated latency %.9f s vs frozen %.9f s (tol 1e-3)", ref.file,
               hw.total_s, ref.hw_total_s);
    double speedup = sw.total_s / hw.total_s;
    c.requiref(speedup >= 2.7 && speedup <= 3.3, "%s: speedup %.3f outside [2.7, 3.3]",
               ref.file, speedup);
  }
}

// ---------------------------------------------------------------------------
// 6. MobileNetV2 energy closure.
void c6_mobilenet_energy(ctx& c) {
  sim_config cfg;
  auto net = load_net("mobilenet_v2.json");
  c.requiref(net.total_macs() == kMnMacs, "MACs %llu, want %llu",
             (unsigned long long)net.total_macs(), (unsigned long long)kMnMacs);
  c.requiref(net.total_weight_bytes() == kMnWeights, "weights %llu, want %llu",
             (unsigned long long)net.total_weight_bytes(), (unsigned long long)kMnWeights);

  auto mram = dnn::simulate(net, dnn::place_uniform(net, dnn::weight_home::mram,
                                                    cfg.mem.mram_bytes),
                            dnn::engine_kind::sw, cfg, "mram");
  auto hr = dnn::simulate(net, dnn::place_uniform(net, dnn::weight_home::hyperram,
                                                  cfg.mem.mram_bytes),
                          dnn::engine_kind::sw, cfg, "hyperram");

  // headline: 1.19 mJ +/- 15% per inference with on-chip weights
  c.requiref(within_rel(mram.e_total_j(), 1.19e-3, 0.15),
             "MRAM energy %.4f mJ outside 1.19 mJ +/- 15%%", mram.e_total_j() * 1e3);
  // off-chip weights cost 3-4x more energy
  double ratio = hr.e_total_j() / mram.e_total_j();
  c.requiref(ratio >= 3.0 && ratio <= 4.0, "HyperRAM/MRAM energy ratio %.3f not in [3, 4]",
             ratio);
  // the gap is the weight traffic priced at the off-chip channel: 3.4 MB * 880 pJ/B
  double gap = hr.e_total_j() - mram.e_total_j();
  double priced = 3.4e6 * 880e-12;
  c.requiref(within_rel(gap, priced, 0.15), "energy gap %.4f mJ vs %.4f mJ +/- 15%%",
             gap * 1e3, priced * 1e3);
  // frozen-model pins (1e-9 relative)
  c.requiref(within_rel(mram.e_total_j(), kMnMramETotal, kRelSw),
             "MRAM energy %.12f J != frozen %.12f J", mram.e_total_j(), kMnMramETotal);
  c.requiref(within_rel(hr.e_total_j(), kMnHrETotal, kRelSw),
             "HyperRAM energy %.12f J != frozen %.12f J", hr.e_total_j(), kMnHrETotal);
}

// ---------------------------------------------------------------------------
// 7. Compute-bound classification and the weight-home latency delta.
void c7_compute_bound(ctx& c) {
  sim_config cfg;
  auto net = load_net("mobilenet_v2.json");
  auto mram = dnn::simulate(net, dnn::place_uniform(net, dnn::weight_home::mram,
                                                    cfg.mem.mram_bytes),
                            dnn::engine_kind::sw, cfg, "mram");
  auto hr = dnn::simulate(net, dnn::place_uniform(net, dnn::weight_home::hyperram,
                                                  cfg.mem.mram_bytes),
                          dnn::engine_kind::sw, cfg, "hyperram");

  for (const auto* r : {&mram, &hr})
    for (const auto& l : r->layers) {
      bool want = l.name != "classifier";  // the final 1x1 is bandwidth-bound
      c.requiref(l.compute_bound == want, "%s/%s: compute_bound=%d, want %d",
                 r->weights_mode.c_str(), l.name.c_str(), int(l.compute_bound),
                 int(want));
    }

  // the per-layer makespan is home-independent everywhere but the final layer
  for (size_t i = 0; i + 1 < mram.layers.size(); ++i)
    c.requiref(std::fabs(mram.layers[i].span_s - hr.layers[i].span_s) <= 1e-12,
               "%s: span differs across homes by %.3e s", mram.layers[i].name.c_str(),
               mram.layers[i].span_s - hr.layers[i].span_s);
  double span_delta = mram.layers.back().span_s - hr.layers.back().span_s;
  c.requiref(span_delta > 1e-3, "classifier span delta %.6f ms not >1 ms",
             span_delta * 1e3);

  // 3 ms +/- 1 ms total difference, MRAM slower (narrower off-chip channel)
  double diff = mram.total_s - hr.total_s;
  c.requiref(diff >= 2e-3 && diff <= 4e-3, "total delta %.3f ms outside 3 +/- 1 ms",
             diff * 1e3);
  c.requiref(within_rel(mram.total_s, kMnMramTotal, kRelSw),
             "MRAM total %.12f s != frozen %.12f s", mram.total_s, kMnMramTotal);
  c.requiref(within_rel(hr.total_s, kMnHrTotal, kRelSw),
             "HyperRAM total %.12f s != frozen %.12f s", hr.total_s, kMnHrTotal);
}

// ---------------------------------------------------------------------------
// 8. Tiler: exhaustive-search optimality + capacity bound on every layer.
void c8_tiler(ctx& c) {
  sim_config cfg;
  auto net = load_net("mobilenet_v2.json");
  for (const auto& l : net.layers) {
    auto got = dnn::tile_layer(l, cfg.mem.l1_bytes);
    // independent capacity check: double-buffered working set fits L1
    c.requiref(2 * (got.in_bytes + got.w_bytes + got.out_bytes) <= cfg.mem.l1_bytes,
               "%s: footprint %llu exceeds L1", l.name.c_str(),
               (unsigned long long)got.l1_footprint());
    c.requiref(got.n_tiles() * got.work_per_tile ==
                   (l.kind == dnn::layer_kind::residual_add ? l.elems : l.macs),
               "%s: tiles do not cover the layer", l.name.c_str());

    // exhaustive search over all divisor triples
    uint64_t budget = cfg.mem.l1_bytes / 2;
    uint64_t best_work = 0, best_tiles = 0;
    uint32_t best_ct = 0, best_ht = 0, best_wt = 0;
    bool found = false;
    bool dw = l.kind == dnn::layer_kind::depthwise;
    bool res = l.kind == dnn::layer_kind::residual_add;
    uint64_t kk = uint64_t(l.k) * l.k;
    for (uint32_t ct = 1; ct <= l.c_out; ++ct) {
      if (l.c_out % ct) continue;
      for (uint32_t ht = 1; ht <= l.h_out; ++ht) {
        if (l.h_out % ht) continue;
        for (uint32_t wt = 1; wt <= l.w_out; ++wt) {
          if (l.w_out % wt) continue;
          uint64_t w_t = res  ? 0
                         : dw ? kk * ct
                         : l.kind == dnn::layer_kind::conv ? kk * l.c_in * ct
                                                           : uint64_t(l.c_in) * ct;
          uint32_t ih = std::min<uint32_t>((ht - 1) * l.stride + l.k, l.h_in);
          uint32_t iw = std::min<uint32_t>((wt - 1) * l.stride + l.k, l.w_in);
          uint64_t in_b = res ? 2ull * ct * ht * wt : uint64_t(dw ? ct : l.c_in) * ih * iw;
          uint64_t out_b = uint64_t(ct) * ht * wt;
          if (w_t + in_b + out_b > budget) continue;
          uint64_t work = res  ? uint64_t(ct) * ht * wt
                          : dw ? kk * ct * ht * wt
                          : l.kind == dnn::layer_kind::conv
                              ? kk * l.c_in * ct * ht * wt
                              : uint64_t(l.c_in) * ct * ht * wt;
          uint64_t n = uint64_t(l.c_out / ct) * (l.h_out / ht) * (l.w_out / wt);
          if (!found || work > best_work ||
              (work == best_work && (n < best_tiles || (n == best_tiles && ct > best_ct)))) {
            found = true;
            best_work = work;
            best_tiles = n;
            best_ct = ct;
            best_ht = ht;
            best_wt = wt;
          }
        }
      }
    }
    c.requiref(found, "%s: oracle found no feasible tiling", l.name.c_str());
    c.requiref(got.c_out_t == best_ct && got.h_t == best_ht && got.w_t == best_wt,
               "%s: tile (%u,%u,%u) != optimum (%u,%u,%u)", l.name.c_str(), got.c_out_t,
               got.h_t, got.w_t, best_ct, best_ht, best_wt);
  }
}

// ---------------------------------------------------------------------------
// 9. Greedy MRAM placement crossover layers.
void c9_placement(ctx& c) {
  sim_config cfg;
  for (const auto& ref : kRepVgg) {
    auto net = load_net(ref.file);
    auto p = dnn::place_greedy(net, cfg.mem.mram_bytes);
    c.requiref(p.last_mram >= 0 && p.first_hyperram >= 0, "%s: missing crossover",
               ref.file);
    if (p.last_mram < 0 || p.first_hyperram < 0) continue;
    const auto& last = net.layers[size_t(p.last_mram)].name;
    const auto& first = net.layers[size_t(p.first_hyperram)].name;
    c.requiref(last == ref.last_mram, "%s: MRAM up to '%s', want '%s'", ref.file,
               last.c_str(), ref.last_mram);
    c.requiref(first == ref.first_hyperram, "%s: HyperRAM from '%s', want '%s'",
               ref.file, first.c_str(), ref.first_hyperram);
    c.requiref(p.mram_bytes == ref.mram_bytes, "%s: %llu MRAM bytes, want %llu",
               ref.file, (unsigned long long)p.mram_bytes,
               (unsigned long long)ref.mram_bytes);
  }
}

// ---------------------------------------------------------------------------
// 10. Determinism: the full scenario suite rendered twice is byte-identical.
std::string render_suite() {
  std::string all;
  sim_config cfg;
  report::meta m;  // profile "default", seed 0

  const char* nets[] = {"repvgg_a0.json", "repvgg_a1.json", "repvgg_a2.json",
                        "mobilenet_v2.json"};
  for (const char* file : nets) {
    auto net = load_net(file);
    for (auto eng : {dnn::engine_kind::sw, dnn::engine_kind::hwce}) {
      std::vector<std::pair<std::string, dnn::placement>> modes;
      modes.emplace_back("greedy", dnn::place_greedy(net, cfg.mem.mram_bytes));
      modes.emplace_back("hyperram", dnn::place_uniform(net, dnn::weight_home::hyperram,
                                                        cfg.mem.mram_bytes));
      if (net.total_weight_bytes() <= cfg.mem.mram_bytes)
        modes.emplace_back("mram", dnn::place_uniform(net, dnn::weight_home::mram,
                                                      cfg.mem.mram_bytes));
      for (const auto& [label, p] : modes) {
        auto r = dnn::simulate(net, p, eng, cfg, label);
        all += report::dnn_csv(r);
        all += report::dnn_json(r, m);
        all += report::dnn_svg(r);
      }
    }
  }

  power::profile_request req;
  req.profile.segments.push_back({power::mode::cluster_active_hwce, {0, 0}, 0.1});
  req.profile.segments.push_back({power::mode::cognitive_sleep, {32e3, 8.0}, 3599.9});
  req.profile.wake_events_per_s = 1.0 / 3600.0;
  req.has_battery = true;
  req.battery_mah = 100.0;
  req.battery_v = 3.6;
  all += report::power_json(req, power::estimate_profile(req, cfg), m);

  // one microcode run with trace
  auto s = build_wake_setup();
  auto prog = cwu::assemble(wake_program_text(0, 15));
  cwu::cwu_vm vm(prog, s.channels, s.pset);
  vm.am().write(0, s.proto_a);
  vm.am().write(1, s.proto_b);
  vm.am().write(8, s.lab0);
  vm.am().write(9, s.lab1);
  vm.am().write(10, s.lab2);
  vm.am().write(11, s.base);
  for (uint32_t ch = 0; ch < 3; ++ch)
    vm.set_stream(ch, std::vector<int64_t>(s.raw[ch].begin(), s.raw[ch].begin() + 48));
  vm.set_trace([&](const std::string& l) {
    all += l;
    all += '\n';
  });
  auto rr = vm.run();
  all += report::cwu_json(rr, m);

  all += config_to_text(cfg);
  return all;
}

void c10_determinism(ctx& c) {
  auto first = render_suite();
  auto second = render_suite();
  c.requiref(!first.empty(), "suite rendered no output");
  c.require(first == second, "scenario suite output differs between runs");
  if (first == second) return;
  size_t i = 0;
  while (i < first.size() && i < second.size() && first[i] == second[i]) ++i;
  c.requiref(false, "first divergence at byte %zu of %zu", i, first.size());
}

struct criterion {
  const char* title;
  void (*fn)(ctx&);
  double budget_s;  // wall-clock bound stated with the criterion (0 = none)
};

}  // namespace

int main(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--data-dir" && i + 1 < argc) g_data_dir = argv[++i];
  }

  const criterion criteria[] = {
      {"wake-up unit power anchors (exact table points + derived sleep anchors)",
       c1_cwu_power, 1.0},
      {"HDC property suite (isometry, majority, orthogonality, CIM, AM argmin)",
       c2_hdc_properties, 30.0},
      {"microcoded two-class wake-up: >=90% accuracy, trace == composed oracle",
       c3_cwu_end_to_end, 30.0},
      {"convolution engine bit-exact vs naive oracle, 1000 random jobs + chaining",
       c4_hwce_bit_exact, 120.0},
      {"RepVGG SW latency within 5% of calibration; accelerated speedup in [2.7,3.3]",
       c5_repvgg_latency, 10.0},
      {"MobileNetV2 energy closure (1.19 mJ +/- 15%, ratio in [3,4], gap +/- 15%)",
       c6_mobilenet_energy, 10.0},
      {"compute-bound classification; weight-home latency delta 3 +/- 1 ms",
       c7_compute_bound, 10.0},
      {"tiler equals exhaustive optimum; capacity bound holds on every layer",
       c8_tiler, 60.0},
      {"greedy MRAM placement crossover layers", c9_placement, 1.0},
      {"byte-identical reports across repeated scenario-suite runs", c10_determinism,
       0.0},
  };

  int failures = 0;
  int id = 0;
  for (const auto& cr : criteria) {
    ++id;
    ctx c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.fn(c);
    } catch (const std::exception& e) {
      c.problems.push_back(std::string("exception: ") + e.what());
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0.0 && dt > cr.budget_s)
      c.problems.push_back(strf("runtime %.2f s exceeds the %.0f s budget", dt,
                                cr.budget_s));
    bool pass = c.problems.empty();
    failures += !pass;
    std::printf("[%2d/10] %s  %s  (%.0f ms)\n", id, pass ? "PASS" : "FAIL", cr.title,
                dt * 1e3);
    size_t shown = 0;
    for (const auto& p : c.problems) {
      if (++shown > 8) {
        std::printf("        ... %zu more\n", c.problems.size() - 8);
        break;
      }
      std::printf("        - %s\n", p.c_str());
    }
  }
  std::printf("%d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
