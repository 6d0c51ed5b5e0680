// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <vega/cwu_asm.hpp>
#include <vega/hdc.hpp>

namespace vega::cwu {

// One sensor channel of the preprocessor. Stage order is fixed:
// width-convert -> EMA update -> offset removal / low-pass -> subsample -> LBP.
struct channel_config {
  uint32_t channel_id = 0;            // 0..7
  uint32_t input_width_bits = 16;     // width of raw samples (1..32)
  uint32_t width_conversion_bits = 16;  // output width after conversion (1..32)
  bool offset_removal = false;        // emit x - m
  bool lowpass = false;               // emit m instead of x
  uint32_t lowpass_shift = 0;         // EMA decay k: m += (x - m) >> k
  uint32_t subsample_factor = 1;      // emit every Nth sample
  bool lbp = false;                   // local-binary-pattern output
  uint32_t lbp_window = 0;            // N <= 8 previous samples

  // Symbol width presented to the encoder (IMENC word width / CIM level width).
  uint32_t symbol_width() const { return lbp ? lbp_window : width_conversion_bits; }
  uint32_t max_level() const {
    uint32_t w = symbol_width();
    return w >= 32 ? 0xffffffffu : (1u << w) - 1;
  }

  void validate() const;
};

struct preprocess_state {
  int64_t ema = 0;
  uint64_t tick = 0;  // samples seen (drives subsampling)
  std::deque<int64_t> lbp_hist;
};

// Push one raw sample through the chain; returns a processed sample on ticks
// that survive subsampling (and, with LBP on, once the window has filled).
std::optional<int64_t> preprocess_sample(const channel_config& cfg, preprocess_state& st,
                                         int64_t raw);

struct wake_event {
  uint64_t sample_index;   // processed samples consumed when the wake fired
  uint32_t matched_row;
  uint32_t distance;
  uint64_t elapsed_cycles;
};

struct run_result {
  std::optional<wake_event> wake;
  uint64_t samples_consumed = 0;
  uint64_t cycles = 0;
  uint64_t steps = 0;
};

using trace_sink = std::function<void(const std::string& jsonl_line)>;

// Interpreter for one CWU program over per-channel raw-sample streams.
// The 512-bit-wide encoder register R is the single vector accumulator; the
// cycle counter charges ceil(dim/512) per vector op, the symbol width D per
// IMENC, and 1 cycle for scalar control ops.
class cwu_vm {
 public:
  cwu_vm(cwu_program program, std::vector<channel_config> channels,
         const hdc::permutation_set& pset);

  // Raw input stream for one channel (index = channel_id).
  void set_stream(uint32_t channel_id, std::vector<int64_t> raw_samples);

  hdc::associative_memory& am() { return am_; }
  const hdc::associative_memory& am() const { return am_; }
  const hdc::hd_vector& reg() const { return reg_; }
  uint32_t pc() const { return pc_; }
  uint64_t cycles() const { return cycles_; }

  void set_trace(trace_sink sink) { trace_ = std::move(sink); }

  // Execute a single instruction (wrapping PC). Returns false when the VM
  // has stopped (HALT executed, wake fired, or a stream ran dry).
  bool step();

  // Run until wake / HALT / stream exhaustion / sample or step budget.
  run_result run(uint64_t max_samples = UINT64_MAX, uint64_t max_steps = 100'000'000);

  const std::optional<wake_event>& wake() const { return wake_; }

 private:
  std::optional<int64_t> pull_processed(uint32_t ch);
  void emit_trace(uint32_t pc, const micro_instruction& mi, const std::string& extra);

  cwu_program prog_;
  std::vector<channel_config> channels_;  // dense by channel_id
  hdc::permutation_set pset_;
  hdc::associative_memory am_;
  hdc::hd_vector reg_;
  std::optional<hdc::bundle_accumulator> bundle_;
  uint32_t pc_ = 0;
  uint64_t cycles_ = 0;
  uint64_t steps_ = 0;
  bool stopped_ = false;
  std::optional<wake_event> wake_;
  hdc::lookup_result last_search_{0, 0};
  uint64_t samples_consumed_ = 0;

  struct channel_rt {
    bool configured = false;
    channel_config cfg;
    preprocess_state pp;
    std::vector<int64_t> stream;
    size_t pos = 0;
    std::optional<int64_t> pending;
  };
  std::array<channel_rt, 8> chan_;
  trace_sink trace_;
};

// Convenience wrapper: configure, preload AM rows, run.
run_result run_stream(const cwu_program& program,
                      const std::vector<channel_config>& channels,
                      const std::vector<std::vector<int64_t>>& streams,
                      const hdc::permutation_set& pset,
                      const std::vector<std::pair<uint32_t, hdc::hd_vector>>& am_preload,
                      uint64_t max_samples = UINT64_MAX, trace_sink sink = nullptr);

}  // namespace vega::cwu
