// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <vector>

#include <vega/common.hpp>

namespace vega::hwce {

enum class filter_size : uint8_t { f3x3, f5x5 };
enum class port : uint8_t { none, l1, fifo0, fifo1, fifo2 };

const char* filter_name(filter_size f);
const char* port_name(port p);
filter_size filter_from_name(const std::string& s);
port port_from_name(const std::string& s);

// One offloaded convolution job. 3x3 mode drives up to three filters off a
// shared input window (27 MACs); 5x5 mode fuses the datapath into one
// 25-MAC filter. Stride is fixed at 1 and convolutions are "valid" (the
// caller pads / adds halo rows).
struct job {
  filter_size filter = filter_size::f3x3;
  uint32_t n_filters = 1;   // 1..3 for 3x3, exactly 1 for 5x5
  uint32_t c_in = 1;        // input channel slice depth
  uint32_t h_in = 0;
  uint32_t w_in = 0;
  uint32_t precision_in = 8;  // {4,8,16}
  uint32_t precision_w = 8;   // {4,8,16}
  uint32_t norm_shift = 0;    // 0..31, arithmetic right shift
  uint32_t out_width = 8;     // {4,8,16}
  port accumulate_source = port::none;  // none | l1 | fifo0..2
  port output_sink = port::l1;          // l1 | fifo0..2
  bool shadowed = false;  // job registers preloaded while previous job ran

  uint32_t k() const { return filter == filter_size::f3x3 ? 3u : 5u; }
  uint32_t h_out() const { return h_in >= k() ? h_in - k() + 1 : 0; }
  uint32_t w_out() const { return w_in >= k() ? w_in - k() + 1 : 0; }
  uint64_t macs() const {
    return uint64_t(n_filters) * c_in * k() * k() * h_out() * w_out();
  }
  void validate() const;
};

struct timing_params {
  double eff_mac_per_cycle = 19.0;   // layer-effective throughput
  double peak_mac_per_cycle = 27.0;  // hard datapath bound
  uint64_t overhead_cycles = 100;    // job offload + weight-buffer load
  bool round_before_shift = false;   // add 1<<(shift-1) before normalization
};

// Normalization datapath: arithmetic shift (optional round-to-nearest med
// half-up) then clamp to the signed range of out_width.
int32_t saturate_normalize(int32_t acc, uint32_t shift, uint32_t out_width,
                           bool round_before_shift = false);

// Cycle model shared by job execution and the DNN pipeline: ceil(macs/rate)
// with rate capped by the datapath peak for the filter kind, plus the offload
// overhead for non-shadowed jobs.
uint64_t cycles_for_macs(uint64_t macs, bool shadowed, double kind_peak,
                         const timing_params& p);
uint64_t job_cycles(const job& j, const timing_params& p);

struct result {
  std::vector<int32_t> out;  // n_filters * h_out * w_out, filter-major
  bool normalized = false;   // false when the sink is a FIFO (raw partials)
  uint64_t macs = 0;
  uint64_t cycles = 0;
};

// Engine with the three internal 32-bit partial-sum FIFOs. Accumulation is
// modular 32-bit; saturation happens only at normalization time, so chaining
// channel slices through a FIFO is exact.
class engine {
 public:
  explicit engine(timing_params p = {});

  const timing_params& params() const { return p_; }
  size_t fifo_depth(uint32_t idx) const;
  void clear_fifos();

  // input: c_in*h_in*w_in (channel-major); weights: n_filters*c_in*k*k
  // (filter-major, then channel); l1_partials required iff
  // accumulate_source == l1 (n_filters*h_out*w_out).
  result run(const job& j, const std::vector<int16_t>& input,
             const std::vector<int16_t>& weights,
             const std::vector<int32_t>* l1_partials = nullptr);

 private:
  timing_params p_;
  std::array<std::deque<int32_t>, 3> fifos_;
  static constexpr size_t kFifoCapacity = 1u << 20;
};

}  // namespace vega::hwce
