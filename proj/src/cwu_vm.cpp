// SPDX-License-Identifier: Apache-2.0
#include <vega/cwu_vm.hpp>

#include <algorithm>

namespace vega::cwu {

void channel_config::validate() const {
  if (channel_id > 7) throw error(strf("channel_id %u out of range [0,7]", channel_id));
  if (input_width_bits < 1 || input_width_bits > 32)
    throw error(strf("channel %u: input width %u out of range [1,32]", channel_id,
                     input_width_bits));
  if (width_conversion_bits < 1 || width_conversion_bits > 32)
    throw error(strf("channel %u: conversion width %u out of range [1,32]", channel_id,
                     width_conversion_bits));
  if (subsample_factor < 1)
    throw error(strf("channel %u: subsample_factor must be >= 1", channel_id));
  if (lbp && (lbp_window < 1 || lbp_window > 8))
    throw error(strf("channel %u: LBP window %u out of range [1,8]", channel_id,
                     lbp_window));
  if (offset_removal && lowpass)
    throw error(strf("channel %u: offset_removal and lowpass are exclusive", channel_id));
}

std::optional<int64_t> preprocess_sample(const channel_config& cfg, preprocess_state& st,
                                         int64_t raw) {
  int64_t lo = -(int64_t(1) << (cfg.input_width_bits - 1));
  int64_t hi = (int64_t(1) << (cfg.input_width_bits - 1)) - 1;
  if (raw < lo || raw > hi)
    throw error(strf("channel %u: raw sample %lld outside %u-bit range", cfg.channel_id,
                     static_cast<long long>(raw), cfg.input_width_bits));

  // width conversion keeps the most significant bits
  int64_t x = raw;
  if (cfg.input_width_bits > cfg.width_conversion_bits)
    x >>= (cfg.input_width_bits - cfg.width_conversion_bits);

  st.ema += (x - st.ema) >> cfg.lowpass_shift;

  int64_t out = x;
  if (cfg.offset_removal)
    out = x - st.ema;
  else if (cfg.lowpass)
    out = st.ema;

  ++st.tick;
  if (st.tick % cfg.subsample_factor != 0) return std::nullopt;

  if (!cfg.lbp) return out;

  if (st.lbp_hist.size() < cfg.lbp_window) {
    st.lbp_hist.push_back(out);
    return std::nullopt;  // window not yet full
  }
  int64_t code = 0;
  for (uint32_t i = 0; i < cfg.lbp_window; ++i) {
    // bit i compares the (i+1)-th most recent previous sample with the current one
    int64_t prev = st.lbp_hist[st.lbp_hist.size() - 1 - i];
    if (prev > out) code |= int64_t(1) << i;
  }
  st.lbp_hist.push_back(out);
  st.lbp_hist.pop_front();
  return code;
}

cwu_vm::cwu_vm(cwu_program program, std::vector<channel_config> channels,
               const hdc::permutation_set& pset)
    : prog_(std::move(program)),
      channels_(std::move(channels)),
      pset_(pset),
      am_(prog_.vector_dim),
      reg_(prog_.vector_dim) {
  if (prog_.instructions.empty()) throw error("empty CWU program");
  if (prog_.instructions.size() > kMaxProgramLength)
    throw error(strf("program exceeds %u instructions", kMaxProgramLength));
  if (prog_.vector_dim != pset.dim)
    throw error(strf("program dim %u does not match permutation set dim %u",
                     prog_.vector_dim, pset.dim));
  if (prog_.target_index >= hdc::associative_memory::kRows)
    throw error(strf("target index %u out of range", prog_.target_index));
  for (const auto& c : channels_) {
    c.validate();
    if (chan_[c.channel_id].configured)
      throw error(strf("duplicate channel config for channel %u", c.channel_id));
    chan_[c.channel_id].configured = true;
    chan_[c.channel_id].cfg = c;
  }
}

void cwu_vm::set_stream(uint32_t channel_id, std::vector<int64_t> raw_samples) {
  if (channel_id > 7 || !chan_[channel_id].configured)
    throw error(strf("stream for unconfigured channel %u", channel_id));
  chan_[channel_id].stream = std::move(raw_samples);
  chan_[channel_id].pos = 0;
}

std::optional<int64_t> cwu_vm::pull_processed(uint32_t ch) {
  auto& c = chan_[ch];
  while (c.pos < c.stream.size()) {
    auto out = preprocess_sample(c.cfg, c.pp, c.stream[c.pos++]);
    if (out) return out;
  }
  return std::nullopt;  // stream exhausted
}

void cwu_vm::emit_trace(uint32_t pc, const micro_instruction& mi, const std::string& extra) {
  if (!trace_) return;
  std::string line = strf("{\"cycle\":%llu,\"pc\":%u,\"op\":\"%s\"",
                          static_cast<unsigned long long>(cycles_), pc, mnemonic(mi.op));
  line += extra;
  line += "}";
  trace_(line);
}

bool cwu_vm::step() {
  if (stopped_) return false;
  uint32_t pc = pc_;
  const micro_instruction& mi = prog_.instructions[pc];
  uint32_t lanes = (prog_.vector_dim + 511) / 512;
  ++steps_;
  std::string extra;

  auto channel_of = [&](uint16_t imm) -> channel_rt& {
    uint32_t ch = imm & 7u;
    if (!chan_[ch].configured)
      throw error(strf("pc %u: %s on unconfigured channel %u", pc, mnemonic(mi.op), ch));
    return chan_[ch];
  };
  auto pending_of = [&](uint16_t imm) -> int64_t {
    auto& c = channel_of(imm);
    if (!c.pending)
      throw error(strf("pc %u: %s on channel %u with no pending sample "
                       "(missing WAIT_SAMPLE)", pc, mnemonic(mi.op), imm & 7u));
    return *c.pending;
  };
  auto am_row = [&](uint8_t row) -> const hdc::hd_vector& {
    const auto& r = am_.row(row);
    if (!r) throw error(strf("pc %u: %s reads empty AM row %u", pc, mnemonic(mi.op), row));
    return *r;
  };

  bool advance = true;
  switch (mi.op) {
    case opcode::nop:
      cycles_ += 1;
      break;
    case opcode::loadv:
      reg_ = am_row(mi.src);
      cycles_ += lanes;
      break;
    case opcode::storev:
      am_.write(mi.dst, reg_);
      cycles_ += lanes;
      break;
    case opcode::xor_:
      reg_ = hdc::bind(reg_, am_row(mi.src));
      cycles_ += lanes;
      break;
    case opcode::and_:
      reg_ = reg_ & am_row(mi.src);
      cycles_ += lanes;
      break;
    case opcode::not_:
      reg_ = ~reg_;
      cycles_ += lanes;
      break;
    case opcode::perm:
      reg_ = hdc::permute(reg_, mi.imm, pset_);
      cycles_ += lanes;
      break;
    case opcode::imenc: {
      auto& c = channel_of(mi.imm);
      int64_t s = pending_of(mi.imm);
      uint32_t w = c.cfg.symbol_width();
      uint64_t word = static_cast<uint64_t>(s) &
                      (w >= 64 ? ~0ull : ((1ull << w) - 1));
      uint32_t pair = (mi.imm >> 3) & 1u;
      reg_ = hdc::im_encode(word, w, pset_, pair);
      cycles_ += w;
      break;
    }
    case opcode::cimenc: {
      auto& c = channel_of(mi.imm);
      int64_t s = pending_of(mi.imm);
      uint32_t w = c.cfg.symbol_width();
      uint64_t level = static_cast<uint64_t>(s) &
                       (w >= 64 ? ~0ull : ((1ull << w) - 1));
      reg_ = hdc::cim_encode(static_cast<uint32_t>(level), c.cfg.max_level(), reg_);
      cycles_ += lanes;
      break;
    }
    case opcode::bundle_begin:
      bundle_.emplace(prog_.vector_dim);
      cycles_ += lanes;
      break;
    case opcode::bundle_acc:
      if (!bundle_) throw error(strf("pc %u: BUNDLE_ACC without BUNDLE_BEGIN", pc));
      bundle_->accumulate(reg_);
      cycles_ += lanes;
      break;
    case opcode::bundle_end:
      if (!bundle_) throw error(strf("pc %u: BUNDLE_END without BUNDLE_BEGIN", pc));
      reg_ = bundle_->finalize();
      bundle_.reset();
      cycles_ += lanes;
      break;
    case opcode::search: {
      last_search_ = am_.lookup(reg_);
      cycles_ += lanes;
      extra = strf(",\"event\":\"search\",\"index\":%u,\"distance\":%u",
                   last_search_.index, last_search_.distance);
      if (last_search_.distance <= prog_.wake_threshold &&
          last_search_.index == prog_.target_index) {
        wake_ = wake_event{samples_consumed_, last_search_.index, last_search_.distance,
                           cycles_};
        extra += ",\"wake\":true";
        stopped_ = true;
      }
      break;
    }
    case opcode::wait_sample: {
      auto& c = channel_of(mi.imm);
      cycles_ += 1;
      auto s = pull_processed(mi.imm & 7u);
      if (!s) {
        extra = ",\"event\":\"stream_end\"";
        stopped_ = true;  // stream exhausted: autonomous run ends without wake
        advance = false;
      } else {
        c.pending = s;
        ++samples_consumed_;
        extra = strf(",\"event\":\"sample\",\"channel\":%u,\"value\":%lld", mi.imm & 7u,
                     static_cast<long long>(*s));
      }
      break;
    }
    case opcode::jump:
      cycles_ += 1;
      pc_ = mi.imm;
      if (pc_ >= prog_.instructions.size())
        throw error(strf("pc %u: jump target %u beyond program end", pc, mi.imm));
      advance = false;
      emit_trace(pc, mi, extra);
      return !stopped_;
    case opcode::halt:
      cycles_ += 1;
      extra = ",\"event\":\"halt\"";
      stopped_ = true;
      break;
  }

  emit_trace(pc, mi, extra);
  if (advance) pc_ = (pc_ + 1) % prog_.instructions.size();  // infinite fetch loop
  return !stopped_;
}

run_result cwu_vm::run(uint64_t max_samples, uint64_t max_steps) {
  while (!stopped_) {
    if (steps_ >= max_steps)
      throw error(strf("CWU program exceeded %llu steps without terminating",
                       static_cast<unsigned long long>(max_steps)));
    if (samples_consumed_ >= max_samples) break;
    step();
  }
  return run_result{wake_, samples_consumed_, cycles_, steps_};
}

run_result run_stream(const cwu_program& program,
                      const std::vector<channel_config>& channels,
                      const std::vector<std::vector<int64_t>>& streams,
                      const hdc::permutation_set& pset,
                      const std::vector<std::pair<uint32_t, hdc::hd_vector>>& am_preload,
                      uint64_t max_samples, trace_sink sink) {
  cwu_vm vm(program, channels, pset);
  if (streams.size() > 8) throw error("more than 8 streams");
  for (size_t i = 0; i < streams.size(); ++i)
    vm.set_stream(static_cast<uint32_t>(i), streams[i]);
  for (const auto& [row, v] : am_preload) vm.am().write(row, v);
  if (sink) vm.set_trace(std::move(sink));
  return vm.run(max_samples);
}

}  // namespace vega::cwu
