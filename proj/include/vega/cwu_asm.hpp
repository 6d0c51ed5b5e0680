// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <vega/common.hpp>

namespace vega::cwu {

// 26-bit instruction word: opcode[25:21] dst[20:17] src[16:13] imm[12:0].
// The field split and mnemonics are model-defined (the hardware documents
// only the 64 x 26-bit store); they are stable across versions.
enum class opcode : uint8_t {
  nop = 0,
  loadv = 1,         // R = AM[src]
  storev = 2,        // AM[dst] = R
  xor_ = 3,          // R = R ^ AM[src]
  and_ = 4,          // R = R & AM[src]
  not_ = 5,          // R = ~R
  perm = 6,          // R = permute(R, imm)
  imenc = 7,         // R = im_encode(sample[ch], D_ch); imm[2:0]=ch imm[3]=pair
  cimenc = 8,        // R = cim_encode(sample[ch], max_level_ch, base=R); imm[2:0]=ch
  bundle_begin = 9,  // reset bundle counters
  bundle_acc = 10,   // counters += R
  bundle_end = 11,   // R = majority(counters)
  search = 12,       // (idx, dist) = am_lookup(R); wake check
  wait_sample = 13,  // block until channel imm[2:0] yields a processed sample
  jump = 14,         // pc = imm
  halt = 15,
};

constexpr uint32_t kOpcodeCount = 16;
constexpr uint32_t kMaxProgramLength = 64;
constexpr uint32_t kInstructionBits = 26;

const char* mnemonic(opcode op);

struct micro_instruction {
  opcode op = opcode::nop;
  uint8_t dst = 0;    // 4-bit
  uint8_t src = 0;    // 4-bit
  uint16_t imm = 0;   // 13-bit

  bool operator==(const micro_instruction&) const = default;
};

uint32_t encode(const micro_instruction& mi);
// Throws parse_error on reserved opcodes / out-of-range words; `offset` is
// the instruction index used in diagnostics.
micro_instruction decode(uint32_t word, size_t offset = 0);

struct cwu_program {
  std::vector<micro_instruction> instructions;
  uint32_t vector_dim = 2048;
  uint32_t wake_threshold = 0;
  uint32_t target_index = 0;

  bool operator==(const cwu_program&) const = default;
};

// Text format: one instruction per line, `;` comments, `label:` definitions,
// and `.dim/.threshold/.target` directives for the program header.
cwu_program assemble(const std::string& source);
std::string disassemble(const cwu_program& program);

// Binary container: "VCWU" magic, version, header fields, then one 32-bit
// little-endian word per instruction (upper 6 bits zero).
std::vector<uint8_t> to_binary(const cwu_program& program);
cwu_program from_binary(const std::vector<uint8_t>& bytes);

}  // namespace vega::cwu
