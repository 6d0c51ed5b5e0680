// SPDX-License-Identifier: Apache-2.0
#include <vega/cwu_asm.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>

namespace vega::cwu {

namespace {

struct op_info {
  opcode op;
  const char* name;
  // operand shape: none, row_src, row_dst, perm_imm, chan_pair_imm, chan_imm, pc_imm
  enum class shape { none, row_src, row_dst, perm_imm, chan_pair_imm, chan_imm, pc_imm } sh;
};

constexpr op_info kOps[] = {
    {opcode::nop, "NOP", op_info::shape::none},
    {opcode::loadv, "LOADV", op_info::shape::row_src},
    {opcode::storev, "STOREV", op_info::shape::row_dst},
    {opcode::xor_, "XOR", op_info::shape::row_src},
    {opcode::and_, "AND", op_info::shape::row_src},
    {opcode::not_, "NOT", op_info::shape::none},
    {opcode::perm, "PERM", op_info::shape::perm_imm},
    {opcode::imenc, "IMENC", op_info::shape::chan_pair_imm},
    {opcode::cimenc, "CIMENC", op_info::shape::chan_imm},
    {opcode::bundle_begin, "BUNDLE_BEGIN", op_info::shape::none},
    {opcode::bundle_acc, "BUNDLE_ACC", op_info::shape::none},
    {opcode::bundle_end, "BUNDLE_END", op_info::shape::none},
    {opcode::search, "SEARCH", op_info::shape::none},
    {opcode::wait_sample, "WAIT_SAMPLE", op_info::shape::chan_imm},
    {opcode::jump, "JUMP", op_info::shape::pc_imm},
    {opcode::halt, "HALT", op_info::shape::none},
};

const op_info& info(opcode op) { return kOps[static_cast<size_t>(op)]; }

const op_info* find_mnemonic(const std::string& upper) {
  for (const auto& oi : kOps)
    if (upper == oi.name) return &oi;
  return nullptr;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

uint32_t parse_uint(const std::string& tok, uint32_t max, const char* what, int line) {
  size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(tok, &pos, 0);
  } catch (const std::exception&) {
    throw parse_error(strf("line %d: bad %s operand '%s'", line, what, tok.c_str()));
  }
  if (pos != tok.size())
    throw parse_error(strf("line %d: bad %s operand '%s'", line, what, tok.c_str()));
  if (v > max)
    throw parse_error(strf("line %d: %s %lu out of range [0,%u]", line, what, v, max));
  return static_cast<uint32_t>(v);
}

std::vector<std::string> split_operands(const std::string& rest) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(rest);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

}  // namespace

const char* mnemonic(opcode op) { return info(op).name; }

uint32_t encode(const micro_instruction& mi) {
  if (static_cast<uint32_t>(mi.op) >= kOpcodeCount)
    throw error(strf("unencodable opcode %u", static_cast<unsigned>(mi.op)));
  if (mi.dst > 15 || mi.src > 15 || mi.imm > 8191)
    throw error(strf("instruction field out of range (dst=%u src=%u imm=%u)", mi.dst,
                     mi.src, mi.imm));
  return (static_cast<uint32_t>(mi.op) << 21) | (static_cast<uint32_t>(mi.dst) << 17) |
         (static_cast<uint32_t>(mi.src) << 13) | mi.imm;
}

micro_instruction decode(uint32_t word, size_t offset) {
  if (word >> kInstructionBits)
    throw parse_error(strf("instruction %zu: word 0x%08x exceeds 26 bits",
                           offset, word));
  uint32_t op = (word >> 21) & 0x1f;
  if (op >= kOpcodeCount)
    throw parse_error(strf("instruction %zu (byte offset %zu): reserved opcode %u",
                           offset, offset * 4, op));
  micro_instruction mi;
  mi.op = static_cast<opcode>(op);
  mi.dst = static_cast<uint8_t>((word >> 17) & 0xf);
  mi.src = static_cast<uint8_t>((word >> 13) & 0xf);
  mi.imm = static_cast<uint16_t>(word & 0x1fff);
  return mi;
}

cwu_program assemble(const std::string& source) {
  cwu_program prog;
  struct pending_line {
    std::string mnem;
    std::vector<std::string> operands;
    int line;
  };
  std::vector<pending_line> lines;
  std::map<std::string, uint32_t> labels;

  std::stringstream ss(source);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    std::string s = raw;
    if (size_t c = s.find(';'); c != std::string::npos) s = s.substr(0, c);
    s = trim(s);
    if (s.empty()) continue;

    if (s[0] == '.') {  // directive
      std::stringstream ds(s);
      std::string name, val;
      ds >> name >> val;
      std::string u = upper(name);
      if (u == ".DIM")
        prog.vector_dim = parse_uint(val, 2048, "dim", line_no);
      else if (u == ".THRESHOLD")
        prog.wake_threshold = parse_uint(val, 2048, "threshold", line_no);
      else if (u == ".TARGET")
        prog.target_index = parse_uint(val, 15, "target", line_no);
      else
        throw parse_error(strf("line %d: unknown directive '%s'", line_no, name.c_str()));
      continue;
    }

    while (true) {  // labels (possibly followed by an instruction on one line)
      size_t colon = s.find(':');
      if (colon == std::string::npos) break;
      std::string lbl = trim(s.substr(0, colon));
      if (lbl.empty() || lbl.find_first_of(" \t") != std::string::npos)
        throw parse_error(strf("line %d: bad label '%s'", line_no, lbl.c_str()));
      if (labels.count(lbl))
        throw parse_error(strf("line %d: duplicate label '%s'", line_no, lbl.c_str()));
      labels[lbl] = static_cast<uint32_t>(lines.size());
      s = trim(s.substr(colon + 1));
      if (s.empty()) break;
    }
    if (s.empty()) continue;

    std::stringstream is(s);
    std::string mnem;
    is >> mnem;
    std::string rest;
    std::getline(is, rest);
    lines.push_back({upper(mnem), split_operands(rest), line_no});
  }

  if (lines.size() > kMaxProgramLength)
    throw parse_error(strf("program exceeds %u instructions (%zu)", kMaxProgramLength,
                           lines.size()));

  for (const auto& pl : lines) {
    const op_info* oi = find_mnemonic(pl.mnem);
    if (!oi)
      throw parse_error(strf("line %d: unknown mnemonic '%s'", pl.line, pl.mnem.c_str()));
    micro_instruction mi;
    mi.op = oi->op;
    auto want = [&](size_t lo, size_t hi) {
      if (pl.operands.size() < lo || pl.operands.size() > hi)
        throw parse_error(strf("line %d: %s takes %zu..%zu operands, got %zu", pl.line,
                               oi->name, lo, hi, pl.operands.size()));
    };
    switch (oi->sh) {
      case op_info::shape::none:
        want(0, 0);
        break;
      case op_info::shape::row_src:
        want(1, 1);
        mi.src = static_cast<uint8_t>(parse_uint(pl.operands[0], 15, "AM row", pl.line));
        break;
      case op_info::shape::row_dst:
        want(1, 1);
        mi.dst = static_cast<uint8_t>(parse_uint(pl.operands[0], 15, "AM row", pl.line));
        break;
      case op_info::shape::perm_imm:
        want(1, 1);
        mi.imm = static_cast<uint16_t>(parse_uint(pl.operands[0], 3, "perm id", pl.line));
        break;
      case op_info::shape::chan_pair_imm: {
        want(1, 2);
        uint32_t ch = parse_uint(pl.operands[0], 7, "channel", pl.line);
        uint32_t pair =
            pl.operands.size() == 2 ? parse_uint(pl.operands[1], 1, "pair", pl.line) : 0;
        mi.imm = static_cast<uint16_t>(ch | (pair << 3));
        break;
      }
      case op_info::shape::chan_imm:
        want(1, 1);
        mi.imm = static_cast<uint16_t>(parse_uint(pl.operands[0], 7, "channel", pl.line));
        break;
      case op_info::shape::pc_imm: {
        want(1, 1);
        const std::string& t = pl.operands[0];
        if (auto it = labels.find(t); it != labels.end()) {
          mi.imm = static_cast<uint16_t>(it->second);
        } else if (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0]))) {
          mi.imm = static_cast<uint16_t>(parse_uint(t, 8191, "jump target", pl.line));
        } else {
          throw parse_error(strf("line %d: undefined label '%s'", pl.line, t.c_str()));
        }
        break;
      }
    }
    prog.instructions.push_back(mi);
  }

  for (size_t i = 0; i < prog.instructions.size(); ++i) {
    const auto& mi = prog.instructions[i];
    if (mi.op == opcode::jump && mi.imm >= prog.instructions.size())
      throw parse_error(strf("instruction %zu: jump target %u beyond program end (%zu)",
                             i, mi.imm, prog.instructions.size()));
  }
  return prog;
}

std::string disassemble(const cwu_program& program) {
  std::string out;
  out += strf(".dim %u\n.threshold %u\n.target %u\n", program.vector_dim,
              program.wake_threshold, program.target_index);
  for (const auto& mi : program.instructions) {
    if (static_cast<uint32_t>(mi.op) >= kOpcodeCount)
      throw error("disassemble: reserved opcode in program");
    const op_info& oi = info(mi.op);
    switch (oi.sh) {
      case op_info::shape::none:
        out += oi.name;
        break;
      case op_info::shape::row_src:
        out += strf("%s %u", oi.name, mi.src);
        break;
      case op_info::shape::row_dst:
        out += strf("%s %u", oi.name, mi.dst);
        break;
      case op_info::shape::perm_imm:
        out += strf("%s %u", oi.name, mi.imm);
        break;
      case op_info::shape::chan_pair_imm:
        out += strf("%s %u, %u", oi.name, mi.imm & 7u, (mi.imm >> 3) & 1u);
        break;
      case op_info::shape::chan_imm:
        out += strf("%s %u", oi.name, mi.imm & 7u);
        break;
      case op_info::shape::pc_imm:
        out += strf("%s %u", oi.name, mi.imm);
        break;
    }
    out += '\n';
  }
  return out;
}

namespace {
void put_u32(std::vector<uint8_t>& v, uint32_t x) {
  v.push_back(static_cast<uint8_t>(x));
  v.push_back(static_cast<uint8_t>(x >> 8));
  v.push_back(static_cast<uint8_t>(x >> 16));
  v.push_back(static_cast<uint8_t>(x >> 24));
}
uint32_t get_u32(const std::vector<uint8_t>& v, size_t off) {
  return static_cast<uint32_t>(v[off]) | (static_cast<uint32_t>(v[off + 1]) << 8) |
         (static_cast<uint32_t>(v[off + 2]) << 16) |
         (static_cast<uint32_t>(v[off + 3]) << 24);
}
}  // namespace

std::vector<uint8_t> to_binary(const cwu_program& program) {
  std::vector<uint8_t> out{'V', 'C', 'W', 'U'};
  put_u32(out, kSchemaVersion);
  put_u32(out, program.vector_dim);
  put_u32(out, program.wake_threshold);
  put_u32(out, program.target_index);
  put_u32(out, static_cast<uint32_t>(program.instructions.size()));
  for (const auto& mi : program.instructions) put_u32(out, encode(mi));
  return out;
}

cwu_program from_binary(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 24 || bytes[0] != 'V' || bytes[1] != 'C' || bytes[2] != 'W' ||
      bytes[3] != 'U')
    throw parse_error("bad CWU binary: missing VCWU magic");
  if (get_u32(bytes, 4) != static_cast<uint32_t>(kSchemaVersion))
    throw parse_error(strf("unsupported CWU binary version %u", get_u32(bytes, 4)));
  cwu_program prog;
  prog.vector_dim = get_u32(bytes, 8);
  prog.wake_threshold = get_u32(bytes, 12);
  prog.target_index = get_u32(bytes, 16);
  uint32_t count = get_u32(bytes, 20);
  if (count > kMaxProgramLength)
    throw parse_error(strf("program exceeds %u instructions (%u)", kMaxProgramLength,
                           count));
  if (bytes.size() != 24 + 4ull * count)
    throw parse_error("bad CWU binary: truncated instruction stream");
  for (uint32_t i = 0; i < count; ++i)
    prog.instructions.push_back(decode(get_u32(bytes, 24 + 4ull * i), i));
  return prog;
}

}  // namespace vega::cwu
