// Copyright 2026 The cryptovm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CRYPTOVM_ISA_HPP_
#define CRYPTOVM_ISA_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cryptovm {

enum class Opcode {
  Load,
  Store,
  Mov,
  Add,
  Adds,
  Sub,
  Subs,
  Mul,
  Muls,
  Smul,
  Smuls,
  Udiv,
  Lls,
  Lrs,
  Ars,
  And,
  Or,
  Xor,
  Orn,
  Not,
  Bfc,
  Bfi,
  Rbit,
  Rev,
  Cmp,
  B,
  Halt,
};

enum class CondCode {
  Eq,
  Ne,
  Cs,
  Cc,
  Mi,
  Pl,
  Vs,
  Vc,
  Hi,
  Ls,
  Ge,
  Lt,
  Gt,
  Le,
  Al,
};

inline constexpr int kCondCodeCount = 15;

std::string_view opcode_name(Opcode op);
std::optional<Opcode> opcode_from_name(std::string_view name);
std::string_view cond_name(CondCode cond);
std::optional<CondCode> cond_from_name(std::string_view name);
bool opcode_sets_flags(Opcode op);

// Decoded instruction. Register operands use rd/rn/rm; LOAD and STORE use
// imm for the cleartext memory address, and the bit-field ops use imm/imm2
// for lsb/width. Branches hold the resolved target instruction index; an
// absent cond means an unconditional B.
struct Instruction {
  Opcode op = Opcode::Halt;
  std::optional<CondCode> cond;
  int rd = -1;
  int rn = -1;
  int rm = -1;
  std::optional<std::uint64_t> imm;
  std::optional<std::uint64_t> imm2;
  std::optional<std::uint32_t> target;
  bool sets_flags = false;

  friend bool operator==(const Instruction&, const Instruction&) = default;
};

// Label-resolved instruction stream. Instruction addresses are index * 4.
struct Program {
  std::vector<Instruction> instructions;
  std::map<std::string, std::uint32_t> labels;
  unsigned word_size = 32;

  friend bool operator==(const Program&, const Program&) = default;
};

struct AssembleOptions {
  unsigned default_word_size = 32;
  unsigned register_count = 16;
};

// Line-oriented two-pass assembler. `label:` defines a label; `;` and `#`
// start comments; operands are separated by whitespace and/or commas;
// immediates are decimal or 0x-hex; `.equ NAME VALUE` defines an address
// constant and `.word_size 16|32` selects the word width. Raises
// AssembleError with the offending line number.
Program assemble(std::string_view source, const AssembleOptions& options = {});

// Canonical text that assembles back to an equal Program: labels on their
// own lines before their targets, operands space-separated, immediates in
// decimal.
std::string disassemble(const Program& program);

}  // namespace cryptovm

#endif  // CRYPTOVM_ISA_HPP_
