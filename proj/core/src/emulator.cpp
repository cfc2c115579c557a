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

#include "cryptovm/emulator.hpp"

#include <bit>
#include <string>
#include <utility>

#include "cryptovm/errors.hpp"

namespace cryptovm {

bool cond_predicate(CondCode cond, bool n, bool z, bool c, bool v) {
  switch (cond) {
    case CondCode::Eq:
      return z;
    case CondCode::Ne:
      return !z;
    case CondCode::Cs:
      return c;
    case CondCode::Cc:
      return !c;
    case CondCode::Mi:
      return n;
    case CondCode::Pl:
      return !n;
    case CondCode::Vs:
      return v;
    case CondCode::Vc:
      return !v;
    case CondCode::Hi:
      return c && !z;
    case CondCode::Ls:
      return !c || z;
    case CondCode::Ge:
      return n == v;
    case CondCode::Lt:
      return n != v;
    case CondCode::Gt:
      return !z && n == v;
    case CondCode::Le:
      return z || n != v;
    case CondCode::Al:
      return true;
  }
  throw InputError("unknown condition code");
}

Word BufferMemory::load(std::size_t address) {
  if (address >= words_.size()) {
    throw InputError("load address " + std::to_string(address) +
                     " out of range (memory has " +
                     std::to_string(words_.size()) + " words)");
  }
  return words_[address];
}

void BufferMemory::store(std::size_t address, const Word& word) {
  if (address >= words_.size()) {
    throw InputError("store address " + std::to_string(address) +
                     " out of range (memory has " +
                     std::to_string(words_.size()) + " words)");
  }
  if (word.width() != word_size_) {
    throw InputError("stored word width does not match the memory");
  }
  words_[address] = word;
}

Machine::Machine(Backend& backend, MachineConfig config,
                 std::unique_ptr<DataMemory> memory, BranchOracle& oracle)
    : backend_(backend),
      config_(config),
      memory_(std::move(memory)),
      oracle_(oracle) {
  if (!std::has_single_bit(config_.word_size) || config_.word_size < 4 ||
      config_.word_size > 64) {
    throw InputError("word size must be a power of two in [4, 64]");
  }
  if (config_.register_count == 0) {
    throw InputError("register count must be positive");
  }
  if (memory_ && memory_->word_size() != config_.word_size) {
    throw InputError("data memory word size (" +
                     std::to_string(memory_->word_size()) +
                     ") does not match the machine (" +
                     std::to_string(config_.word_size) + ")");
  }
  RegionScope region(backend_, "init");
  vregs_.resize(config_.register_count);
  nzcv_.n = backend_.constant(false);
  nzcv_.z = backend_.constant(false);
  nzcv_.c = backend_.constant(false);
  nzcv_.v = backend_.constant(false);
}

const Word& Machine::reg(unsigned index) {
  if (index >= vregs_.size()) {
    throw InputError("register index out of range");
  }
  if (vregs_[index].width() == 0) {
    RegionScope region(backend_, "init");
    vregs_[index] = Word::constant(backend_, 0, config_.word_size);
  }
  return vregs_[index];
}

void Machine::write_reg(int index, Word value) {
  if (index < 0 || static_cast<unsigned>(index) >= vregs_.size()) {
    throw InputError("register index out of range");
  }
  vregs_[static_cast<unsigned>(index)] = std::move(value);
}

Word Machine::operand(const Instruction& insn) {
  if (insn.rm >= 0) return reg(static_cast<unsigned>(insn.rm));
  if (!insn.imm) throw InputError("instruction is missing an operand");
  RegionScope region(backend_, "imm");
  return Word::constant(backend_, *insn.imm, config_.word_size);
}

void Machine::step(const Program& program) {
  if (halted_) throw InputError("step on a halted machine");
  if (program.word_size != config_.word_size) {
    throw InputError("program word size (" +
                     std::to_string(program.word_size) +
                     ") does not match the machine (" +
                     std::to_string(config_.word_size) + ")");
  }
  const std::uint32_t index = pc_ / 4;
  if (index == program.instructions.size()) {
    // Fell past the last instruction: a clean stop.
    halted_ = true;
    return;
  }
  if (index > program.instructions.size()) {
    throw InputError("program counter outside the program");
  }
  const Instruction& insn = program.instructions[index];
  pc_overridden_ = false;
  execute(insn, program);
  ++stats_.instructions;
  if (!pc_overridden_ && !halted_) pc_ += 4;
  backend_.fence();
}

StopReason Machine::run(const Program& program, std::uint64_t max_steps) {
  if (max_steps == 0) throw InputError("max_steps must be positive");
  for (std::uint64_t executed = 0;; ++executed) {
    if (halted_) return StopReason::Halted;
    if (executed == max_steps) return StopReason::StepLimit;
    step(program);
  }
}

void Machine::update_flags_add(const alu::AddResult& result, const Word& a,
                               const Word& b, bool subtraction) {
  // For a - b the adder saw NOT(b), so the overflow term uses the
  // complemented sign.
  BitHandle b_sign =
      subtraction ? not_gate(backend_, b.msb()) : b.msb();
  nzcv_ = alu::flags(backend_, result.sum, result.carry_out, a.msb(), b_sign);
}

void Machine::branch(const Instruction& insn, const Program& program) {
  if (!insn.target) throw InputError("branch without a target");
  const std::uint32_t target = *insn.target;
  const std::uint32_t fallthrough = pc_ / 4 + 1;
  if (target > program.instructions.size()) {
    throw InputError("branch target outside the program");
  }
  std::uint32_t next;
  if (!insn.cond || *insn.cond == CondCode::Al) {
    next = target;  // no oracle query for an unconditional branch
  } else {
    ++stats_.branch_queries;
    BranchDecision decision =
        oracle_.resolve(*insn.cond, nzcv_, target, fallthrough);
    next = decision.next_index ? *decision.next_index
                               : (decision.taken ? target : fallthrough);
    if (next > program.instructions.size()) {
      throw ProtocolError("branch resolution returned an index outside "
                          "the program");
    }
  }
  pc_ = next * 4;
  pc_overridden_ = true;
}

void Machine::execute(const Instruction& insn, const Program& program) {
  Backend& bk = backend_;
  RegionScope region(bk, opcode_name(insn.op));
  switch (insn.op) {
    case Opcode::Halt:
      halted_ = true;
      return;
    case Opcode::B:
      branch(insn, program);
      return;
    case Opcode::Load: {
      if (!insn.imm) throw InputError("LOAD is missing an address");
      Word value = memory_->load(static_cast<std::size_t>(*insn.imm));
      std::vector<BitHandle> bits(value.width());
      for (unsigned i = 0; i < value.width(); ++i) {
        bits[i] = copy_gate(bk, value.bit(i));
      }
      write_reg(insn.rd, Word(std::move(bits)));
      return;
    }
    case Opcode::Store: {
      if (!insn.imm) throw InputError("STORE is missing an address");
      const Word& source = reg(static_cast<unsigned>(insn.rn));
      std::vector<BitHandle> bits(source.width());
      for (unsigned i = 0; i < source.width(); ++i) {
        bits[i] = copy_gate(bk, source.bit(i));
      }
      memory_->store(static_cast<std::size_t>(*insn.imm),
                     Word(std::move(bits)));
      return;
    }
    case Opcode::Mov: {
      if (insn.imm) {
        write_reg(insn.rd, Word::constant(bk, *insn.imm, config_.word_size));
      } else {
        const Word& source = reg(static_cast<unsigned>(insn.rn));
        std::vector<BitHandle> bits(source.width());
        for (unsigned i = 0; i < source.width(); ++i) {
          bits[i] = copy_gate(bk, source.bit(i));
        }
        write_reg(insn.rd, Word(std::move(bits)));
      }
      return;
    }
    case Opcode::Add:
    case Opcode::Adds: {
      Word a = reg(static_cast<unsigned>(insn.rn));
      Word b = operand(insn);
      alu::AddResult result = alu::add(bk, a, b);
      write_reg(insn.rd, result.sum);
      if (insn.sets_flags) {
        bk.fence();  // flag calculation is a second micro-op
        update_flags_add(result, a, b, /*subtraction=*/false);
      }
      return;
    }
    case Opcode::Sub:
    case Opcode::Subs:
    case Opcode::Cmp: {
      Word a = reg(static_cast<unsigned>(insn.rn));
      Word b = operand(insn);
      alu::AddResult result = alu::sub(bk, a, b);
      if (insn.op != Opcode::Cmp) write_reg(insn.rd, result.sum);
      if (insn.sets_flags) {
        bk.fence();
        update_flags_add(result, a, b, /*subtraction=*/true);
      }
      return;
    }
    case Opcode::Mul:
    case Opcode::Muls:
    case Opcode::Smul:
    case Opcode::Smuls: {
      Word a = reg(static_cast<unsigned>(insn.rn));
      Word b = operand(insn);
      const bool is_signed =
          insn.op == Opcode::Smul || insn.op == Opcode::Smuls;
      Word product = is_signed ? alu::mul_signed(bk, a, b)
                               : alu::mul_unsigned(bk, a, b);
      // The destination register keeps the low half of the 2N-bit product.
      std::vector<BitHandle> low(product.bits().begin(),
                                 product.bits().begin() + config_.word_size);
      Word low_word(std::move(low));
      write_reg(insn.rd, low_word);
      if (insn.sets_flags) {
        // N and Z come from the written word; C and V are preserved.
        bk.fence();
        RegionScope flags_region(bk, "flags");
        nzcv_.n = copy_gate(bk, low_word.msb());
        nzcv_.z = not_gate(bk, alu::or_reduce(bk, low_word));
      }
      return;
    }
    case Opcode::Udiv: {
      Word a = reg(static_cast<unsigned>(insn.rn));
      Word b = operand(insn);
      write_reg(insn.rd, alu::div_unsigned(bk, a, b));
      return;
    }
    case Opcode::Lls:
    case Opcode::Lrs:
    case Opcode::Ars: {
      alu::ShiftKind kind = insn.op == Opcode::Lls
                                ? alu::ShiftKind::LogicalLeft
                                : insn.op == Opcode::Lrs
                                      ? alu::ShiftKind::LogicalRight
                                      : alu::ShiftKind::ArithmeticRight;
      Word value = reg(static_cast<unsigned>(insn.rn));
      if (insn.rm >= 0) {
        Word amount = reg(static_cast<unsigned>(insn.rm));
        write_reg(insn.rd, alu::shift_reg(bk, value, kind, amount));
      } else {
        if (!insn.imm) throw InputError("shift is missing an amount");
        write_reg(insn.rd,
                  alu::shift_imm(bk, value, kind,
                                 static_cast<unsigned>(*insn.imm)));
      }
      return;
    }
    case Opcode::And:
    case Opcode::Or:
    case Opcode::Xor:
    case Opcode::Orn: {
      alu::BitwiseKind kind = insn.op == Opcode::And
                                  ? alu::BitwiseKind::And
                                  : insn.op == Opcode::Or
                                        ? alu::BitwiseKind::Or
                                        : insn.op == Opcode::Xor
                                              ? alu::BitwiseKind::Xor
                                              : alu::BitwiseKind::OrNot;
      Word a = reg(static_cast<unsigned>(insn.rn));
      Word b = operand(insn);
      write_reg(insn.rd, alu::bitwise(bk, kind, a, b));
      return;
    }
    case Opcode::Not:
      write_reg(insn.rd,
                alu::not_word(bk, reg(static_cast<unsigned>(insn.rn))));
      return;
    case Opcode::Bfc:
      if (!insn.imm || !insn.imm2) {
        throw InputError("BFC is missing its field operands");
      }
      write_reg(insn.rd,
                alu::bfc(bk, reg(static_cast<unsigned>(insn.rd)),
                         static_cast<unsigned>(*insn.imm),
                         static_cast<unsigned>(*insn.imm2)));
      return;
    case Opcode::Bfi:
      if (!insn.imm || !insn.imm2) {
        throw InputError("BFI is missing its field operands");
      }
      write_reg(insn.rd,
                alu::bfi(bk, reg(static_cast<unsigned>(insn.rd)),
                         reg(static_cast<unsigned>(insn.rn)),
                         static_cast<unsigned>(*insn.imm),
                         static_cast<unsigned>(*insn.imm2)));
      return;
    case Opcode::Rbit:
      write_reg(insn.rd,
                alu::rbit(bk, reg(static_cast<unsigned>(insn.rn))));
      return;
    case Opcode::Rev:
      write_reg(insn.rd, alu::rev(bk, reg(static_cast<unsigned>(insn.rn))));
      return;
  }
  throw InputError("unknown opcode");
}

}  // namespace cryptovm
