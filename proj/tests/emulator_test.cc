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

#include <memory>
#include <random>
#include <vector>

#include "cryptovm/emulator.hpp"
#include "cryptovm/errors.hpp"
#include "cryptovm/keyservice.hpp"
#include "cryptovm/sim_backend.hpp"
#include "gtest/gtest.h"

namespace cryptovm {
namespace {

std::uint64_t mask_of(unsigned width) {
  return width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

std::unique_ptr<BufferMemory> make_memory(Backend& bk, unsigned width,
                                          const std::vector<std::uint64_t>&
                                              values) {
  std::vector<Word> words;
  words.reserve(values.size());
  for (std::uint64_t v : values) words.push_back(Word::encrypt(bk, v, width));
  return std::make_unique<BufferMemory>(width, std::move(words));
}

// Reference interpreter over plain integers: an independent path through
// the same instruction semantics, used to cross-check the encrypted one.
class ClearMachine {
 public:
  ClearMachine(unsigned width, unsigned regs,
               std::vector<std::uint64_t> memory)
      : width_(width), regs_(regs, 0), mem_(std::move(memory)) {}

  void run(const Program& p) {
    while (!halted_ && pc_ / 4 < p.instructions.size()) step(p);
    halted_ = true;
  }

  std::uint64_t reg(unsigned i) const { return regs_[i]; }
  std::uint64_t mem(std::size_t i) const { return mem_[i]; }
  bool n() const { return n_; }
  bool z() const { return z_; }
  bool c() const { return c_; }
  bool v() const { return v_; }

 private:
  std::uint64_t mask() const { return mask_of(width_); }

  std::int64_t to_signed(std::uint64_t value) const {
    std::uint64_t sign = std::uint64_t{1} << (width_ - 1);
    return static_cast<std::int64_t>(value ^ sign) -
           static_cast<std::int64_t>(sign);
  }

  std::uint64_t operand(const Instruction& insn) const {
    return insn.rm >= 0 ? regs_[insn.rm] : *insn.imm & mask();
  }

  void add_flags(std::uint64_t a, std::uint64_t b, std::uint64_t result,
                 bool carry) {
    n_ = (result >> (width_ - 1)) & 1;
    z_ = result == 0;
    c_ = carry;
    v_ = ((~(a ^ b) & (a ^ result)) >> (width_ - 1)) & 1;
  }

  void step(const Program& p) {
    const Instruction& insn = p.instructions[pc_ / 4];
    std::uint32_t next = pc_ + 4;
    switch (insn.op) {
      case Opcode::Halt:
        halted_ = true;
        break;
      case Opcode::Load:
        regs_[insn.rd] = mem_.at(*insn.imm);
        break;
      case Opcode::Store:
        mem_.at(*insn.imm) = regs_[insn.rn];
        break;
      case Opcode::Mov:
        regs_[insn.rd] = insn.imm ? *insn.imm & mask() : regs_[insn.rn];
        break;
      case Opcode::Add:
      case Opcode::Adds: {
        std::uint64_t a = regs_[insn.rn];
        std::uint64_t b = operand(insn);
        std::uint64_t sum = (a + b) & mask();
        regs_[insn.rd] = sum;
        if (insn.sets_flags) add_flags(a, b, sum, a + b > mask());
        break;
      }
      case Opcode::Sub:
      case Opcode::Subs:
      case Opcode::Cmp: {
        std::uint64_t a = regs_[insn.rn];
        std::uint64_t b = operand(insn);
        std::uint64_t diff = (a - b) & mask();
        if (insn.op != Opcode::Cmp) regs_[insn.rd] = diff;
        if (insn.sets_flags) {
          add_flags(a, (~b) & mask(), diff, a >= b);
        }
        break;
      }
      case Opcode::Mul:
      case Opcode::Muls: {
        std::uint64_t product = regs_[insn.rn] * operand(insn);
        regs_[insn.rd] = product & mask();
        if (insn.sets_flags) {
          n_ = (regs_[insn.rd] >> (width_ - 1)) & 1;
          z_ = regs_[insn.rd] == 0;
        }
        break;
      }
      case Opcode::Smul:
      case Opcode::Smuls: {
        std::int64_t product =
            to_signed(regs_[insn.rn]) * to_signed(operand(insn));
        regs_[insn.rd] = static_cast<std::uint64_t>(product) & mask();
        if (insn.sets_flags) {
          n_ = (regs_[insn.rd] >> (width_ - 1)) & 1;
          z_ = regs_[insn.rd] == 0;
        }
        break;
      }
      case Opcode::Udiv: {
        std::uint64_t b = operand(insn);
        regs_[insn.rd] = b == 0 ? mask() : regs_[insn.rn] / b;
        break;
      }
      case Opcode::Lls:
      case Opcode::Lrs:
      case Opcode::Ars: {
        std::uint64_t value = regs_[insn.rn];
        unsigned amount = insn.rm >= 0
                              ? static_cast<unsigned>(regs_[insn.rm] % width_)
                              : static_cast<unsigned>(*insn.imm);
        std::uint64_t out;
        if (insn.op == Opcode::Lls) {
          out = amount >= width_ ? 0 : (value << amount) & mask();
        } else if (insn.op == Opcode::Lrs) {
          out = amount >= width_ ? 0 : value >> amount;
        } else {
          bool neg = (value >> (width_ - 1)) & 1;
          out = amount >= width_ ? (neg ? mask() : 0) : value >> amount;
          if (neg && amount > 0 && amount < width_) {
            out |= mask() & ~(mask() >> amount);
          }
        }
        regs_[insn.rd] = out;
        break;
      }
      case Opcode::And:
        regs_[insn.rd] = regs_[insn.rn] & operand(insn);
        break;
      case Opcode::Or:
        regs_[insn.rd] = regs_[insn.rn] | operand(insn);
        break;
      case Opcode::Xor:
        regs_[insn.rd] = regs_[insn.rn] ^ operand(insn);
        break;
      case Opcode::Orn:
        regs_[insn.rd] = (regs_[insn.rn] | ~operand(insn)) & mask();
        break;
      case Opcode::Not:
        regs_[insn.rd] = ~regs_[insn.rn] & mask();
        break;
      case Opcode::Bfc: {
        std::uint64_t field = ((std::uint64_t{1} << *insn.imm2) - 1)
                              << *insn.imm;
        regs_[insn.rd] &= ~field;
        break;
      }
      case Opcode::Bfi: {
        std::uint64_t field = ((std::uint64_t{1} << *insn.imm2) - 1)
                              << *insn.imm;
        regs_[insn.rd] = (regs_[insn.rd] & ~field) |
                         ((regs_[insn.rn] << *insn.imm) & field);
        break;
      }
      case Opcode::Rbit: {
        std::uint64_t out = 0;
        for (unsigned i = 0; i < width_; ++i) {
          if ((regs_[insn.rn] >> i) & 1) {
            out |= std::uint64_t{1} << (width_ - 1 - i);
          }
        }
        regs_[insn.rd] = out;
        break;
      }
      case Opcode::Rev: {
        std::uint64_t out = 0;
        for (unsigned byte = 0; byte < width_ / 8; ++byte) {
          std::uint64_t octet = (regs_[insn.rn] >> (8 * byte)) & 0xFF;
          out |= octet << (8 * (width_ / 8 - 1 - byte));
        }
        regs_[insn.rd] = out;
        break;
      }
      case Opcode::B: {
        bool taken = !insn.cond || cond_predicate(*insn.cond, n_, z_, c_, v_);
        next = taken ? *insn.target * 4 : next;
        break;
      }
    }
    pc_ = next;
  }

  unsigned width_;
  std::vector<std::uint64_t> regs_;
  std::vector<std::uint64_t> mem_;
  bool n_ = false, z_ = false, c_ = false, v_ = false;
  std::uint32_t pc_ = 0;
  bool halted_ = false;
};

TEST(CondPredicate, ExhaustiveAgainstReference) {
  // Reference formulation expressed differently (LS/LE as negations of
  // HI/GT) to cross-check the implementation's table.
  auto reference = [](CondCode cond, bool n, bool z, bool c, bool v) {
    switch (cond) {
      case CondCode::Eq: return z;
      case CondCode::Ne: return !z;
      case CondCode::Cs: return c;
      case CondCode::Cc: return !c;
      case CondCode::Mi: return n;
      case CondCode::Pl: return !n;
      case CondCode::Vs: return v;
      case CondCode::Vc: return !v;
      case CondCode::Hi: return c && !z;
      case CondCode::Ls: return !(c && !z);
      case CondCode::Ge: return n == v;
      case CondCode::Lt: return !(n == v);
      case CondCode::Gt: return !z && n == v;
      case CondCode::Le: return !(!z && n == v);
      case CondCode::Al: return true;
    }
    return false;
  };
  for (int i = 0; i < kCondCodeCount; ++i) {
    CondCode cond = static_cast<CondCode>(i);
    for (int bits = 0; bits < 16; ++bits) {
      bool n = bits & 8, z = bits & 4, c = bits & 2, v = bits & 1;
      EXPECT_EQ(cond_predicate(cond, n, z, c, v), reference(cond, n, z, c, v))
          << cond_name(cond) << " nzcv=" << bits;
    }
  }
  // A few hand-checked anchors.
  EXPECT_TRUE(cond_predicate(CondCode::Eq, false, true, false, false));
  EXPECT_TRUE(cond_predicate(CondCode::Ge, true, false, false, true));
  EXPECT_FALSE(cond_predicate(CondCode::Gt, false, true, false, false));
  EXPECT_TRUE(cond_predicate(CondCode::Hi, false, false, true, false));
  EXPECT_FALSE(cond_predicate(CondCode::Ne, false, true, false, false));
}

TEST(Machine, StraightLineMovHalt) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(".word_size 16\nMOV R0 7\nHALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_TRUE(m.halted());
  EXPECT_EQ(decrypt_word(bk, m.reg(0)), 7u);
  EXPECT_EQ(m.stats().instructions, 2u);
  EXPECT_EQ(m.stats().branch_queries, 0u);
}

TEST(Machine, LoadAddStore) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {1, 3}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      ".equ READ_ADDR1 0\n"
      ".equ READ_ADDR2 1\n"
      ".equ WRITE_ADDR 1\n"
      "LOAD    R1  READ_ADDR1\n"
      "LOAD    R2  READ_ADDR2\n"
      "ADD     R0  R1, R2\n"
      "STORE   R0  WRITE_ADDR\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);  // falls past the end
  EXPECT_EQ(decrypt_word(bk, m.memory().load(1)), 4u);
  EXPECT_EQ(decrypt_word(bk, m.memory().load(0)), 1u);
}

TEST(Machine, CountdownLoopRunsExactly42Iterations) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV    R0    R0    42\n"
      "Loop_label:\n"
      "    SUBS   R0    R0    1\n"
      "    B_NE   Loop_label\n");
  EXPECT_EQ(m.run(p, 1000), StopReason::Halted);
  EXPECT_EQ(decrypt_word(bk, m.reg(0)), 0u);
  EXPECT_EQ(m.stats().branch_queries, 42u);
  // 1 MOV + 42 SUBS + 42 branches.
  EXPECT_EQ(m.stats().instructions, 85u);
}

TEST(Machine, CmpEqualThenBneNotTaken) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 9\n"
      "MOV R1 9\n"
      "CMP R0 R1\n"
      "B_NE skipped\n"
      "MOV R2 1\n"
      "skipped:\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_EQ(decrypt_word(bk, m.reg(2)), 1u);  // fall-through executed
  EXPECT_EQ(m.stats().branch_queries, 1u);
}

TEST(Machine, UnconditionalBranchesDoNotQueryTheOracle) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "B over\n"
      "MOV R0 1\n"
      "over:\n"
      "B_AL done\n"
      "MOV R0 2\n"
      "done:\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_EQ(m.stats().branch_queries, 0u);
  EXPECT_EQ(decrypt_word(bk, m.reg(0)), 0u);
}

TEST(Machine, EmptyProgramStopsCleanly) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p;
  p.word_size = 16;
  EXPECT_EQ(m.run(p, 10), StopReason::Halted);
  EXPECT_EQ(m.stats().instructions, 0u);
}

TEST(Machine, StepLimitReported) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(".word_size 16\nforever:\nB forever\n");
  EXPECT_EQ(m.run(p, 100), StopReason::StepLimit);
  EXPECT_FALSE(m.halted());
  EXPECT_EQ(m.stats().instructions, 100u);
}

TEST(Machine, StepOnHaltedThrows) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(".word_size 16\nHALT\n");
  EXPECT_EQ(m.run(p, 10), StopReason::Halted);
  EXPECT_THROW(m.step(p), InputError);
}

TEST(Machine, MemoryAddressOutOfRange) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {5}), oracle);
  Program load_oob = assemble(".word_size 16\nLOAD R0 1\n");
  EXPECT_THROW(m.step(load_oob), InputError);
}

TEST(Machine, WordSizeMismatchRejected) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble("MOV R0 1\n");  // 32-bit program
  EXPECT_THROW(m.step(p), InputError);
  EXPECT_THROW(Machine(bk, {.word_size = 32}, make_memory(bk, 16, {}),
                       oracle),
               InputError);
}

TEST(Machine, NonFlagOpsPreserveNzcv) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 0\n"
      "CMP R0 0\n"      // sets Z
      "ADD R1 R0 5\n"   // must not touch flags
      "NOT R2 R1\n"
      "B_EQ good\n"
      "MOV R3 1\n"
      "good:\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_EQ(decrypt_word(bk, m.reg(3)), 0u);  // branch was taken
}

TEST(Machine, MulsUpdatesOnlyNandZ) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 1\n"
      "CMP R0 0\n"       // sets C (1 >= 0), clears Z
      "MOV R1 0\n"
      "MULS R2 R0 R1\n"  // result 0: sets Z, must keep C
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_TRUE(bk.decrypt_bit(m.flags().z));
  EXPECT_TRUE(bk.decrypt_bit(m.flags().c));  // preserved from CMP
  EXPECT_EQ(decrypt_word(bk, m.reg(2)), 0u);
}

TEST(Machine, MulTruncatesToWordSize) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 0x1234\n"
      "MOV R1 0x0100\n"
      "MUL R2 R0 R1\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);
  EXPECT_EQ(decrypt_word(bk, m.reg(2)), 0x3400u);
}

TEST(Machine, FlagMicroOpUsesDisjointGates) {
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 7\n"
      "ADDS R1 R0 3\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 100), StopReason::Halted);

  const GateDag& dag = bk.dag();
  std::vector<std::uint64_t> data_nodes;
  std::vector<std::uint64_t> flag_nodes;
  std::uint32_t max_data_epoch = 0;
  std::uint32_t min_flag_epoch = ~0u;
  for (const DagNode& node : dag.nodes()) {
    const std::string& region = dag.region_name(node.region);
    if (region.starts_with("ADDS/adder")) {
      data_nodes.push_back(node.id);
      max_data_epoch = std::max(max_data_epoch, node.epoch);
    } else if (region.starts_with("ADDS/flags")) {
      flag_nodes.push_back(node.id);
      min_flag_epoch = std::min(min_flag_epoch, node.epoch);
    }
  }
  EXPECT_FALSE(data_nodes.empty());
  EXPECT_FALSE(flag_nodes.empty());
  for (std::uint64_t id : flag_nodes) {
    for (std::uint64_t other : data_nodes) EXPECT_NE(id, other);
  }
  // The flag calculation is a second micro-op: it starts after the data
  // micro-op's last epoch.
  EXPECT_GT(min_flag_epoch, max_data_epoch);
}

TEST(Machine, RandomStraightLineProgramsMatchClearInterpreter) {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 30; ++round) {
    const unsigned width = 8;
    const std::uint64_t mask = mask_of(width);
    std::vector<std::uint64_t> memory = {rng() & mask, rng() & mask,
                                         rng() & mask, rng() & mask};
    Program p;
    p.word_size = width;
    auto reg = [&] { return static_cast<int>(rng() % 8); };
    const int count = 25;
    for (int i = 0; i < count; ++i) {
      Instruction insn;
      switch (rng() % 18) {
        case 0:
          insn.op = Opcode::Mov;
          insn.rd = reg();
          insn.imm = rng() & mask;
          break;
        case 1:
          insn.op = Opcode::Load;
          insn.rd = reg();
          insn.imm = rng() % memory.size();
          break;
        case 2:
          insn.op = Opcode::Store;
          insn.rn = reg();
          insn.imm = rng() % memory.size();
          break;
        case 3:
          insn.op = Opcode::Adds;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 4:
          insn.op = Opcode::Subs;
          insn.rd = reg();
          insn.rn = reg();
          insn.imm = rng() & mask;
          break;
        case 5:
          insn.op = Opcode::Mul;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 6:
          insn.op = Opcode::Smuls;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 7:
          insn.op = Opcode::Udiv;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 8: {
          constexpr Opcode kShifts[] = {Opcode::Lls, Opcode::Lrs,
                                        Opcode::Ars};
          insn.op = kShifts[rng() % 3];
          insn.rd = reg();
          insn.rn = reg();
          if (rng() % 2) {
            insn.imm = rng() % (width + 1);
          } else {
            insn.rm = reg();
          }
          break;
        }
        case 9:
          insn.op = Opcode::And;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 10:
          insn.op = Opcode::Orn;
          insn.rd = reg();
          insn.rn = reg();
          insn.imm = rng() & mask;
          break;
        case 11:
          insn.op = Opcode::Xor;
          insn.rd = reg();
          insn.rn = reg();
          insn.rm = reg();
          break;
        case 12:
          insn.op = Opcode::Not;
          insn.rd = reg();
          insn.rn = reg();
          break;
        case 13: {
          insn.op = Opcode::Bfc;
          insn.rd = reg();
          unsigned lsb = rng() % width;
          insn.imm = lsb;
          insn.imm2 = 1 + rng() % (width - lsb);
          break;
        }
        case 14: {
          insn.op = Opcode::Bfi;
          insn.rd = reg();
          insn.rn = reg();
          unsigned lsb = rng() % width;
          insn.imm = lsb;
          insn.imm2 = 1 + rng() % (width - lsb);
          break;
        }
        case 15:
          insn.op = Opcode::Rbit;
          insn.rd = reg();
          insn.rn = reg();
          break;
        case 16:
          insn.op = Opcode::Rev;
          insn.rd = reg();
          insn.rn = reg();
          break;
        default:
          insn.op = Opcode::Cmp;
          insn.rn = reg();
          insn.imm = rng() & mask;
          break;
      }
      insn.sets_flags = opcode_sets_flags(insn.op);
      p.instructions.push_back(insn);
    }

    SimBackend bk;
    LocalBranchOracle oracle(bk);
    Machine m(bk, {.word_size = width, .register_count = 8},
              make_memory(bk, width, memory), oracle);
    ASSERT_EQ(m.run(p, count + 1), StopReason::Halted);

    ClearMachine clear(width, 8, memory);
    clear.run(p);

    for (unsigned r = 0; r < 8; ++r) {
      ASSERT_EQ(decrypt_word(bk, m.reg(r)), clear.reg(r))
          << "round " << round << " register " << r;
    }
    for (std::size_t a = 0; a < memory.size(); ++a) {
      ASSERT_EQ(decrypt_word(bk, m.memory().load(a)), clear.mem(a))
          << "round " << round << " memory " << a;
    }
    ASSERT_EQ(bk.decrypt_bit(m.flags().n), clear.n()) << "round " << round;
    ASSERT_EQ(bk.decrypt_bit(m.flags().z), clear.z()) << "round " << round;
    ASSERT_EQ(bk.decrypt_bit(m.flags().c), clear.c()) << "round " << round;
    ASSERT_EQ(bk.decrypt_bit(m.flags().v), clear.v()) << "round " << round;
  }
}

TEST(Machine, LoopProgramsMatchClearInterpreter) {
  // Branchy cross-check: compute 13 * 11 by repeated addition.
  SimBackend bk;
  LocalBranchOracle oracle(bk);
  Machine m(bk, {.word_size = 16}, make_memory(bk, 16, {}), oracle);
  Program p = assemble(
      ".word_size 16\n"
      "MOV R0 0\n"
      "MOV R1 13\n"
      "MOV R2 11\n"
      "again:\n"
      "ADD R0 R0 R1\n"
      "SUBS R2 R2 1\n"
      "B_NE again\n"
      "HALT\n");
  EXPECT_EQ(m.run(p, 1000), StopReason::Halted);
  EXPECT_EQ(decrypt_word(bk, m.reg(0)), 143u);
  EXPECT_EQ(m.stats().branch_queries, 11u);
}

}  // namespace
}  // namespace cryptovm
