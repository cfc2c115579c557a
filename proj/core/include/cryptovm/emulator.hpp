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

#ifndef CRYPTOVM_EMULATOR_HPP_
#define CRYPTOVM_EMULATOR_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cryptovm/alu.hpp"
#include "cryptovm/gates.hpp"
#include "cryptovm/isa.hpp"
#include "cryptovm/word.hpp"

namespace cryptovm {

// Standard ARM condition semantics over the NZCV flags.
bool cond_predicate(CondCode cond, bool n, bool z, bool c, bool v);

// Outcome of one branch resolution. next_index, when present, names the
// instruction index to fetch next and overrides the emulator's own target
// computation (user-controlled resolution mode).
struct BranchDecision {
  bool taken = false;
  std::optional<std::uint32_t> next_index;
};

// The key-owner side of branch resolution: receives the condition and the
// encrypted flags, answers with a decision. target/fallthrough carry the
// candidate instruction indices for the user-controlled mode.
class BranchOracle {
 public:
  virtual ~BranchOracle() = default;
  virtual BranchDecision resolve(CondCode cond, const alu::Flags& flags,
                                 std::uint32_t target_index,
                                 std::uint32_t fallthrough_index) = 0;
};

// Word-addressed encrypted data memory.
class DataMemory {
 public:
  virtual ~DataMemory() = default;
  virtual Word load(std::size_t address) = 0;
  virtual void store(std::size_t address, const Word& word) = 0;
  virtual std::size_t size() const = 0;
  virtual unsigned word_size() const = 0;
};

class BufferMemory final : public DataMemory {
 public:
  BufferMemory(unsigned word_size, std::vector<Word> words)
      : word_size_(word_size), words_(std::move(words)) {}

  Word load(std::size_t address) override;
  void store(std::size_t address, const Word& word) override;
  std::size_t size() const override { return words_.size(); }
  unsigned word_size() const override { return word_size_; }

 private:
  unsigned word_size_;
  std::vector<Word> words_;
};

struct ExecStats {
  std::uint64_t instructions = 0;
  std::uint64_t branch_queries = 0;
};

enum class StopReason {
  Halted,     // HALT executed or control fell past the last instruction
  StepLimit,  // max_steps exhausted before the program stopped
};

struct MachineConfig {
  unsigned word_size = 32;       // power of two in [4, 64]
  unsigned register_count = 16;
};

// Fetch/decode/execute over a Program: a register file of encrypted
// words, a cleartext program counter, encrypted NZCV flags and an
// encrypted data memory. Arithmetic goes through the alu circuits; every
// conditional branch is resolved by the oracle.
class Machine {
 public:
  Machine(Backend& backend, MachineConfig config,
          std::unique_ptr<DataMemory> memory, BranchOracle& oracle);

  void step(const Program& program);
  StopReason run(const Program& program, std::uint64_t max_steps);

  bool halted() const { return halted_; }
  std::uint32_t pc() const { return pc_; }
  const ExecStats& stats() const { return stats_; }
  // Registers hold encrypted zeros until first written; reading one
  // materializes the zero word, so this is not const.
  const Word& reg(unsigned index);
  const alu::Flags& flags() const { return nzcv_; }
  DataMemory& memory() { return *memory_; }
  unsigned word_size() const { return config_.word_size; }

 private:
  void execute(const Instruction& insn, const Program& program);
  Word operand(const Instruction& insn);
  void write_reg(int index, Word value);
  void update_flags_add(const alu::AddResult& result, const Word& a,
                        const Word& b, bool subtraction);
  void branch(const Instruction& insn, const Program& program);

  Backend& backend_;
  MachineConfig config_;
  std::unique_ptr<DataMemory> memory_;
  BranchOracle& oracle_;
  std::vector<Word> vregs_;
  alu::Flags nzcv_;
  std::uint32_t pc_ = 0;
  bool halted_ = false;
  bool pc_overridden_ = false;
  ExecStats stats_;
};

}  // namespace cryptovm

#endif  // CRYPTOVM_EMULATOR_HPP_
