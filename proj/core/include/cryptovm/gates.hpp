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

#ifndef CRYPTOVM_GATES_HPP_
#define CRYPTOVM_GATES_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cryptovm {

// The gate set of a TFHE-style boolean API. CONSTANT, NOT and COPY are
// evaluated without bootstrapping; MUX is bootstrapped twice; every other
// binary gate is bootstrapped once.
enum class GateKind : std::uint8_t {
  Constant,
  Not,
  Copy,
  Nand,
  And,
  Or,
  Xor,
  Xnor,
  Nor,
  AndNY,  // (NOT a) AND b
  AndYN,  // a AND (NOT b)
  OrNY,   // (NOT a) OR b
  OrYN,   // a OR (NOT b)
  Mux,
};

inline constexpr int kGateKindCount = 14;

// Number of bootstrap operations a gate performs: 0, 1 or 2.
int bootstrap_count(GateKind kind);

bool is_unary(GateKind kind);               // NOT, COPY
bool is_bootstrapped_binary(GateKind kind);  // the ten two-input gates

std::string_view gate_name(GateKind kind);
std::optional<GateKind> gate_from_name(std::string_view name);

// Per-gate latency model in milliseconds. Defaults are single-core TFHE
// API latencies; a uniform synthetic table is available for depth checks,
// and any table can be loaded from a config file of `KIND = ms` lines.
class CostTable {
 public:
  // Defaults to the TFHE benchmark latencies.
  CostTable();

  static CostTable tfhe_defaults();

  // Every bootstrapped binary gate costs `g`, MUX costs `2g`, and the
  // non-bootstrapped gates are free.
  static CostTable uniform(double g);

  double cost(GateKind kind) const { return ms_[static_cast<int>(kind)]; }
  void set(GateKind kind, double ms);

  // One `KIND = <milliseconds>` entry per line; `#` starts a comment.
  // Unknown keys are rejected. Keys not present keep their defaults.
  static CostTable parse(std::istream& in);
  static CostTable load_file(const std::string& path);

 private:
  std::array<double, kGateKindCount> ms_;
};

// Reference to one encrypted bit. The cleartext value carried by the
// simulation backend is private: circuit code can only route handles,
// never look inside them.
class BitHandle {
 public:
  BitHandle() = default;

  std::uint64_t node() const { return node_; }
  bool valid() const { return node_ != 0; }

 private:
  friend class SimBackend;

  std::uint64_t node_ = 0;
  bool clear_ = false;
};

// Evaluates gates over encrypted bits. Implementations must allow
// concurrent evaluation of gates with independent inputs; results depend
// only on the input bit values and the gate kind.
//
// encrypt_bit/decrypt_bit/export_bit/import_bit model the key-owner
// operations of the scheme; a backend for a real FHE library would consume
// genuine ciphertexts there.
class Backend {
 public:
  virtual ~Backend() = default;

  virtual BitHandle constant(bool value) = 0;
  virtual BitHandle unary_gate(GateKind kind, BitHandle a) = 0;
  virtual BitHandle binary_gate(GateKind kind, BitHandle a, BitHandle b) = 0;
  // sel ? on_true : on_false
  virtual BitHandle mux_gate(BitHandle sel, BitHandle on_true,
                             BitHandle on_false) = 0;

  virtual BitHandle encrypt_bit(bool value) = 0;
  virtual bool decrypt_bit(BitHandle bit) = 0;
  virtual std::vector<std::uint8_t> export_bit(BitHandle bit) = 0;
  virtual BitHandle import_bit(const std::vector<std::uint8_t>& blob) = 0;

  // Structural annotations for the recorded gate DAG. Regions tag the
  // gates evaluated while the region is open; a fence marks a sequential
  // barrier: gates recorded after it never start before every gate
  // recorded before it has finished.
  virtual void push_region(std::string_view name) = 0;
  virtual void pop_region() = 0;
  virtual void fence() = 0;
};

inline BitHandle not_gate(Backend& b, BitHandle a) {
  return b.unary_gate(GateKind::Not, a);
}
inline BitHandle copy_gate(Backend& b, BitHandle a) {
  return b.unary_gate(GateKind::Copy, a);
}
inline BitHandle and_gate(Backend& b, BitHandle x, BitHandle y) {
  return b.binary_gate(GateKind::And, x, y);
}
inline BitHandle or_gate(Backend& b, BitHandle x, BitHandle y) {
  return b.binary_gate(GateKind::Or, x, y);
}
inline BitHandle xor_gate(Backend& b, BitHandle x, BitHandle y) {
  return b.binary_gate(GateKind::Xor, x, y);
}
inline BitHandle nand_gate(Backend& b, BitHandle x, BitHandle y) {
  return b.binary_gate(GateKind::Nand, x, y);
}
inline BitHandle mux_bit(Backend& b, BitHandle sel, BitHandle on_true,
                         BitHandle on_false) {
  return b.mux_gate(sel, on_true, on_false);
}

// Opens a region label for the current scope; nested scopes join with '/'.
class RegionScope {
 public:
  RegionScope(Backend& backend, std::string_view name) : backend_(backend) {
    backend_.push_region(name);
  }
  ~RegionScope() { backend_.pop_region(); }

  RegionScope(const RegionScope&) = delete;
  RegionScope& operator=(const RegionScope&) = delete;

 private:
  Backend& backend_;
};

}  // namespace cryptovm

#endif  // CRYPTOVM_GATES_HPP_
