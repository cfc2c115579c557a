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

#ifndef CRYPTOVM_SIM_BACKEND_HPP_
#define CRYPTOVM_SIM_BACKEND_HPP_

#include <atomic>
#include <cstdint>
#include <mutex>
#include <string>
#include <vector>

#include "cryptovm/dag.hpp"
#include "cryptovm/gates.hpp"

namespace cryptovm {

// Cleartext simulation backend: computes exact boolean semantics for every
// gate and records one DAG node per evaluation, priced by the cost table.
// Gate evaluation is safe from concurrent threads; decrypt/export calls are
// counted so tests can verify where key-owner operations happen.
class SimBackend final : public Backend {
 public:
  explicit SimBackend(CostTable costs = CostTable());

  BitHandle constant(bool value) override;
  BitHandle unary_gate(GateKind kind, BitHandle a) override;
  BitHandle binary_gate(GateKind kind, BitHandle a, BitHandle b) override;
  BitHandle mux_gate(BitHandle sel, BitHandle on_true,
                     BitHandle on_false) override;

  BitHandle encrypt_bit(bool value) override;
  bool decrypt_bit(BitHandle bit) override;
  std::vector<std::uint8_t> export_bit(BitHandle bit) override;
  BitHandle import_bit(const std::vector<std::uint8_t>& blob) override;

  void push_region(std::string_view name) override;
  void pop_region() override;
  void fence() override;

  // Not to be read while other threads are still evaluating gates.
  const GateDag& dag() const { return dag_; }
  const CostTable& costs() const { return costs_; }

  // Number of key-owner decryptions observed this session.
  std::uint64_t decrypt_count() const { return decrypts_.load(); }

 private:
  BitHandle record(GateKind kind, bool value, bool input,
                   std::span<const std::uint64_t> deps);

  mutable std::mutex mu_;
  GateDag dag_;
  CostTable costs_;
  std::vector<std::size_t> region_lengths_;
  std::string region_path_;
  std::uint32_t current_region_ = 0;
  std::uint32_t epoch_ = 0;
  std::atomic<std::uint64_t> decrypts_{0};
};

}  // namespace cryptovm

#endif  // CRYPTOVM_SIM_BACKEND_HPP_
