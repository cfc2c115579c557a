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

#include "cryptovm/sim_backend.hpp"

#include <string>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

bool eval_binary(GateKind kind, bool a, bool b) {
  switch (kind) {
    case GateKind::Nand:
      return !(a && b);
    case GateKind::And:
      return a && b;
    case GateKind::Or:
      return a || b;
    case GateKind::Xor:
      return a != b;
    case GateKind::Xnor:
      return a == b;
    case GateKind::Nor:
      return !(a || b);
    case GateKind::AndNY:
      return !a && b;
    case GateKind::AndYN:
      return a && !b;
    case GateKind::OrNY:
      return !a || b;
    case GateKind::OrYN:
      return a || !b;
    default:
      throw InputError(std::string("not a bootstrapped binary gate: ") +
                       std::string(gate_name(kind)));
  }
}

void check_handle(BitHandle bit, const char* what) {
  if (!bit.valid()) {
    throw InputError(std::string("invalid bit handle passed to ") + what);
  }
}

}  // namespace

SimBackend::SimBackend(CostTable costs) : costs_(costs) {}

BitHandle SimBackend::record(GateKind kind, bool value, bool input,
                             std::span<const std::uint64_t> deps) {
  std::lock_guard<std::mutex> lock(mu_);
  double cost = input ? 0.0 : costs_.cost(kind);
  std::uint64_t id =
      dag_.append(kind, input, deps, current_region_, epoch_, cost);
  BitHandle handle;
  handle.node_ = id;
  handle.clear_ = value;
  return handle;
}

BitHandle SimBackend::constant(bool value) {
  return record(GateKind::Constant, value, false, {});
}

BitHandle SimBackend::unary_gate(GateKind kind, BitHandle a) {
  if (!is_unary(kind)) {
    throw InputError(std::string("not a unary gate: ") +
                     std::string(gate_name(kind)));
  }
  check_handle(a, "unary_gate");
  bool value = kind == GateKind::Not ? !a.clear_ : a.clear_;
  const std::uint64_t deps[] = {a.node_};
  return record(kind, value, false, deps);
}

BitHandle SimBackend::binary_gate(GateKind kind, BitHandle a, BitHandle b) {
  check_handle(a, "binary_gate");
  check_handle(b, "binary_gate");
  bool value = eval_binary(kind, a.clear_, b.clear_);
  const std::uint64_t deps[] = {a.node_, b.node_};
  return record(kind, value, false, deps);
}

BitHandle SimBackend::mux_gate(BitHandle sel, BitHandle on_true,
                               BitHandle on_false) {
  check_handle(sel, "mux_gate");
  check_handle(on_true, "mux_gate");
  check_handle(on_false, "mux_gate");
  bool value = sel.clear_ ? on_true.clear_ : on_false.clear_;
  const std::uint64_t deps[] = {sel.node_, on_true.node_, on_false.node_};
  return record(GateKind::Mux, value, false, deps);
}

BitHandle SimBackend::encrypt_bit(bool value) {
  return record(GateKind::Constant, value, true, {});
}

bool SimBackend::decrypt_bit(BitHandle bit) {
  check_handle(bit, "decrypt_bit");
  decrypts_.fetch_add(1, std::memory_order_relaxed);
  return bit.clear_;
}

std::vector<std::uint8_t> SimBackend::export_bit(BitHandle bit) {
  check_handle(bit, "export_bit");
  return {bit.clear_ ? std::uint8_t{1} : std::uint8_t{0}};
}

BitHandle SimBackend::import_bit(const std::vector<std::uint8_t>& blob) {
  if (blob.size() != 1 || blob[0] > 1) {
    throw InputError("simulation bit ciphertexts are one byte, 0 or 1");
  }
  return record(GateKind::Constant, blob[0] == 1, true, {});
}

void SimBackend::push_region(std::string_view name) {
  std::lock_guard<std::mutex> lock(mu_);
  region_lengths_.push_back(region_path_.size());
  if (!region_path_.empty()) region_path_ += '/';
  region_path_ += name;
  current_region_ = dag_.intern_region(region_path_);
}

void SimBackend::pop_region() {
  std::lock_guard<std::mutex> lock(mu_);
  if (region_lengths_.empty()) {
    throw InputError("pop_region without a matching push_region");
  }
  region_path_.resize(region_lengths_.back());
  region_lengths_.pop_back();
  current_region_ = dag_.intern_region(region_path_);
}

void SimBackend::fence() {
  std::lock_guard<std::mutex> lock(mu_);
  if (!dag_.empty()) {
    ++epoch_;
    dag_.note_epoch(epoch_);
  }
}

}  // namespace cryptovm
