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

#ifndef CRYPTOVM_DAG_HPP_
#define CRYPTOVM_DAG_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cryptovm/gates.hpp"

namespace cryptovm {

// One recorded event: a gate evaluation, or an encrypted input entering
// the session (`input == true`, zero cost, no dependencies).
struct DagNode {
  std::uint64_t id = 0;
  GateKind kind = GateKind::Constant;
  bool input = false;
  std::uint8_t dep_count = 0;
  std::array<std::uint64_t, 3> dep{};
  std::uint32_t region = 0;
  std::uint32_t epoch = 0;
  double cost_ms = 0.0;
};

// Append-only record of gate evaluations with dependencies, costs, region
// labels and fence epochs. Node ids are 1-based and assigned in creation
// order, so every dependency id is smaller than the id of its user. A
// fence increments the epoch; nodes of epoch e depend on all nodes of
// epochs < e in addition to their explicit dependencies.
class GateDag {
 public:
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  const DagNode& node_at(std::size_t index) const { return nodes_[index]; }
  const DagNode& node_by_id(std::uint64_t id) const { return nodes_[id - 1]; }
  std::span<const DagNode> nodes() const { return nodes_; }

  std::uint32_t epoch_count() const { return max_epoch_ + 1; }

  const std::string& region_name(std::uint32_t index) const {
    return regions_[index];
  }
  std::span<const std::string> regions() const { return regions_; }

  // 0 for encrypted inputs, otherwise the gate's bootstrap count.
  static int node_bootstrap_count(const DagNode& node) {
    return node.input ? 0 : bootstrap_count(node.kind);
  }

  std::uint64_t count_in_region(std::string_view region, GateKind kind) const;
  std::uint64_t bootstrapped_in_region(std::string_view region) const;

  // Used by backends while recording. Callers must serialize access.
  std::uint32_t intern_region(std::string_view name);
  std::uint64_t append(GateKind kind, bool input,
                       std::span<const std::uint64_t> deps,
                       std::uint32_t region, std::uint32_t epoch,
                       double cost_ms);
  void note_epoch(std::uint32_t epoch);

  void write_json(std::ostream& out) const;
  static GateDag read_json(std::istream& in);

 private:
  std::vector<DagNode> nodes_;
  std::vector<std::string> regions_{""};
  std::unordered_map<std::string, std::uint32_t> region_index_{{"", 0}};
  std::uint32_t max_epoch_ = 0;
};

}  // namespace cryptovm

#endif  // CRYPTOVM_DAG_HPP_
