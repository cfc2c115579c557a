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

#include "cryptovm/dag.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

#include "cryptovm/errors.hpp"

namespace cryptovm {

std::uint64_t GateDag::count_in_region(std::string_view region,
                                       GateKind kind) const {
  std::uint64_t count = 0;
  for (const DagNode& node : nodes_) {
    if (!node.input && node.kind == kind &&
        regions_[node.region] == region) {
      ++count;
    }
  }
  return count;
}

std::uint64_t GateDag::bootstrapped_in_region(std::string_view region) const {
  std::uint64_t count = 0;
  for (const DagNode& node : nodes_) {
    if (node_bootstrap_count(node) > 0 && regions_[node.region] == region) {
      ++count;
    }
  }
  return count;
}

std::uint32_t GateDag::intern_region(std::string_view name) {
  auto found = region_index_.find(std::string(name));
  if (found != region_index_.end()) return found->second;
  std::uint32_t index = static_cast<std::uint32_t>(regions_.size());
  regions_.emplace_back(name);
  region_index_.emplace(regions_.back(), index);
  return index;
}

std::uint64_t GateDag::append(GateKind kind, bool input,
                              std::span<const std::uint64_t> deps,
                              std::uint32_t region, std::uint32_t epoch,
                              double cost_ms) {
  DagNode node;
  node.id = nodes_.size() + 1;
  node.kind = kind;
  node.input = input;
  node.dep_count = static_cast<std::uint8_t>(deps.size());
  for (std::size_t i = 0; i < deps.size(); ++i) node.dep[i] = deps[i];
  node.region = region;
  node.epoch = epoch;
  node.cost_ms = cost_ms;
  note_epoch(epoch);
  nodes_.push_back(node);
  return node.id;
}

void GateDag::note_epoch(std::uint32_t epoch) {
  if (epoch > max_epoch_) max_epoch_ = epoch;
}

void GateDag::write_json(std::ostream& out) const {
  nlohmann::json doc;
  doc["version"] = 1;
  doc["epochs"] = epoch_count();
  doc["regions"] = regions_;
  nlohmann::json nodes = nlohmann::json::array();
  for (const DagNode& node : nodes_) {
    nlohmann::json deps = nlohmann::json::array();
    for (int i = 0; i < node.dep_count; ++i) deps.push_back(node.dep[i]);
    nodes.push_back({node.id, std::string(gate_name(node.kind)),
                     node.input ? 1 : 0, std::move(deps), node.region,
                     node.epoch, node.cost_ms});
  }
  doc["nodes"] = std::move(nodes);
  out << doc << "\n";
}

GateDag GateDag::read_json(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("trace is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("version", 0) != 1) {
    throw IoError("trace has an unsupported version");
  }
  GateDag dag;
  dag.regions_.clear();
  dag.region_index_.clear();
  for (const auto& region : doc.at("regions")) {
    std::uint32_t index = static_cast<std::uint32_t>(dag.regions_.size());
    dag.regions_.push_back(region.get<std::string>());
    dag.region_index_.emplace(dag.regions_.back(), index);
  }
  if (dag.regions_.empty()) {
    dag.regions_.emplace_back("");
    dag.region_index_.emplace("", 0);
  }
  std::uint64_t expected_id = 1;
  for (const auto& entry : doc.at("nodes")) {
    if (!entry.is_array() || entry.size() != 7) {
      throw IoError("trace node has an unexpected shape");
    }
    DagNode node;
    node.id = entry[0].get<std::uint64_t>();
    auto kind = gate_from_name(entry[1].get<std::string>());
    if (!kind) throw IoError("trace names an unknown gate kind");
    node.kind = *kind;
    node.input = entry[2].get<int>() != 0;
    const auto& deps = entry[3];
    if (deps.size() > node.dep.size()) {
      throw IoError("trace node has too many dependencies");
    }
    node.dep_count = static_cast<std::uint8_t>(deps.size());
    for (std::size_t i = 0; i < deps.size(); ++i) {
      node.dep[i] = deps[i].get<std::uint64_t>();
      if (node.dep[i] == 0 || node.dep[i] >= node.id) {
        throw IoError("trace dependency does not precede its node");
      }
    }
    node.region = entry[4].get<std::uint32_t>();
    if (node.region >= dag.regions_.size()) {
      throw IoError("trace node references a missing region");
    }
    node.epoch = entry[5].get<std::uint32_t>();
    node.cost_ms = entry[6].get<double>();
    if (node.id != expected_id++) {
      throw IoError("trace node ids are not consecutive");
    }
    dag.note_epoch(node.epoch);
    dag.nodes_.push_back(node);
  }
  if (doc.contains("epochs")) {
    std::uint32_t epochs = doc.at("epochs").get<std::uint32_t>();
    if (epochs == 0 || epochs <= dag.max_epoch_) {
      throw IoError("trace epoch count is inconsistent with its nodes");
    }
    dag.max_epoch_ = epochs - 1;
  }
  return dag;
}

}  // namespace cryptovm
