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

#include "cryptovm/gates.hpp"

#include <fstream>
#include <istream>
#include <sstream>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

struct KindInfo {
  GateKind kind;
  std::string_view name;
  int bootstraps;
  double default_ms;
};

// Default latencies are the published single-core TFHE gate benchmarks.
constexpr KindInfo kKinds[kGateKindCount] = {
    {GateKind::Constant, "CONSTANT", 0, 0.00433995},
    {GateKind::Not, "NOT", 0, 0.000679717},
    {GateKind::Copy, "COPY", 0, 0.000624117},
    {GateKind::Nand, "NAND", 1, 25.5738},
    {GateKind::And, "AND", 1, 25.6176},
    {GateKind::Or, "OR", 1, 25.618},
    {GateKind::Xor, "XOR", 1, 25.6526},
    {GateKind::Xnor, "XNOR", 1, 25.795},
    {GateKind::Nor, "NOR", 1, 25.6265},
    {GateKind::AndNY, "ANDNY", 1, 25.6982},
    {GateKind::AndYN, "ANDYN", 1, 25.684},
    {GateKind::OrNY, "ORNY", 1, 25.7787},
    {GateKind::OrYN, "ORYN", 1, 25.6957},
    {GateKind::Mux, "MUX", 2, 49.2645},
};

}  // namespace

int bootstrap_count(GateKind kind) {
  return kKinds[static_cast<int>(kind)].bootstraps;
}

bool is_unary(GateKind kind) {
  return kind == GateKind::Not || kind == GateKind::Copy;
}

bool is_bootstrapped_binary(GateKind kind) {
  return kind != GateKind::Mux && bootstrap_count(kind) == 1;
}

std::string_view gate_name(GateKind kind) {
  return kKinds[static_cast<int>(kind)].name;
}

std::optional<GateKind> gate_from_name(std::string_view name) {
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

CostTable::CostTable() {
  for (const KindInfo& info : kKinds) {
    ms_[static_cast<int>(info.kind)] = info.default_ms;
  }
}

CostTable CostTable::tfhe_defaults() { return CostTable(); }

CostTable CostTable::uniform(double g) {
  if (g < 0) throw InputError("uniform gate cost must be non-negative");
  CostTable table;
  for (const KindInfo& info : kKinds) {
    table.ms_[static_cast<int>(info.kind)] = info.bootstraps * g;
  }
  return table;
}

void CostTable::set(GateKind kind, double ms) {
  if (ms < 0) throw InputError("gate cost must be non-negative");
  ms_[static_cast<int>(kind)] = ms;
}

CostTable CostTable::parse(std::istream& in) {
  CostTable table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream fields(line);
    std::string key;
    if (!(fields >> key)) continue;  // blank line
    std::string eq;
    double ms = 0.0;
    if (!(fields >> eq >> ms) || eq != "=") {
      throw InputError("cost table line " + std::to_string(line_no) +
                       ": expected `KIND = <milliseconds>`");
    }
    std::string trailing;
    if (fields >> trailing) {
      throw InputError("cost table line " + std::to_string(line_no) +
                       ": trailing junk `" + trailing + "`");
    }
    auto kind = gate_from_name(key);
    if (!kind) {
      throw InputError("cost table line " + std::to_string(line_no) +
                       ": unknown gate kind `" + key + "`");
    }
    if (ms < 0) {
      throw InputError("cost table line " + std::to_string(line_no) +
                       ": negative latency");
    }
    table.set(*kind, ms);
  }
  return table;
}

CostTable CostTable::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open cost table file: " + path);
  return parse(in);
}

}  // namespace cryptovm
