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

#ifndef CRYPTOVM_SCHED_HPP_
#define CRYPTOVM_SCHED_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "cryptovm/dag.hpp"

namespace cryptovm {

// Analysis of a recorded gate DAG: gate counts, bootstrapped critical
// path, and modeled completion times under fixed worker counts.
//
// makespan_ms[1] equals the sum of all node costs, makespan_ms is
// non-increasing in the worker count, and the critical path equals the
// makespan with unbounded workers.
struct ScheduleReport {
  std::map<GateKind, std::uint64_t> counts_by_kind;  // gates only, no inputs
  std::uint64_t bootstrapped_count = 0;
  double critical_path_ms = 0.0;
  std::uint64_t critical_path_levels = 0;
  std::map<std::uint32_t, double> makespan_ms;
  std::uint32_t peak_width = 0;  // max concurrent bootstrapped gates
};

// Deterministic list scheduling: at each event time, ready nodes (all
// dependencies finished, all earlier fence epochs drained) are assigned to
// free workers in ascending node id order.
ScheduleReport analyze(const GateDag& dag,
                       std::span<const std::uint32_t> workers);

// Longest dependency chain counting single-bootstrapped gates as one
// level, MUX as two and non-bootstrapped gates as zero. Fence epochs are
// sequential, so chains accumulate across them.
std::uint64_t depth_bootstrapped(const GateDag& dag);

std::string report_to_json(const ScheduleReport& report);

}  // namespace cryptovm

#endif  // CRYPTOVM_SCHED_HPP_
