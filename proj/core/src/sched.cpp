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

#include "cryptovm/sched.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <vector>

#include <json.hpp>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

// Earliest start/finish per node with unbounded workers. Fence epochs are
// full barriers: a node starts no earlier than the latest finish of any
// node in an earlier epoch. Node ids are creation-ordered and epochs never
// decrease with id, so one forward pass suffices.
std::vector<double> asap_finish(const GateDag& dag) {
  std::vector<double> finish(dag.size(), 0.0);
  double epoch_start = 0.0;
  double epoch_max = 0.0;
  std::uint32_t epoch = 0;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const DagNode& node = dag.node_at(i);
    if (node.epoch != epoch) {
      epoch = node.epoch;
      epoch_start = epoch_max;
    }
    double start = epoch_start;
    for (int d = 0; d < node.dep_count; ++d) {
      const DagNode& dep = dag.node_by_id(node.dep[d]);
      if (dep.epoch == node.epoch) {
        start = std::max(start, finish[node.dep[d] - 1]);
      }
    }
    finish[i] = start + node.cost_ms;
    epoch_max = std::max(epoch_max, finish[i]);
  }
  return finish;
}

std::uint32_t peak_bootstrapped_width(const GateDag& dag,
                                      const std::vector<double>& finish) {
  // Sweep over half-open execution intervals of bootstrapped gates.
  struct Event {
    double time;
    int delta;
  };
  std::vector<Event> events;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const DagNode& node = dag.node_at(i);
    if (GateDag::node_bootstrap_count(node) == 0 || node.cost_ms <= 0.0) {
      continue;
    }
    events.push_back({finish[i] - node.cost_ms, +1});
    events.push_back({finish[i], -1});
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.delta < b.delta;  // close intervals before opening new ones
  });
  int width = 0;
  int peak = 0;
  for (const Event& e : events) {
    width += e.delta;
    peak = std::max(peak, width);
  }
  return static_cast<std::uint32_t>(peak);
}

double list_schedule(const GateDag& dag,
                     const std::vector<std::vector<std::uint32_t>>& users,
                     const std::vector<std::uint32_t>& epoch_begin,
                     std::uint32_t worker_count) {
  const std::size_t n = dag.size();
  std::vector<std::uint32_t> indeg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const DagNode& node = dag.node_at(i);
    for (int d = 0; d < node.dep_count; ++d) {
      if (dag.node_by_id(node.dep[d]).epoch == node.epoch) ++indeg[i];
    }
  }

  double t = 0.0;
  using MinId =
      std::priority_queue<std::uint32_t, std::vector<std::uint32_t>,
                          std::greater<std::uint32_t>>;
  struct Running {
    double finish;
    std::uint32_t index;
    bool operator>(const Running& other) const {
      return finish > other.finish ||
             (finish == other.finish && index > other.index);
    }
  };
  using MinFinish =
      std::priority_queue<Running, std::vector<Running>, std::greater<>>;

  for (std::size_t e = 0; e + 1 < epoch_begin.size(); ++e) {
    std::uint32_t begin = epoch_begin[e];
    std::uint32_t end = epoch_begin[e + 1];
    if (begin == end) continue;

    MinId ready;
    for (std::uint32_t i = begin; i < end; ++i) {
      if (indeg[i] == 0) ready.push(i);
    }
    MinFinish running;
    std::uint32_t free = worker_count;
    std::uint32_t done = 0;
    const std::uint32_t total = end - begin;

    auto complete = [&](std::uint32_t index) {
      ++done;
      for (std::uint32_t user : users[index]) {
        if (--indeg[user] == 0) ready.push(user);
      }
    };

    while (done < total) {
      while (!ready.empty() && free > 0) {
        std::uint32_t index = ready.top();
        ready.pop();
        double cost = dag.node_at(index).cost_ms;
        if (cost <= 0.0) {
          complete(index);  // occupies a worker for zero time
        } else {
          --free;
          running.push({t + cost, index});
        }
      }
      if (done == total) break;
      t = running.top().finish;
      while (!running.empty() && running.top().finish == t) {
        complete(running.top().index);
        running.pop();
        ++free;
      }
    }
  }
  return t;
}

}  // namespace

std::uint64_t depth_bootstrapped(const GateDag& dag) {
  std::vector<std::uint64_t> depth(dag.size(), 0);
  std::uint64_t epoch_start = 0;
  std::uint64_t epoch_max = 0;
  std::uint64_t overall = 0;
  std::uint32_t epoch = 0;
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const DagNode& node = dag.node_at(i);
    if (node.epoch != epoch) {
      epoch = node.epoch;
      epoch_start = epoch_max;
    }
    std::uint64_t start = epoch_start;
    for (int d = 0; d < node.dep_count; ++d) {
      const DagNode& dep = dag.node_by_id(node.dep[d]);
      if (dep.epoch == node.epoch) {
        start = std::max(start, depth[node.dep[d] - 1]);
      }
    }
    depth[i] = start + GateDag::node_bootstrap_count(node);
    epoch_max = std::max(epoch_max, depth[i]);
    overall = std::max(overall, depth[i]);
  }
  return overall;
}

ScheduleReport analyze(const GateDag& dag,
                       std::span<const std::uint32_t> workers) {
  if (dag.empty()) throw InputError("cannot analyze an empty gate DAG");
  for (std::uint32_t p : workers) {
    if (p == 0) throw InputError("worker counts must be positive");
  }

  ScheduleReport report;
  for (const DagNode& node : dag.nodes()) {
    if (!node.input) ++report.counts_by_kind[node.kind];
    if (GateDag::node_bootstrap_count(node) > 0) ++report.bootstrapped_count;
  }

  std::vector<double> finish = asap_finish(dag);
  report.critical_path_ms = *std::max_element(finish.begin(), finish.end());
  report.critical_path_levels = depth_bootstrapped(dag);
  report.peak_width = peak_bootstrapped_width(dag, finish);

  // Epochs occupy contiguous id ranges; epoch_begin has one extra slot for
  // the end sentinel.
  std::vector<std::uint32_t> epoch_begin(dag.epoch_count() + 1, 0);
  {
    std::uint32_t epoch = 0;
    for (std::size_t i = 0; i < dag.size(); ++i) {
      while (epoch < dag.node_at(i).epoch) epoch_begin[++epoch] = i;
    }
    while (epoch < dag.epoch_count()) {
      epoch_begin[++epoch] = static_cast<std::uint32_t>(dag.size());
    }
  }
  std::vector<std::vector<std::uint32_t>> users(dag.size());
  for (std::size_t i = 0; i < dag.size(); ++i) {
    const DagNode& node = dag.node_at(i);
    for (int d = 0; d < node.dep_count; ++d) {
      if (dag.node_by_id(node.dep[d]).epoch == node.epoch) {
        users[node.dep[d] - 1].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
  for (std::uint32_t p : workers) {
    if (!report.makespan_ms.contains(p)) {
      report.makespan_ms[p] = list_schedule(dag, users, epoch_begin, p);
    }
  }
  return report;
}

std::string report_to_json(const ScheduleReport& report) {
  nlohmann::json doc;
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [kind, count] : report.counts_by_kind) {
    counts[std::string(gate_name(kind))] = count;
  }
  doc["counts_by_kind"] = std::move(counts);
  doc["bootstrapped_count"] = report.bootstrapped_count;
  doc["critical_path_ms"] = report.critical_path_ms;
  doc["critical_path_levels"] = report.critical_path_levels;
  nlohmann::json makespans = nlohmann::json::object();
  for (const auto& [p, ms] : report.makespan_ms) {
    makespans[std::to_string(p)] = ms;
  }
  doc["makespan_ms"] = std::move(makespans);
  doc["peak_width"] = report.peak_width;
  return doc.dump(2);
}

}  // namespace cryptovm
