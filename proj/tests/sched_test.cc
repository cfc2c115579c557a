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

#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "cryptovm/alu.hpp"
#include "cryptovm/errors.hpp"
#include "cryptovm/sched.hpp"
#include "cryptovm/sim_backend.hpp"
#include "gtest/gtest.h"

namespace cryptovm {
namespace {

constexpr double kAndCost = 25.6176;

TEST(Sched, SingleNodeSingleWorker) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  and_gate(bk, a, a);
  const std::uint32_t workers[] = {1};
  ScheduleReport report = analyze(bk.dag(), workers);
  EXPECT_DOUBLE_EQ(report.makespan_ms.at(1), kAndCost);
  EXPECT_EQ(report.bootstrapped_count, 1u);
  EXPECT_EQ(report.counts_by_kind.at(GateKind::And), 1u);
  // Encrypted inputs are not gate evaluations.
  EXPECT_FALSE(report.counts_by_kind.contains(GateKind::Constant));
}

TEST(Sched, TwoIndependentNodes) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  BitHandle b = bk.encrypt_bit(false);
  and_gate(bk, a, b);
  and_gate(bk, b, a);
  const std::uint32_t workers[] = {1, 2};
  ScheduleReport report = analyze(bk.dag(), workers);
  EXPECT_DOUBLE_EQ(report.makespan_ms.at(1), 2 * kAndCost);
  EXPECT_DOUBLE_EQ(report.makespan_ms.at(2), kAndCost);
  EXPECT_EQ(report.peak_width, 2u);
}

TEST(Sched, EmptyDagRejected) {
  GateDag dag;
  const std::uint32_t workers[] = {1};
  EXPECT_THROW(analyze(dag, workers), InputError);
}

TEST(Sched, ZeroWorkerCountRejected) {
  SimBackend bk;
  bk.constant(true);
  const std::uint32_t workers[] = {0};
  EXPECT_THROW(analyze(bk.dag(), workers), InputError);
}

TEST(Sched, DepthOfSingleNotIsZero) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  not_gate(bk, a);
  EXPECT_EQ(depth_bootstrapped(bk.dag()), 0u);
}

TEST(Sched, DepthOfSingleMuxIsTwo) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  mux_bit(bk, a, a, a);
  EXPECT_EQ(depth_bootstrapped(bk.dag()), 2u);
}

TEST(Sched, DepthChainsAccumulate) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  BitHandle x = and_gate(bk, a, a);   // level 1
  BitHandle y = not_gate(bk, x);      // free
  BitHandle z = mux_bit(bk, y, x, a); // +2
  or_gate(bk, z, a);                  // +1
  EXPECT_EQ(depth_bootstrapped(bk.dag()), 4u);
}

TEST(Sched, MakespanSingleWorkerIsTotalCost) {
  SimBackend bk;
  Word a = Word::encrypt(bk, 0xBEEF, 16);
  Word b = Word::encrypt(bk, 0x1234, 16);
  alu::add(bk, a, b);
  double total = 0.0;
  for (const DagNode& node : bk.dag().nodes()) total += node.cost_ms;
  const std::uint32_t workers[] = {1};
  ScheduleReport report = analyze(bk.dag(), workers);
  EXPECT_NEAR(report.makespan_ms.at(1), total, 1e-9);
}

TEST(Sched, MakespanNonIncreasingAndConvergesToCriticalPath) {
  SimBackend bk;
  Word a = Word::encrypt(bk, 40502, 16);
  Word b = Word::encrypt(bk, 17, 16);
  alu::mul_unsigned(bk, a, b);
  const std::uint32_t workers[] = {1, 2, 3, 4, 8, 16, 32, 64, 512};
  ScheduleReport report = analyze(bk.dag(), workers);
  double previous = report.makespan_ms.at(1);
  for (std::uint32_t p : workers) {
    EXPECT_LE(report.makespan_ms.at(p), previous + 1e-9) << "P=" << p;
    previous = report.makespan_ms.at(p);
  }
  EXPECT_NEAR(report.makespan_ms.at(512), report.critical_path_ms, 1e-9);
  EXPECT_GE(report.makespan_ms.at(32), report.critical_path_ms - 1e-9);
}

TEST(Sched, DeterministicAcrossRuns) {
  auto build_and_measure = [] {
    SimBackend bk;
    Word a = Word::encrypt(bk, 123, 16);
    Word b = Word::encrypt(bk, 77, 16);
    alu::sub(bk, a, b);
    const std::uint32_t workers[] = {3, 7};
    return analyze(bk.dag(), workers);
  };
  ScheduleReport first = build_and_measure();
  ScheduleReport second = build_and_measure();
  EXPECT_EQ(first.makespan_ms, second.makespan_ms);
  EXPECT_EQ(first.peak_width, second.peak_width);
}

TEST(Sched, FenceSerializesEpochs) {
  SimBackend bk(CostTable::uniform(1.0));
  BitHandle a = bk.encrypt_bit(true);
  BitHandle b = bk.encrypt_bit(false);
  // Two independent gates, separated by a fence: with unlimited workers
  // they still run one after the other.
  and_gate(bk, a, b);
  bk.fence();
  or_gate(bk, a, b);
  const std::uint32_t workers[] = {16};
  ScheduleReport report = analyze(bk.dag(), workers);
  EXPECT_DOUBLE_EQ(report.makespan_ms.at(16), 2.0);
  EXPECT_DOUBLE_EQ(report.critical_path_ms, 2.0);
  EXPECT_EQ(depth_bootstrapped(bk.dag()), 2u);
  EXPECT_EQ(report.peak_width, 1u);
}

TEST(Sched, UniformCostMakespanMatchesDepthForCircuits) {
  constexpr double kG = 1.0;
  auto check = [](const GateDag& dag) {
    const std::uint32_t workers[] = {1};
    ScheduleReport report = analyze(dag, workers);
    EXPECT_DOUBLE_EQ(report.critical_path_ms,
                     static_cast<double>(depth_bootstrapped(dag)) * kG);
  };
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 5001, 16);
    alu::add(bk, a, b);
    check(bk.dag());
  }
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 5001, 16);
    alu::mul_unsigned(bk, a, b);
    check(bk.dag());
  }
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 77, 16);
    alu::div_unsigned(bk, a, b);
    check(bk.dag());
  }
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 9, 16);
    alu::shift_reg(bk, a, alu::ShiftKind::LogicalLeft, b);
    check(bk.dag());
  }
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 5001, 16);
    alu::mul_signed(bk, a, b);
    check(bk.dag());
  }
  {
    SimBackend bk(CostTable::uniform(kG));
    Word a = Word::encrypt(bk, 312, 16);
    Word b = Word::encrypt(bk, 5001, 16);
    alu::AddResult r = alu::sub(bk, a, b);
    alu::flags(bk, r.sum, r.carry_out, a.msb(), not_gate(bk, b.msb()));
    check(bk.dag());
  }
}

TEST(Sched, AdderSaturatesAtPeakWidth) {
  SimBackend bk;
  Word a = Word::encrypt(bk, 0xF0F0, 16);
  Word b = Word::encrypt(bk, 0x0F0F, 16);
  alu::add(bk, a, b);
  const std::uint32_t probe[] = {1};
  ScheduleReport probe_report = analyze(bk.dag(), probe);
  ASSERT_LE(probe_report.peak_width, 32u);
  ASSERT_GE(probe_report.peak_width, 1u);

  const std::uint32_t workers[] = {probe_report.peak_width,
                                   probe_report.peak_width + 17, 4096};
  ScheduleReport report = analyze(bk.dag(), workers);
  EXPECT_NEAR(report.makespan_ms.at(probe_report.peak_width),
              report.critical_path_ms, 1e-9);
  EXPECT_NEAR(report.makespan_ms.at(4096), report.critical_path_ms, 1e-9);
}

TEST(Sched, ReportJsonSchema) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  and_gate(bk, a, a);
  mux_bit(bk, a, a, a);
  const std::uint32_t workers[] = {1, 48};
  ScheduleReport report = analyze(bk.dag(), workers);
  nlohmann::json doc = nlohmann::json::parse(report_to_json(report));
  EXPECT_TRUE(doc.contains("counts_by_kind"));
  EXPECT_TRUE(doc.contains("bootstrapped_count"));
  EXPECT_TRUE(doc.contains("critical_path_ms"));
  EXPECT_TRUE(doc.contains("critical_path_levels"));
  EXPECT_TRUE(doc.contains("makespan_ms"));
  EXPECT_TRUE(doc.contains("peak_width"));
  EXPECT_EQ(doc["counts_by_kind"]["AND"], 1);
  EXPECT_EQ(doc["counts_by_kind"]["MUX"], 1);
  EXPECT_EQ(doc["bootstrapped_count"], 2);
  EXPECT_EQ(doc["makespan_ms"].size(), 2u);
  EXPECT_TRUE(doc["makespan_ms"].contains("1"));
  EXPECT_TRUE(doc["makespan_ms"].contains("48"));
}

TEST(Sched, DagTraceRoundtrip) {
  SimBackend bk;
  Word a = Word::encrypt(bk, 0xAB, 8);
  Word b = Word::encrypt(bk, 0x3C, 8);
  alu::mul_unsigned(bk, a, b);
  std::stringstream stream;
  bk.dag().write_json(stream);
  GateDag restored = GateDag::read_json(stream);
  ASSERT_EQ(restored.size(), bk.dag().size());
  EXPECT_EQ(restored.epoch_count(), bk.dag().epoch_count());
  const std::uint32_t workers[] = {1, 4};
  ScheduleReport original = analyze(bk.dag(), workers);
  ScheduleReport reloaded = analyze(restored, workers);
  EXPECT_EQ(original.makespan_ms, reloaded.makespan_ms);
  EXPECT_EQ(original.bootstrapped_count, reloaded.bootstrapped_count);
  EXPECT_EQ(original.critical_path_levels, reloaded.critical_path_levels);
}

TEST(Sched, TraceRejectsCorruptInput) {
  {
    std::istringstream in("not json");
    EXPECT_THROW(GateDag::read_json(in), IoError);
  }
  {
    std::istringstream in(R"({"version":2,"regions":[""],"nodes":[]})");
    EXPECT_THROW(GateDag::read_json(in), IoError);
  }
  {
    // Dependency id does not precede the node.
    std::istringstream in(
        R"({"version":1,"regions":[""],"nodes":[[1,"AND",0,[1],0,0,1.0]]})");
    EXPECT_THROW(GateDag::read_json(in), IoError);
  }
}

}  // namespace
}  // namespace cryptovm
