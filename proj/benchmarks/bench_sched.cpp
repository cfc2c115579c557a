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

#include <benchmark/benchmark.h>

#include "cryptovm/alu.hpp"
#include "cryptovm/sched.hpp"
#include "cryptovm/sim_backend.hpp"

namespace {

using namespace cryptovm;

const GateDag& mul_dag_32() {
  static SimBackend* bk = [] {
    auto* backend = new SimBackend();
    Word a = Word::encrypt(*backend, 0xDEADBEEF, 32);
    Word b = Word::encrypt(*backend, 0x12345678, 32);
    alu::mul_unsigned(*backend, a, b);
    return backend;
  }();
  return bk->dag();
}

void BM_AnalyzeMul32(benchmark::State& state) {
  const std::uint32_t workers[] = {static_cast<std::uint32_t>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(analyze(mul_dag_32(), workers));
  }
  state.SetItemsProcessed(state.iterations() * mul_dag_32().size());
}
BENCHMARK(BM_AnalyzeMul32)->Arg(1)->Arg(8)->Arg(48);

void BM_DepthMul32(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(depth_bootstrapped(mul_dag_32()));
  }
}
BENCHMARK(BM_DepthMul32);

}  // namespace

BENCHMARK_MAIN();
