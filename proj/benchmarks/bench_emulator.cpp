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

#include <memory>

#include "cryptovm/emulator.hpp"
#include "cryptovm/keyservice.hpp"
#include "cryptovm/sim_backend.hpp"

namespace {

using namespace cryptovm;

void BM_CountdownLoop(benchmark::State& state) {
  Program program = assemble(
      ".word_size 16\n"
      "MOV    R0    R0    42\n"
      "Loop_label:\n"
      "    SUBS   R0    R0    1\n"
      "    B_NE   Loop_label\n");
  for (auto _ : state) {
    SimBackend bk;
    LocalBranchOracle oracle(bk);
    Machine m(bk, {.word_size = 16},
              std::make_unique<BufferMemory>(16, std::vector<Word>{}),
              oracle);
    benchmark::DoNotOptimize(m.run(program, 1000));
    state.counters["instructions"] = static_cast<double>(
        m.stats().instructions);
  }
  state.SetItemsProcessed(state.iterations() * 85);  // instructions per run
}
BENCHMARK(BM_CountdownLoop);

void BM_StraightLineAdds(benchmark::State& state) {
  Program program = assemble(
      ".word_size 32\n"
      "MOV R1 123456\n"
      "MOV R2 654321\n"
      "ADD R0 R1 R2\n"
      "ADD R0 R0 R2\n"
      "ADD R0 R0 R2\n"
      "ADD R0 R0 R2\n"
      "HALT\n");
  for (auto _ : state) {
    SimBackend bk;
    LocalBranchOracle oracle(bk);
    Machine m(bk, {.word_size = 32},
              std::make_unique<BufferMemory>(32, std::vector<Word>{}),
              oracle);
    benchmark::DoNotOptimize(m.run(program, 100));
  }
  state.SetItemsProcessed(state.iterations() * 7);
}
BENCHMARK(BM_StraightLineAdds);

}  // namespace
