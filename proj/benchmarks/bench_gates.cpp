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

#include "cryptovm/sim_backend.hpp"
#include "cryptovm/word.hpp"

namespace {

using namespace cryptovm;

void BM_BinaryGateEval(benchmark::State& state) {
  SimBackend bk;
  BitHandle a = bk.encrypt_bit(true);
  BitHandle b = bk.encrypt_bit(false);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xor_gate(bk, a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BinaryGateEval);

void BM_MuxGateEval(benchmark::State& state) {
  SimBackend bk;
  BitHandle s = bk.encrypt_bit(true);
  BitHandle a = bk.encrypt_bit(false);
  BitHandle b = bk.encrypt_bit(true);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mux_bit(bk, s, a, b));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_MuxGateEval);

void BM_EncryptDecryptWord(benchmark::State& state) {
  SimBackend bk;
  const unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    Word w = Word::encrypt(bk, 0x5A5A & ((1u << width) - 1), width);
    benchmark::DoNotOptimize(decrypt_word(bk, w));
  }
}
BENCHMARK(BM_EncryptDecryptWord)->Arg(16)->Arg(32);

}  // namespace
