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
#include "cryptovm/sim_backend.hpp"

namespace {

using namespace cryptovm;

void BM_AdderConstruction(benchmark::State& state) {
  const unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    SimBackend bk;
    Word a = Word::encrypt(bk, 0x1234 & ((1u << width) - 1), width);
    Word b = Word::encrypt(bk, 0x0BEE & ((1u << width) - 1), width);
    benchmark::DoNotOptimize(alu::add(bk, a, b));
  }
}
BENCHMARK(BM_AdderConstruction)->Arg(16)->Arg(32);

void BM_MulUnsignedConstruction(benchmark::State& state) {
  const unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    SimBackend bk;
    Word a = Word::encrypt(bk, 40502 & ((1u << width) - 1), width);
    Word b = Word::encrypt(bk, 17, width);
    benchmark::DoNotOptimize(alu::mul_unsigned(bk, a, b));
  }
}
BENCHMARK(BM_MulUnsignedConstruction)->Arg(16)->Arg(32);

void BM_DivUnsignedConstruction(benchmark::State& state) {
  const unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    SimBackend bk;
    Word a = Word::encrypt(bk, 40502 & ((1u << width) - 1), width);
    Word b = Word::encrypt(bk, 17, width);
    benchmark::DoNotOptimize(alu::div_unsigned(bk, a, b));
  }
}
BENCHMARK(BM_DivUnsignedConstruction)->Arg(16)->Arg(32);

void BM_BarrelShifterConstruction(benchmark::State& state) {
  const unsigned width = static_cast<unsigned>(state.range(0));
  for (auto _ : state) {
    SimBackend bk;
    Word a = Word::encrypt(bk, 0x00FF, width);
    Word amt = Word::encrypt(bk, 7, width);
    benchmark::DoNotOptimize(
        alu::shift_reg(bk, a, alu::ShiftKind::LogicalLeft, amt));
  }
}
BENCHMARK(BM_BarrelShifterConstruction)->Arg(16)->Arg(32);

}  // namespace
