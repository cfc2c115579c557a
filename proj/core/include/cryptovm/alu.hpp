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

#ifndef CRYPTOVM_ALU_HPP_
#define CRYPTOVM_ALU_HPP_

#include <cstdint>

#include "cryptovm/gates.hpp"
#include "cryptovm/word.hpp"

namespace cryptovm {
namespace alu {

// Per-bit carry-lookahead signals: g generates a carry, p propagates one.
struct GPPair {
  BitHandle g;
  BitHandle p;
};

struct AddResult {
  Word sum;
  BitHandle carry_out;
};

// ARM-style condition flags, each one encrypted bit.
struct Flags {
  BitHandle n;
  BitHandle z;
  BitHandle c;
  BitHandle v;
};

enum class ShiftKind {
  LogicalLeft,
  LogicalRight,
  ArithmeticRight,
};

enum class BitwiseKind {
  And,
  Or,
  Xor,
  OrNot,  // a OR NOT b
};

// Partial-remainder register width for the divider. Widened adds two bits
// of headroom to the accumulator, which keeps every quotient exact over
// the full divisor range; Exact keeps the operand width, reproducing the
// classic register layout (and its latency) at the price of overflow for
// large divisors.
enum class DivAccumulator {
  Widened,
  Exact,
};

GPPair gp(Backend& bk, BitHandle a, BitHandle b);

// (g, p) combiner for the carry scan:
//   g_out = hi.g OR (hi.p AND lo.g),  p_out = hi.p AND lo.p.
// The p gate does not depend on the g pair.
GPPair odot(Backend& bk, const GPPair& hi, const GPPair& lo);

// Parallel prefix adder: per-bit (g, p), a Kogge-Stone carry scan with
// log2(N) levels, then one XOR per sum bit. The carry-in overload folds
// the carry into bit 0's generate signal before the scan. Stages and scan
// levels are fork-join phases; the recorded DAG carries a fence per phase
// boundary.
AddResult add(Backend& bk, const Word& a, const Word& b);
AddResult add(Backend& bk, const Word& a, const Word& b, BitHandle carry_in);

// a + NOT(b) + 1. carry_out is 1 exactly when no borrow occurred (a >= b).
AddResult sub(Backend& bk, const Word& a, const Word& b);

// b is XORed with `subtract` per bit, then added with carry_in = subtract:
// computes a + b when subtract = 0 and a - b when subtract = 1.
AddResult add_sub_select(Backend& bk, const Word& a, const Word& b,
                         BitHandle subtract);

// Cleartext shift amount, 0 <= amount <= width. Pure data movement: COPY
// for surviving bits and CONSTANT zero (or a COPY of the original MSB for
// arithmetic right shifts) for vacated positions.
Word shift_imm(Backend& bk, const Word& w, ShiftKind kind, unsigned amount);

// Encrypted shift amount: a barrel shifter with log2(N) MUX stages, stage
// k selecting a shift by 2^(k-1) under amount bit k-1. Only the low
// log2(N) amount bits are wired, so the effective shift is amount mod N.
Word shift_reg(Backend& bk, const Word& w, ShiftKind kind,
               const Word& amount);

// Iterative carry-save multiplier; returns the full 2N-bit product.
Word mul_unsigned(Backend& bk, const Word& a, const Word& b);

// Two's-complement product over 2N bits: the carry-save flow with the
// sign-position partial products complemented (NAND rows) plus one
// constant correction add into the upper half.
Word mul_signed(Backend& bk, const Word& a, const Word& b);

// Non-restoring division; returns floor(dividend / divisor) for a nonzero
// divisor. A zero divisor yields the algorithm-defined bit pattern (the
// circuit cannot inspect encrypted operands, so nothing is signaled).
Word div_unsigned(Backend& bk, const Word& dividend, const Word& divisor,
                  DivAccumulator acc = DivAccumulator::Widened);

// One gate per bit, all N gates independent.
Word bitwise(Backend& bk, BitwiseKind kind, const Word& a, const Word& b);

// Per-bit NOT; no bootstrapped gates.
Word not_word(Backend& bk, const Word& a);

// Data movement: all COPY/CONSTANT only.
Word bfc(Backend& bk, const Word& w, unsigned lsb, unsigned width);
Word bfi(Backend& bk, const Word& dst, const Word& src, unsigned lsb,
         unsigned width);
Word rbit(Backend& bk, const Word& w);
Word rev(Backend& bk, const Word& w);  // width must be a multiple of 8

// Balanced binary OR tree over all bits.
BitHandle or_reduce(Backend& bk, const Word& w);

// NZCV from a result word, the adder's carry out and the operand sign
// bits. For subtraction, pass the complemented subtrahend's sign as
// b_msb. The two products of the V term are independent in the DAG.
Flags flags(Backend& bk, const Word& result, BitHandle carry_out,
            BitHandle a_msb, BitHandle b_msb);

}  // namespace alu
}  // namespace cryptovm

#endif  // CRYPTOVM_ALU_HPP_
