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

#include "cryptovm/alu.hpp"

#include <bit>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cryptovm/errors.hpp"

namespace cryptovm {
namespace alu {

namespace {

void check_same_width(const Word& a, const Word& b, const char* op) {
  if (a.width() == 0 || b.width() == 0) {
    throw InputError(std::string(op) + ": words must be non-empty");
  }
  if (a.width() != b.width()) {
    throw InputError(std::string(op) + ": width mismatch (" +
                     std::to_string(a.width()) + " vs " +
                     std::to_string(b.width()) + ")");
  }
}

unsigned log2_width(const Word& w, const char* op) {
  if (!std::has_single_bit(w.width())) {
    throw InputError(std::string(op) + ": width must be a power of two, got " +
                     std::to_string(w.width()));
  }
  return static_cast<unsigned>(std::countr_zero(w.width()));
}

// The three adder stages, and every level of the carry scan, run as
// fork-join phases of the evaluation loop: a phase starts only after the
// previous one has drained. The recorded DAG carries those sync points as
// fences so the latency model reflects the staged execution.
AddResult add_impl(Backend& bk, const Word& a, const Word& b,
                   std::optional<BitHandle> carry_in) {
  check_same_width(a, b, "add");
  const unsigned n = a.width();
  RegionScope region(bk, "adder");

  std::vector<GPPair> prefix;
  prefix.reserve(n);
  {
    RegionScope stage(bk, "gp");
    for (unsigned i = 0; i < n; ++i) {
      prefix.push_back(gp(bk, a.bit(i), b.bit(i)));
    }
  }

  if (carry_in) {
    // Fold the carry into bit 0's generate signal ahead of the scan.
    bk.fence();
    RegionScope stage(bk, "cin");
    prefix[0].g =
        or_gate(bk, prefix[0].g, and_gate(bk, prefix[0].p, *carry_in));
  }

  std::vector<BitHandle> propagate;
  propagate.reserve(n);
  for (const GPPair& pair : prefix) propagate.push_back(pair.p);

  unsigned level = 1;
  for (unsigned offset = 1; offset < n; offset <<= 1, ++level) {
    bk.fence();
    RegionScope stage(bk, "carry/level" + std::to_string(level));
    std::vector<GPPair> next = prefix;
    for (unsigned i = offset; i < n; ++i) {
      next[i] = odot(bk, prefix[i], prefix[i - offset]);
    }
    prefix = std::move(next);
  }

  bk.fence();
  std::vector<BitHandle> sum(n);
  {
    RegionScope stage(bk, "sum");
    BitHandle c0 = carry_in ? *carry_in : bk.constant(false);
    sum[0] = xor_gate(bk, propagate[0], c0);
    for (unsigned i = 1; i < n; ++i) {
      sum[i] = xor_gate(bk, propagate[i], prefix[i - 1].g);
    }
  }
  return {Word(std::move(sum)), prefix[n - 1].g};
}

}  // namespace

GPPair gp(Backend& bk, BitHandle a, BitHandle b) {
  return {and_gate(bk, a, b), xor_gate(bk, a, b)};
}

GPPair odot(Backend& bk, const GPPair& hi, const GPPair& lo) {
  BitHandle through = and_gate(bk, hi.p, lo.g);
  BitHandle g_out = or_gate(bk, hi.g, through);
  BitHandle p_out = and_gate(bk, hi.p, lo.p);
  return {g_out, p_out};
}

AddResult add(Backend& bk, const Word& a, const Word& b) {
  return add_impl(bk, a, b, std::nullopt);
}

AddResult add(Backend& bk, const Word& a, const Word& b, BitHandle carry_in) {
  return add_impl(bk, a, b, carry_in);
}

AddResult sub(Backend& bk, const Word& a, const Word& b) {
  check_same_width(a, b, "sub");
  RegionScope region(bk, "sub");
  Word complement;
  {
    RegionScope stage(bk, "not");
    complement = not_word(bk, b);
  }
  return add(bk, a, complement, bk.constant(true));
}

AddResult add_sub_select(Backend& bk, const Word& a, const Word& b,
                         BitHandle subtract) {
  check_same_width(a, b, "add_sub_select");
  RegionScope region(bk, "addsub");
  std::vector<BitHandle> selected;
  selected.reserve(b.width());
  {
    RegionScope stage(bk, "select");
    for (unsigned i = 0; i < b.width(); ++i) {
      selected.push_back(xor_gate(bk, b.bit(i), subtract));
    }
  }
  return add(bk, a, Word(std::move(selected)), subtract);
}

Word shift_imm(Backend& bk, const Word& w, ShiftKind kind, unsigned amount) {
  const unsigned n = w.width();
  if (amount > n) {
    throw InputError("shift_imm: amount " + std::to_string(amount) +
                     " out of range for width " + std::to_string(n));
  }
  RegionScope region(bk, "shift_imm");
  std::vector<BitHandle> out(n);
  for (unsigned i = 0; i < n; ++i) {
    switch (kind) {
      case ShiftKind::LogicalLeft:
        out[i] = i < amount ? bk.constant(false)
                            : copy_gate(bk, w.bit(i - amount));
        break;
      case ShiftKind::LogicalRight:
        out[i] = i + amount < n ? copy_gate(bk, w.bit(i + amount))
                                : bk.constant(false);
        break;
      case ShiftKind::ArithmeticRight:
        out[i] = i + amount < n ? copy_gate(bk, w.bit(i + amount))
                                : copy_gate(bk, w.msb());
        break;
    }
  }
  return Word(std::move(out));
}

Word shift_reg(Backend& bk, const Word& w, ShiftKind kind,
               const Word& amount) {
  check_same_width(w, amount, "shift_reg");
  const unsigned n = w.width();
  const unsigned stages = log2_width(w, "shift_reg");
  RegionScope region(bk, "barrel");

  BitHandle sign = w.msb();
  std::vector<BitHandle> current = w.bits();
  for (unsigned k = 1; k <= stages; ++k) {
    RegionScope stage(bk, "stage" + std::to_string(k));
    const unsigned offset = 1u << (k - 1);
    BitHandle fill = kind == ShiftKind::ArithmeticRight ? sign
                                                        : bk.constant(false);
    BitHandle sel = amount.bit(k - 1);
    std::vector<BitHandle> next(n);
    for (unsigned i = 0; i < n; ++i) {
      BitHandle shifted;
      if (kind == ShiftKind::LogicalLeft) {
        shifted = i >= offset ? current[i - offset] : fill;
      } else {
        shifted = i + offset < n ? current[i + offset] : fill;
      }
      next[i] = mux_bit(bk, sel, shifted, current[i]);
    }
    current = std::move(next);
  }
  return Word(std::move(current));
}

Word mul_unsigned(Backend& bk, const Word& a, const Word& b) {
  check_same_width(a, b, "mul_unsigned");
  const unsigned n = a.width();
  RegionScope region(bk, "umul");

  std::vector<BitHandle> acc(n);
  {
    RegionScope stage(bk, "init");
    for (unsigned i = 0; i < n; ++i) acc[i] = bk.constant(false);
  }
  std::vector<BitHandle> low = b.bits();

  for (unsigned iter = 0; iter < n; ++iter) {
    RegionScope it(bk, "iter" + std::to_string(iter));
    std::vector<BitHandle> row(n);
    {
      RegionScope stage(bk, "row");
      for (unsigned i = 0; i < n; ++i) {
        row[i] = and_gate(bk, a.bit(i), low[0]);
      }
    }
    AddResult partial = add(bk, Word(acc), Word(std::move(row)));
    {
      // One-cycle right shift of the [carry, acc, low] register chain.
      RegionScope stage(bk, "shift");
      std::vector<BitHandle> next_low(n);
      std::vector<BitHandle> next_acc(n);
      for (unsigned i = 0; i + 1 < n; ++i) {
        next_low[i] = copy_gate(bk, low[i + 1]);
        next_acc[i] = copy_gate(bk, partial.sum.bit(i + 1));
      }
      next_low[n - 1] = copy_gate(bk, partial.sum.bit(0));
      next_acc[n - 1] = copy_gate(bk, partial.carry_out);
      low = std::move(next_low);
      acc = std::move(next_acc);
    }
    bk.fence();
  }

  std::vector<BitHandle> product;
  product.reserve(2 * n);
  product.insert(product.end(), low.begin(), low.end());
  product.insert(product.end(), acc.begin(), acc.end());
  return Word(std::move(product));
}

Word mul_signed(Backend& bk, const Word& a, const Word& b) {
  check_same_width(a, b, "mul_signed");
  const unsigned n = a.width();
  if (n < 2) throw InputError("mul_signed: width must be at least 2");
  RegionScope region(bk, "smul");

  std::vector<BitHandle> acc(n);
  {
    RegionScope stage(bk, "init");
    for (unsigned i = 0; i < n; ++i) acc[i] = bk.constant(false);
  }
  std::vector<BitHandle> low = b.bits();

  for (unsigned iter = 0; iter < n; ++iter) {
    RegionScope it(bk, "iter" + std::to_string(iter));
    std::vector<BitHandle> row(n);
    {
      // Sign-position partial products are complemented: in the last row
      // every bit but the MSB, in the other rows only the MSB.
      RegionScope stage(bk, "row");
      const bool last = iter == n - 1;
      for (unsigned i = 0; i < n; ++i) {
        const bool invert = last ? i != n - 1 : i == n - 1;
        row[i] = invert ? nand_gate(bk, a.bit(i), low[0])
                        : and_gate(bk, a.bit(i), low[0]);
      }
    }
    AddResult partial = add(bk, Word(acc), Word(std::move(row)));
    {
      RegionScope stage(bk, "shift");
      std::vector<BitHandle> next_low(n);
      std::vector<BitHandle> next_acc(n);
      for (unsigned i = 0; i + 1 < n; ++i) {
        next_low[i] = copy_gate(bk, low[i + 1]);
        next_acc[i] = copy_gate(bk, partial.sum.bit(i + 1));
      }
      next_low[n - 1] = copy_gate(bk, partial.sum.bit(0));
      next_acc[n - 1] = copy_gate(bk, partial.carry_out);
      low = std::move(next_low);
      acc = std::move(next_acc);
    }
    bk.fence();
  }

  {
    // Constant offset into the upper half completes the two's-complement
    // correction.
    RegionScope stage(bk, "correction");
    Word offset = Word::constant(
        bk, std::uint64_t{1} | (std::uint64_t{1} << (n - 1)), n);
    acc = add(bk, Word(std::move(acc)), offset).sum.bits();
  }
  bk.fence();

  std::vector<BitHandle> product;
  product.reserve(2 * n);
  product.insert(product.end(), low.begin(), low.end());
  product.insert(product.end(), acc.begin(), acc.end());
  return Word(std::move(product));
}

Word div_unsigned(Backend& bk, const Word& dividend, const Word& divisor,
                  DivAccumulator mode) {
  check_same_width(dividend, divisor, "div_unsigned");
  const unsigned n = dividend.width();
  // The shifted partial remainder spans (-2D, 2D], which for divisors up
  // to 2^N - 1 needs two bits of headroom over the operand width.
  const unsigned aw = mode == DivAccumulator::Widened ? n + 2 : n;
  RegionScope region(bk, "udiv");

  std::vector<BitHandle> acc(aw);
  std::vector<BitHandle> divisor_ext = divisor.bits();
  {
    RegionScope stage(bk, "init");
    for (unsigned i = 0; i < aw; ++i) acc[i] = bk.constant(false);
    for (unsigned i = n; i < aw; ++i) {
      divisor_ext.push_back(bk.constant(false));
    }
  }
  std::vector<BitHandle> quotient = dividend.bits();

  for (unsigned iter = 0; iter < n; ++iter) {
    RegionScope it(bk, "iter" + std::to_string(iter));
    std::vector<BitHandle> next_acc(aw);
    std::vector<BitHandle> next_q(n);
    {
      // [acc, quotient] << 1; quotient bit 0 is assigned after the
      // add/sub decides the new remainder sign.
      RegionScope stage(bk, "shift");
      next_acc[0] = copy_gate(bk, quotient[n - 1]);
      for (unsigned i = 1; i < aw; ++i) {
        next_acc[i] = copy_gate(bk, acc[i - 1]);
      }
      for (unsigned i = 1; i < n; ++i) {
        next_q[i] = copy_gate(bk, quotient[i - 1]);
      }
    }
    BitHandle subtract = not_gate(bk, next_acc[aw - 1]);
    acc = add_sub_select(bk, Word(std::move(next_acc)), Word(divisor_ext),
                         subtract)
              .sum.bits();
    next_q[0] = not_gate(bk, acc[aw - 1]);
    quotient = std::move(next_q);
    bk.fence();
  }
  return Word(std::move(quotient));
}

Word bitwise(Backend& bk, BitwiseKind kind, const Word& a, const Word& b) {
  check_same_width(a, b, "bitwise");
  GateKind gate = GateKind::And;
  switch (kind) {
    case BitwiseKind::And:
      gate = GateKind::And;
      break;
    case BitwiseKind::Or:
      gate = GateKind::Or;
      break;
    case BitwiseKind::Xor:
      gate = GateKind::Xor;
      break;
    case BitwiseKind::OrNot:
      gate = GateKind::OrYN;
      break;
  }
  RegionScope region(bk, "bitwise");
  std::vector<BitHandle> out(a.width());
  for (unsigned i = 0; i < a.width(); ++i) {
    out[i] = bk.binary_gate(gate, a.bit(i), b.bit(i));
  }
  return Word(std::move(out));
}

Word not_word(Backend& bk, const Word& a) {
  std::vector<BitHandle> out(a.width());
  for (unsigned i = 0; i < a.width(); ++i) {
    out[i] = not_gate(bk, a.bit(i));
  }
  return Word(std::move(out));
}

Word bfc(Backend& bk, const Word& w, unsigned lsb, unsigned width) {
  const unsigned n = w.width();
  if (width == 0 || lsb + width > n) {
    throw InputError("bfc: field [" + std::to_string(lsb) + ", " +
                     std::to_string(lsb + width) + ") out of range");
  }
  RegionScope region(bk, "bfc");
  std::vector<BitHandle> out(n);
  for (unsigned i = 0; i < n; ++i) {
    out[i] = (i >= lsb && i < lsb + width) ? bk.constant(false)
                                           : copy_gate(bk, w.bit(i));
  }
  return Word(std::move(out));
}

Word bfi(Backend& bk, const Word& dst, const Word& src, unsigned lsb,
         unsigned width) {
  check_same_width(dst, src, "bfi");
  const unsigned n = dst.width();
  if (width == 0 || lsb + width > n) {
    throw InputError("bfi: field [" + std::to_string(lsb) + ", " +
                     std::to_string(lsb + width) + ") out of range");
  }
  RegionScope region(bk, "bfi");
  std::vector<BitHandle> out(n);
  for (unsigned i = 0; i < n; ++i) {
    out[i] = (i >= lsb && i < lsb + width) ? copy_gate(bk, src.bit(i - lsb))
                                           : copy_gate(bk, dst.bit(i));
  }
  return Word(std::move(out));
}

Word rbit(Backend& bk, const Word& w) {
  const unsigned n = w.width();
  RegionScope region(bk, "rbit");
  std::vector<BitHandle> out(n);
  for (unsigned i = 0; i < n; ++i) {
    out[i] = copy_gate(bk, w.bit(n - 1 - i));
  }
  return Word(std::move(out));
}

Word rev(Backend& bk, const Word& w) {
  const unsigned n = w.width();
  if (n % 8 != 0) {
    throw InputError("rev: width must be a multiple of 8, got " +
                     std::to_string(n));
  }
  const unsigned bytes = n / 8;
  RegionScope region(bk, "rev");
  std::vector<BitHandle> out(n);
  for (unsigned i = 0; i < n; ++i) {
    const unsigned byte = i / 8;
    const unsigned src = (bytes - 1 - byte) * 8 + i % 8;
    out[i] = copy_gate(bk, w.bit(src));
  }
  return Word(std::move(out));
}

BitHandle or_reduce(Backend& bk, const Word& w) {
  if (w.width() == 0) throw InputError("or_reduce: empty word");
  std::vector<BitHandle> layer = w.bits();
  while (layer.size() > 1) {
    std::vector<BitHandle> next;
    next.reserve((layer.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
      next.push_back(or_gate(bk, layer[i], layer[i + 1]));
    }
    if (layer.size() % 2 == 1) next.push_back(layer.back());
    layer = std::move(next);
  }
  return layer[0];
}

Flags flags(Backend& bk, const Word& result, BitHandle carry_out,
            BitHandle a_msb, BitHandle b_msb) {
  RegionScope region(bk, "flags");
  Flags out;
  out.n = copy_gate(bk, result.msb());
  out.c = copy_gate(bk, carry_out);
  {
    RegionScope stage(bk, "z");
    out.z = not_gate(bk, or_reduce(bk, result));
  }
  {
    RegionScope stage(bk, "v");
    BitHandle s = result.msb();
    BitHandle both_neg = and_gate(bk, a_msb, b_msb);
    BitHandle both_pos =
        and_gate(bk, not_gate(bk, a_msb), not_gate(bk, b_msb));
    BitHandle pos_overflow = and_gate(bk, both_pos, s);
    BitHandle neg_overflow = and_gate(bk, both_neg, not_gate(bk, s));
    out.v = or_gate(bk, pos_overflow, neg_overflow);
  }
  return out;
}

}  // namespace alu
}  // namespace cryptovm
