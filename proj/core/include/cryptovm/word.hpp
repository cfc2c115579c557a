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

#ifndef CRYPTOVM_WORD_HPP_
#define CRYPTOVM_WORD_HPP_

#include <cstdint>
#include <vector>

#include "cryptovm/gates.hpp"

namespace cryptovm {

// Fixed-width vector of encrypted bits, index 0 = LSB. All bits must come
// from the same backend session. Widths up to 64 are supported so values
// round-trip through std::uint64_t.
class Word {
 public:
  Word() = default;
  explicit Word(std::vector<BitHandle> bits) : bits_(std::move(bits)) {}

  // Key-owner encryption of `width` fresh input bits.
  static Word encrypt(Backend& backend, std::uint64_t value, unsigned width);
  static Word encrypt_bits(Backend& backend, const std::vector<bool>& bits);

  // Server-side plaintext word built from CONSTANT gates (used for
  // immediates the evaluating party knows).
  static Word constant(Backend& backend, std::uint64_t value, unsigned width);

  unsigned width() const { return static_cast<unsigned>(bits_.size()); }
  const BitHandle& bit(unsigned i) const { return bits_[i]; }
  BitHandle& bit(unsigned i) { return bits_[i]; }
  const BitHandle& msb() const { return bits_.back(); }
  const std::vector<BitHandle>& bits() const { return bits_; }

 private:
  std::vector<BitHandle> bits_;
};

std::uint64_t decrypt_word(Backend& backend, const Word& word);
std::vector<bool> decrypt_word_bits(Backend& backend, const Word& word);

// Width must be a power of two in [4, 64] for machine-visible words; that
// rule is enforced where machines and memory images are configured, not
// here, so circuits may build intermediate words of any width >= 1.
void check_value_fits(std::uint64_t value, unsigned width);

}  // namespace cryptovm

#endif  // CRYPTOVM_WORD_HPP_
