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

#include "cryptovm/word.hpp"

#include <string>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

void check_width(unsigned width) {
  if (width < 1 || width > 64) {
    throw InputError("word width must be in [1, 64], got " +
                     std::to_string(width));
  }
}

}  // namespace

void check_value_fits(std::uint64_t value, unsigned width) {
  check_width(width);
  if (width < 64 && value >> width != 0) {
    throw InputError("value " + std::to_string(value) +
                     " does not fit in " + std::to_string(width) + " bits");
  }
}

Word Word::encrypt(Backend& backend, std::uint64_t value, unsigned width) {
  check_value_fits(value, width);
  std::vector<BitHandle> bits;
  bits.reserve(width);
  for (unsigned i = 0; i < width; ++i) {
    bits.push_back(backend.encrypt_bit((value >> i) & 1));
  }
  return Word(std::move(bits));
}

Word Word::encrypt_bits(Backend& backend, const std::vector<bool>& values) {
  check_width(static_cast<unsigned>(values.size()));
  std::vector<BitHandle> bits;
  bits.reserve(values.size());
  for (bool v : values) bits.push_back(backend.encrypt_bit(v));
  return Word(std::move(bits));
}

Word Word::constant(Backend& backend, std::uint64_t value, unsigned width) {
  check_value_fits(value, width);
  std::vector<BitHandle> bits;
  bits.reserve(width);
  for (unsigned i = 0; i < width; ++i) {
    bits.push_back(backend.constant((value >> i) & 1));
  }
  return Word(std::move(bits));
}

std::uint64_t decrypt_word(Backend& backend, const Word& word) {
  if (word.width() > 64) throw InputError("word too wide to decrypt to u64");
  std::uint64_t value = 0;
  for (unsigned i = 0; i < word.width(); ++i) {
    if (backend.decrypt_bit(word.bit(i))) value |= std::uint64_t{1} << i;
  }
  return value;
}

std::vector<bool> decrypt_word_bits(Backend& backend, const Word& word) {
  std::vector<bool> values;
  values.reserve(word.width());
  for (unsigned i = 0; i < word.width(); ++i) {
    values.push_back(backend.decrypt_bit(word.bit(i)));
  }
  return values;
}

}  // namespace cryptovm
