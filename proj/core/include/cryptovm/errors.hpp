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

#ifndef CRYPTOVM_ERRORS_HPP_
#define CRYPTOVM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cryptovm {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller violated an operation's precondition (bad width, bad range,
// bad gate kind, ...).
class InputError : public Error {
 public:
  using Error::Error;
};

// File reading/writing failed or a file has an invalid layout.
class IoError : public Error {
 public:
  using Error::Error;
};

// The branch-resolution wire protocol was violated or the peer vanished.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Assembly source could not be parsed; carries the 1-based source line.
class AssembleError : public Error {
 public:
  AssembleError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}

  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace cryptovm

#endif  // CRYPTOVM_ERRORS_HPP_
