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

#ifndef CRYPTOVM_KEYSERVICE_HPP_
#define CRYPTOVM_KEYSERVICE_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cryptovm/emulator.hpp"
#include "cryptovm/gates.hpp"
#include "cryptovm/isa.hpp"

namespace cryptovm {

// One branch-resolution request as carried on the wire: the condition in
// cleartext and the four flag ciphertexts as an opaque payload.
// target/fallthrough are instruction indices.
struct BranchQuery {
  CondCode cond = CondCode::Al;
  std::vector<std::uint8_t> nzcv_payload;
  std::uint32_t target = 0;
  std::uint32_t fallthrough = 0;
};

struct BranchReply {
  bool taken = false;
  std::optional<std::uint32_t> next_pc;  // instruction index, user mode
};

// Serialized flag ciphertexts in N, Z, C, V order.
std::vector<std::uint8_t> serialize_flags(Backend& backend,
                                          const alu::Flags& flags);

// Decrypts the payload with the key material and evaluates the condition.
// With user_controlled set, the reply carries the next instruction index
// instead of the taken bit.
BranchReply resolve_branch(const BranchQuery& query, Backend& key,
                           bool user_controlled = false);

// In-process oracle: decrypts the flags directly through the backend that
// holds the key material.
class LocalBranchOracle final : public BranchOracle {
 public:
  explicit LocalBranchOracle(Backend& key) : key_(key) {}

  BranchDecision resolve(CondCode cond, const alu::Flags& flags,
                         std::uint32_t target,
                         std::uint32_t fallthrough) override;

 private:
  Backend& key_;
};

// Newline-delimited JSON over a TCP stream socket, one request per line:
//   {"type":"branch","cond":"NE","nzcv":"<base64>", ...}
// answered by
//   {"type":"branch_resp","taken":true}
// or, in user-controlled mode, {"type":"branch_resp","next_pc":N}.
// Malformed lines get {"type":"error","msg":...} and the connection stays
// open. Queries are handled sequentially per connection; multiple
// connections are accepted. The transport is plaintext and must be
// wrapped in a secured channel for deployment.
class BranchServer {
 public:
  // Binds 127.0.0.1:port (port 0 picks an ephemeral one) and serves until
  // stop(). The key backend must outlive the server.
  BranchServer(Backend& key, std::uint16_t port, bool user_controlled = false);
  ~BranchServer();

  BranchServer(const BranchServer&) = delete;
  BranchServer& operator=(const BranchServer&) = delete;

  std::uint16_t port() const { return port_; }
  void stop();

 private:
  void accept_loop();
  void serve_connection(int fd);

  Backend& key_;
  bool user_controlled_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::vector<std::thread> connections_;
  std::vector<int> client_fds_;
};

// Oracle that forwards every query to a remote key service.
class RemoteBranchOracle final : public BranchOracle {
 public:
  // Connects immediately; throws ProtocolError when the endpoint is
  // unreachable or the link drops mid-session.
  RemoteBranchOracle(Backend& backend, const std::string& host,
                     std::uint16_t port);
  ~RemoteBranchOracle();

  RemoteBranchOracle(const RemoteBranchOracle&) = delete;
  RemoteBranchOracle& operator=(const RemoteBranchOracle&) = delete;

  BranchDecision resolve(CondCode cond, const alu::Flags& flags,
                         std::uint32_t target,
                         std::uint32_t fallthrough) override;

 private:
  Backend& backend_;
  int fd_ = -1;
  std::string pending_;
};

// Encrypted data-memory image, bit-exact layout: magic "CEMU", one
// version byte (1), word width as 2-byte little endian, word count as
// 4-byte little endian, then each word packed LSB-first into ceil(N/8)
// little-endian bytes.
void encrypt_file(const std::vector<std::uint64_t>& values, unsigned width,
                  const std::string& path);
struct MemoryImage {
  unsigned width = 0;
  std::vector<std::uint64_t> values;
};
MemoryImage decrypt_file(const std::string& path);

// File-backed data memory: every load/store goes through the image file.
class FileMemory final : public DataMemory {
 public:
  FileMemory(Backend& backend, const std::string& path);

  Word load(std::size_t address) override;
  void store(std::size_t address, const Word& word) override;
  std::size_t size() const override { return count_; }
  unsigned word_size() const override { return width_; }

 private:
  std::streamoff offset_of(std::size_t address) const;

  Backend& backend_;
  std::string path_;
  unsigned width_ = 0;
  std::size_t count_ = 0;
};

std::string base64_encode(const std::vector<std::uint8_t>& data);
std::vector<std::uint8_t> base64_decode(const std::string& text);

}  // namespace cryptovm

#endif  // CRYPTOVM_KEYSERVICE_HPP_
