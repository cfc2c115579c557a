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

#include "cryptovm/keyservice.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <mutex>

#include <json.hpp>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

constexpr char kMagic[4] = {'C', 'E', 'M', 'U'};
constexpr std::uint8_t kVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 1 + 2 + 4;

constexpr std::string_view kBase64Alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::size_t bytes_per_word(unsigned width) { return (width + 7) / 8; }

void append_reply_error(std::string& out, const std::string& message) {
  nlohmann::json doc;
  doc["type"] = "error";
  doc["msg"] = message;
  out += doc.dump();
  out += '\n';
}

bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t sent = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (sent <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(sent));
  }
  return true;
}

}  // namespace

std::string base64_encode(const std::vector<std::uint8_t>& data) {
  std::string out;
  out.reserve((data.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < data.size(); i += 3) {
    std::uint32_t chunk = std::uint32_t{data[i]} << 16;
    if (i + 1 < data.size()) chunk |= std::uint32_t{data[i + 1]} << 8;
    if (i + 2 < data.size()) chunk |= data[i + 2];
    out.push_back(kBase64Alphabet[(chunk >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 12) & 0x3F]);
    out.push_back(i + 1 < data.size() ? kBase64Alphabet[(chunk >> 6) & 0x3F]
                                      : '=');
    out.push_back(i + 2 < data.size() ? kBase64Alphabet[chunk & 0x3F] : '=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw InputError("base64 length not a multiple of 4");
  auto value_of = [](char c) -> int {
    auto pos = kBase64Alphabet.find(c);
    return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
  };
  std::vector<std::uint8_t> out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    int values[4] = {0, 0, 0, 0};
    int padding = 0;
    for (int j = 0; j < 4; ++j) {
      char c = text[i + j];
      if (c == '=' && i + 4 == text.size() && j >= 2) {
        ++padding;
        continue;
      }
      values[j] = value_of(c);
      if (values[j] < 0 || padding > 0) {
        throw InputError("invalid base64 input");
      }
    }
    std::uint32_t chunk = (std::uint32_t{static_cast<std::uint32_t>(values[0])}
                           << 18) |
                          (static_cast<std::uint32_t>(values[1]) << 12) |
                          (static_cast<std::uint32_t>(values[2]) << 6) |
                          static_cast<std::uint32_t>(values[3]);
    out.push_back(static_cast<std::uint8_t>((chunk >> 16) & 0xFF));
    if (padding < 2) out.push_back(static_cast<std::uint8_t>((chunk >> 8) & 0xFF));
    if (padding < 1) out.push_back(static_cast<std::uint8_t>(chunk & 0xFF));
  }
  return out;
}

std::vector<std::uint8_t> serialize_flags(Backend& backend,
                                          const alu::Flags& flags) {
  std::vector<std::uint8_t> payload;
  for (BitHandle bit : {flags.n, flags.z, flags.c, flags.v}) {
    std::vector<std::uint8_t> blob = backend.export_bit(bit);
    payload.insert(payload.end(), blob.begin(), blob.end());
  }
  return payload;
}

BranchReply resolve_branch(const BranchQuery& query, Backend& key,
                           bool user_controlled) {
  if (query.nzcv_payload.size() != 4) {
    throw ProtocolError("cannot decrypt NZCV payload: expected 4 flag "
                        "ciphertexts, got " +
                        std::to_string(query.nzcv_payload.size()) + " bytes");
  }
  bool flags[4];
  for (int i = 0; i < 4; ++i) {
    BitHandle bit = key.import_bit({query.nzcv_payload[i]});
    flags[i] = key.decrypt_bit(bit);
  }
  bool taken =
      cond_predicate(query.cond, flags[0], flags[1], flags[2], flags[3]);
  BranchReply reply;
  if (user_controlled) {
    reply.next_pc = taken ? query.target : query.fallthrough;
  } else {
    reply.taken = taken;
  }
  return reply;
}

BranchDecision LocalBranchOracle::resolve(CondCode cond,
                                          const alu::Flags& flags,
                                          std::uint32_t /*target*/,
                                          std::uint32_t /*fallthrough*/) {
  bool n = key_.decrypt_bit(flags.n);
  bool z = key_.decrypt_bit(flags.z);
  bool c = key_.decrypt_bit(flags.c);
  bool v = key_.decrypt_bit(flags.v);
  return {cond_predicate(cond, n, z, c, v), std::nullopt};
}

// ---------------------------------------------------------------------------
// Wire protocol server.

BranchServer::BranchServer(Backend& key, std::uint16_t port,
                           bool user_controlled)
    : key_(key), user_controlled_(user_controlled) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ProtocolError("cannot create server socket");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = htons(port);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) !=
      0) {
    ::close(listen_fd_);
    throw ProtocolError("cannot bind server port " + std::to_string(port));
  }
  socklen_t len = sizeof(addr);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  if (::listen(listen_fd_, 8) != 0) {
    ::close(listen_fd_);
    throw ProtocolError("cannot listen on server socket");
  }
  acceptor_ = std::thread([this] { accept_loop(); });
}

BranchServer::~BranchServer() { stop(); }

void BranchServer::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) {
    if (acceptor_.joinable()) acceptor_.join();
    return;
  }
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  if (acceptor_.joinable()) acceptor_.join();
  std::vector<std::thread> workers;
  {
    std::lock_guard<std::mutex> lock(mu_);
    for (int fd : client_fds_) ::shutdown(fd, SHUT_RDWR);
    workers.swap(connections_);
  }
  for (std::thread& t : workers) {
    if (t.joinable()) t.join();
  }
}

void BranchServer::accept_loop() {
  while (!stopping_.load()) {
    int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    std::lock_guard<std::mutex> lock(mu_);
    client_fds_.push_back(fd);
    connections_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void BranchServer::serve_connection(int fd) {
  std::string buffer;
  char chunk[4096];
  while (true) {
    std::size_t newline;
    while ((newline = buffer.find('\n')) == std::string::npos) {
      ssize_t got = ::recv(fd, chunk, sizeof(chunk), 0);
      if (got <= 0) {
        ::close(fd);
        return;
      }
      buffer.append(chunk, static_cast<std::size_t>(got));
    }
    std::string line = buffer.substr(0, newline);
    buffer.erase(0, newline + 1);

    std::string reply;
    try {
      nlohmann::json request = nlohmann::json::parse(line);
      if (request.value("type", "") != "branch") {
        throw ProtocolError("unknown request type");
      }
      BranchQuery query;
      auto cond = cond_from_name(request.at("cond").get<std::string>());
      if (!cond) throw ProtocolError("unknown branch condition");
      query.cond = *cond;
      query.nzcv_payload =
          base64_decode(request.at("nzcv").get<std::string>());
      query.target = request.value("target", 0u);
      query.fallthrough = request.value("fallthrough", 0u);
      BranchReply answer = resolve_branch(query, key_, user_controlled_);
      nlohmann::json doc;
      doc["type"] = "branch_resp";
      if (answer.next_pc) {
        doc["next_pc"] = *answer.next_pc;
      } else {
        doc["taken"] = answer.taken;
      }
      reply = doc.dump();
      reply += '\n';
    } catch (const std::exception& e) {
      reply.clear();
      append_reply_error(reply, e.what());
    }
    if (!send_all(fd, reply)) {
      ::close(fd);
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Wire protocol client.

RemoteBranchOracle::RemoteBranchOracle(Backend& backend,
                                       const std::string& host,
                                       std::uint16_t port)
    : backend_(backend) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* results = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints,
                    &results) != 0 ||
      results == nullptr) {
    throw ProtocolError("cannot resolve branch oracle host " + host);
  }
  fd_ = ::socket(results->ai_family, results->ai_socktype,
                 results->ai_protocol);
  if (fd_ < 0 ||
      ::connect(fd_, results->ai_addr, results->ai_addrlen) != 0) {
    ::freeaddrinfo(results);
    if (fd_ >= 0) ::close(fd_);
    throw ProtocolError("cannot connect to branch oracle at " + host + ":" +
                        std::to_string(port));
  }
  ::freeaddrinfo(results);
}

RemoteBranchOracle::~RemoteBranchOracle() {
  if (fd_ >= 0) ::close(fd_);
}

BranchDecision RemoteBranchOracle::resolve(CondCode cond,
                                           const alu::Flags& flags,
                                           std::uint32_t target,
                                           std::uint32_t fallthrough) {
  nlohmann::json request;
  request["type"] = "branch";
  request["cond"] = std::string(cond_name(cond));
  request["nzcv"] = base64_encode(serialize_flags(backend_, flags));
  request["target"] = target;
  request["fallthrough"] = fallthrough;
  std::string line = request.dump();
  line += '\n';
  if (!send_all(fd_, line)) {
    throw ProtocolError("branch oracle connection lost while sending");
  }

  std::size_t newline;
  char chunk[4096];
  while ((newline = pending_.find('\n')) == std::string::npos) {
    ssize_t got = ::recv(fd_, chunk, sizeof(chunk), 0);
    if (got <= 0) {
      throw ProtocolError("branch oracle connection lost while waiting "
                          "for a reply");
    }
    pending_.append(chunk, static_cast<std::size_t>(got));
  }
  std::string reply_line = pending_.substr(0, newline);
  pending_.erase(0, newline + 1);

  nlohmann::json reply;
  try {
    reply = nlohmann::json::parse(reply_line);
  } catch (const nlohmann::json::exception&) {
    throw ProtocolError("branch oracle sent malformed JSON");
  }
  std::string type = reply.value("type", "");
  if (type == "error") {
    throw ProtocolError("branch oracle error: " +
                        reply.value("msg", std::string("unknown")));
  }
  if (type != "branch_resp") {
    throw ProtocolError("unexpected branch oracle reply type");
  }
  BranchDecision decision;
  if (reply.contains("next_pc")) {
    decision.next_index = reply.at("next_pc").get<std::uint32_t>();
    decision.taken = false;
  } else {
    decision.taken = reply.at("taken").get<bool>();
  }
  return decision;
}

// ---------------------------------------------------------------------------
// Data memory files.

void encrypt_file(const std::vector<std::uint64_t>& values, unsigned width,
                  const std::string& path) {
  if (width < 1 || width > 64) {
    throw InputError("memory word width must be in [1, 64]");
  }
  for (std::uint64_t value : values) check_value_fits(value, width);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write memory file: " + path);
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  out.put(static_cast<char>(width & 0xFF));
  out.put(static_cast<char>((width >> 8) & 0xFF));
  std::uint32_t count = static_cast<std::uint32_t>(values.size());
  for (int i = 0; i < 4; ++i) {
    out.put(static_cast<char>((count >> (8 * i)) & 0xFF));
  }
  const std::size_t stride = bytes_per_word(width);
  for (std::uint64_t value : values) {
    for (std::size_t i = 0; i < stride; ++i) {
      out.put(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
  }
  if (!out) throw IoError("failed writing memory file: " + path);
}

MemoryImage decrypt_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open memory file: " + path);
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (data.size() < kHeaderSize) {
    throw IoError("memory file truncated: " + path);
  }
  if (std::memcmp(data.data(), kMagic, 4) != 0) {
    throw IoError("bad magic in memory file: " + path);
  }
  if (static_cast<std::uint8_t>(data[4]) != kVersion) {
    throw IoError("unsupported memory file version in " + path);
  }
  MemoryImage image;
  image.width = static_cast<std::uint8_t>(data[5]) |
                (static_cast<std::uint8_t>(data[6]) << 8);
  if (image.width < 1 || image.width > 64) {
    throw IoError("memory file has an invalid word width");
  }
  std::uint32_t count = 0;
  for (int i = 0; i < 4; ++i) {
    count |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(data[7 + i]))
             << (8 * i);
  }
  const std::size_t stride = bytes_per_word(image.width);
  if (data.size() != kHeaderSize + static_cast<std::size_t>(count) * stride) {
    throw IoError("memory file truncated: " + path);
  }
  const std::uint64_t mask = image.width == 64
                                 ? ~std::uint64_t{0}
                                 : (std::uint64_t{1} << image.width) - 1;
  image.values.reserve(count);
  for (std::uint32_t w = 0; w < count; ++w) {
    std::uint64_t value = 0;
    const char* base = data.data() + kHeaderSize + w * stride;
    for (std::size_t i = 0; i < stride; ++i) {
      value |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(base[i]))
               << (8 * i);
    }
    image.values.push_back(value & mask);
  }
  return image;
}

FileMemory::FileMemory(Backend& backend, const std::string& path)
    : backend_(backend), path_(path) {
  MemoryImage image = decrypt_file(path);  // validates the header
  width_ = image.width;
  count_ = image.values.size();
}

std::streamoff FileMemory::offset_of(std::size_t address) const {
  return static_cast<std::streamoff>(kHeaderSize +
                                     address * bytes_per_word(width_));
}

Word FileMemory::load(std::size_t address) {
  if (address >= count_) {
    throw InputError("load address " + std::to_string(address) +
                     " out of range (memory has " + std::to_string(count_) +
                     " words)");
  }
  std::ifstream in(path_, std::ios::binary);
  if (!in) throw IoError("cannot open memory file: " + path_);
  in.seekg(offset_of(address));
  const std::size_t stride = bytes_per_word(width_);
  std::vector<char> raw(stride);
  in.read(raw.data(), static_cast<std::streamsize>(stride));
  if (!in) throw IoError("failed reading memory file: " + path_);
  std::vector<BitHandle> bits(width_);
  for (unsigned i = 0; i < width_; ++i) {
    std::uint8_t byte = static_cast<std::uint8_t>(raw[i / 8]);
    bits[i] = backend_.import_bit({(byte >> (i % 8)) & 1 ? std::uint8_t{1}
                                                         : std::uint8_t{0}});
  }
  return Word(std::move(bits));
}

void FileMemory::store(std::size_t address, const Word& word) {
  if (address >= count_) {
    throw InputError("store address " + std::to_string(address) +
                     " out of range (memory has " + std::to_string(count_) +
                     " words)");
  }
  if (word.width() != width_) {
    throw InputError("stored word width does not match the memory");
  }
  const std::size_t stride = bytes_per_word(width_);
  std::vector<char> raw(stride, 0);
  for (unsigned i = 0; i < width_; ++i) {
    std::vector<std::uint8_t> blob = backend_.export_bit(word.bit(i));
    if (blob.size() == 1 && blob[0]) {
      raw[i / 8] = static_cast<char>(raw[i / 8] | (1 << (i % 8)));
    }
  }
  std::fstream out(path_, std::ios::binary | std::ios::in | std::ios::out);
  if (!out) throw IoError("cannot open memory file: " + path_);
  out.seekp(offset_of(address));
  out.write(raw.data(), static_cast<std::streamsize>(stride));
  if (!out) throw IoError("failed writing memory file: " + path_);
}

}  // namespace cryptovm
