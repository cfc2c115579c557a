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

#include "cryptovm/isa.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "cryptovm/errors.hpp"

namespace cryptovm {

namespace {

struct OpcodeInfo {
  Opcode op;
  std::string_view name;
};

constexpr OpcodeInfo kOpcodes[] = {
    {Opcode::Load, "LOAD"},   {Opcode::Store, "STORE"},
    {Opcode::Mov, "MOV"},     {Opcode::Add, "ADD"},
    {Opcode::Adds, "ADDS"},   {Opcode::Sub, "SUB"},
    {Opcode::Subs, "SUBS"},   {Opcode::Mul, "MUL"},
    {Opcode::Muls, "MULS"},   {Opcode::Smul, "SMUL"},
    {Opcode::Smuls, "SMULS"}, {Opcode::Udiv, "UDIV"},
    {Opcode::Lls, "LLS"},     {Opcode::Lrs, "LRS"},
    {Opcode::Ars, "ARS"},     {Opcode::And, "AND"},
    {Opcode::Or, "OR"},       {Opcode::Xor, "XOR"},
    {Opcode::Orn, "ORN"},     {Opcode::Not, "NOT"},
    {Opcode::Bfc, "BFC"},     {Opcode::Bfi, "BFI"},
    {Opcode::Rbit, "RBIT"},   {Opcode::Rev, "REV"},
    {Opcode::Cmp, "CMP"},     {Opcode::B, "B"},
    {Opcode::Halt, "HALT"},
};

constexpr std::string_view kCondNames[kCondCodeCount] = {
    "EQ", "NE", "CS", "CC", "MI", "PL", "VS", "VC",
    "HI", "LS", "GE", "LT", "GT", "LE", "AL",
};

std::string upper(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return out;
}

struct SourceLine {
  int number = 0;
  std::vector<std::string> tokens;
};

// Strips comments, treats commas as whitespace and splits off trailing
// label colons as separate tokens.
std::vector<std::string> tokenize(std::string_view line) {
  std::string cleaned;
  for (char c : line) {
    if (c == ';' || c == '#') break;
    cleaned.push_back(c == ',' ? ' ' : c);
  }
  std::vector<std::string> tokens;
  std::istringstream stream(cleaned);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

bool is_identifier(std::string_view text) {
  if (text.empty()) return false;
  if (std::isdigit(static_cast<unsigned char>(text[0]))) return false;
  return std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '.';
  });
}

std::optional<std::uint64_t> parse_unsigned(std::string_view text) {
  std::uint64_t value = 0;
  int base = 10;
  if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
    text.remove_prefix(2);
    base = 16;
  }
  if (text.empty()) return std::nullopt;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value, base);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    return std::nullopt;
  }
  return value;
}

bool looks_numeric(std::string_view text) {
  if (!text.empty() && text[0] == '-') text.remove_prefix(1);
  return !text.empty() && std::isdigit(static_cast<unsigned char>(text[0]));
}

class Parser {
 public:
  explicit Parser(const AssembleOptions& options)
      : options_(options), word_size_(options.default_word_size) {}

  Program run(std::string_view source) {
    first_pass(source);
    second_pass();
    program_.word_size = word_size_;
    return std::move(program_);
  }

 private:
  void first_pass(std::string_view source) {
    std::istringstream stream{std::string(source)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
      ++line_no;
      std::vector<std::string> tokens = tokenize(raw);
      std::size_t pos = 0;
      while (pos < tokens.size() && tokens[pos].back() == ':') {
        std::string name = tokens[pos].substr(0, tokens[pos].size() - 1);
        if (!is_identifier(name)) {
          throw AssembleError(line_no, "invalid label name `" + name + "`");
        }
        auto [it, inserted] = program_.labels.emplace(
            name, static_cast<std::uint32_t>(lines_.size()));
        if (!inserted) {
          throw AssembleError(line_no, "duplicate label `" + name + "`");
        }
        ++pos;
      }
      if (pos >= tokens.size()) continue;

      std::string head = upper(tokens[pos]);
      if (head == ".WORD_SIZE") {
        directive_word_size(line_no, tokens, pos);
        continue;
      }
      if (head == ".EQU") {
        directive_equ(line_no, tokens, pos);
        continue;
      }
      SourceLine entry;
      entry.number = line_no;
      entry.tokens.assign(tokens.begin() + pos, tokens.end());
      lines_.push_back(std::move(entry));
    }
  }

  void directive_word_size(int line, const std::vector<std::string>& tokens,
                           std::size_t pos) {
    if (tokens.size() - pos != 2) {
      throw AssembleError(line, ".word_size takes exactly one value");
    }
    auto value = parse_unsigned(tokens[pos + 1]);
    if (!value || (*value != 16 && *value != 32)) {
      throw AssembleError(line, ".word_size must be 16 or 32");
    }
    if (word_size_set_ && word_size_ != *value) {
      throw AssembleError(line, "conflicting .word_size directives");
    }
    word_size_ = static_cast<unsigned>(*value);
    word_size_set_ = true;
  }

  void directive_equ(int line, const std::vector<std::string>& tokens,
                     std::size_t pos) {
    if (tokens.size() - pos != 3) {
      throw AssembleError(line, ".equ takes a name and a value");
    }
    const std::string& name = tokens[pos + 1];
    if (!is_identifier(name) || looks_numeric(name)) {
      throw AssembleError(line, "invalid .equ name `" + name + "`");
    }
    auto value = parse_unsigned(tokens[pos + 2]);
    if (!value) {
      throw AssembleError(line,
                          "invalid .equ value `" + tokens[pos + 2] + "`");
    }
    if (!constants_.emplace(name, *value).second) {
      throw AssembleError(line, "duplicate .equ name `" + name + "`");
    }
  }

  void second_pass() {
    program_.instructions.reserve(lines_.size());
    for (const SourceLine& line : lines_) {
      program_.instructions.push_back(parse_instruction(line));
    }
  }

  [[noreturn]] void fail(int line, const std::string& message) const {
    throw AssembleError(line, message);
  }

  int reg(const SourceLine& line, std::size_t index) const {
    const std::string& token = line.tokens[index];
    if (token.size() < 2 || (token[0] != 'R' && token[0] != 'r')) {
      fail(line.number, "expected a register, got `" + token + "`");
    }
    auto value = parse_unsigned(std::string_view(token).substr(1));
    if (!value) fail(line.number, "malformed register `" + token + "`");
    if (*value >= options_.register_count) {
      fail(line.number, "register " + token + " out of range (have " +
                            std::to_string(options_.register_count) + ")");
    }
    return static_cast<int>(*value);
  }

  bool is_register(const std::string& token) const {
    if (token.size() < 2 || (token[0] != 'R' && token[0] != 'r')) return false;
    return parse_unsigned(std::string_view(token).substr(1)).has_value();
  }

  std::uint64_t immediate(const SourceLine& line, std::size_t index) const {
    const std::string& token = line.tokens[index];
    bool negative = token[0] == '-';
    std::string_view digits(token);
    if (negative) digits.remove_prefix(1);
    auto value = parse_unsigned(digits);
    if (!value) {
      auto equ = constants_.find(token);
      if (equ != constants_.end()) {
        value = equ->second;
        negative = false;
      } else {
        fail(line.number, "malformed operand `" + token + "`");
      }
    }
    const std::uint64_t limit = word_size_ == 64
                                    ? ~std::uint64_t{0}
                                    : (std::uint64_t{1} << word_size_) - 1;
    if (negative) {
      if (*value > (limit >> 1) + 1) {
        fail(line.number, "immediate " + token + " does not fit in " +
                              std::to_string(word_size_) + " bits");
      }
      return (~*value + 1) & limit;
    }
    if (*value > limit) {
      fail(line.number, "immediate " + token + " does not fit in " +
                            std::to_string(word_size_) + " bits");
    }
    return *value;
  }

  std::uint64_t address(const SourceLine& line, std::size_t index) const {
    const std::string& token = line.tokens[index];
    if (auto value = parse_unsigned(token)) return *value;
    auto equ = constants_.find(token);
    if (equ != constants_.end()) return equ->second;
    fail(line.number, "unresolved address `" + token + "`");
  }

  std::uint32_t branch_target(const SourceLine& line,
                              std::size_t index) const {
    const std::string& token = line.tokens[index];
    auto label = program_.labels.find(token);
    if (label == program_.labels.end()) {
      fail(line.number, "unresolved label `" + token + "`");
    }
    return label->second;
  }

  void expect_operands(const SourceLine& line, std::size_t count) const {
    if (line.tokens.size() - 1 != count) {
      fail(line.number, upper(line.tokens[0]) + " expects " +
                            std::to_string(count) + " operand(s), got " +
                            std::to_string(line.tokens.size() - 1));
    }
  }

  Instruction parse_instruction(const SourceLine& line) {
    std::string head = upper(line.tokens[0]);
    Instruction insn;

    if (head.starts_with("B_")) {
      auto cond = cond_from_name(std::string_view(head).substr(2));
      if (!cond) fail(line.number, "unknown condition `" + head + "`");
      insn.op = Opcode::B;
      insn.cond = cond;
      expect_operands(line, 1);
      insn.target = branch_target(line, 1);
      return insn;
    }

    auto op = opcode_from_name(head);
    if (!op) fail(line.number, "unknown mnemonic `" + line.tokens[0] + "`");
    insn.op = *op;
    insn.sets_flags = opcode_sets_flags(*op);

    switch (*op) {
      case Opcode::Halt:
        expect_operands(line, 0);
        break;
      case Opcode::B:
        expect_operands(line, 1);
        insn.target = branch_target(line, 1);
        break;
      case Opcode::Load:
        expect_operands(line, 2);
        insn.rd = reg(line, 1);
        insn.imm = address(line, 2);
        break;
      case Opcode::Store:
        expect_operands(line, 2);
        insn.rn = reg(line, 1);
        insn.imm = address(line, 2);
        break;
      case Opcode::Mov:
        // Accepts `MOV Rd imm`, `MOV Rd Rs` and the three-token
        // `MOV Rd Rx imm` form, whose middle register is ignored.
        if (line.tokens.size() == 4) {
          insn.rd = reg(line, 1);
          reg(line, 2);
          insn.imm = immediate(line, 3);
        } else {
          expect_operands(line, 2);
          insn.rd = reg(line, 1);
          if (is_register(line.tokens[2])) {
            insn.rn = reg(line, 2);
          } else {
            insn.imm = immediate(line, 2);
          }
        }
        break;
      case Opcode::Not:
      case Opcode::Rbit:
      case Opcode::Rev:
        expect_operands(line, 2);
        insn.rd = reg(line, 1);
        insn.rn = reg(line, 2);
        break;
      case Opcode::Cmp:
        expect_operands(line, 2);
        insn.rn = reg(line, 1);
        if (is_register(line.tokens[2])) {
          insn.rm = reg(line, 2);
        } else {
          insn.imm = immediate(line, 2);
        }
        break;
      case Opcode::Bfc:
        expect_operands(line, 3);
        insn.rd = reg(line, 1);
        insn.imm = address(line, 2);
        insn.imm2 = address(line, 3);
        check_field(line, *insn.imm, *insn.imm2);
        break;
      case Opcode::Bfi:
        expect_operands(line, 4);
        insn.rd = reg(line, 1);
        insn.rn = reg(line, 2);
        insn.imm = address(line, 3);
        insn.imm2 = address(line, 4);
        check_field(line, *insn.imm, *insn.imm2);
        break;
      case Opcode::Lls:
      case Opcode::Lrs:
      case Opcode::Ars:
        expect_operands(line, 3);
        insn.rd = reg(line, 1);
        insn.rn = reg(line, 2);
        if (is_register(line.tokens[3])) {
          insn.rm = reg(line, 3);
        } else {
          insn.imm = address(line, 3);
          if (*insn.imm > word_size_) {
            fail(line.number, "shift amount exceeds the word size");
          }
        }
        break;
      default:
        // Three-operand ALU format: Rd Rn (Rm | imm).
        expect_operands(line, 3);
        insn.rd = reg(line, 1);
        insn.rn = reg(line, 2);
        if (is_register(line.tokens[3])) {
          insn.rm = reg(line, 3);
        } else {
          insn.imm = immediate(line, 3);
        }
        break;
    }
    return insn;
  }

  void check_field(const SourceLine& line, std::uint64_t lsb,
                   std::uint64_t width) const {
    if (width == 0 || lsb + width > word_size_) {
      fail(line.number, "bit field out of range for " +
                            std::to_string(word_size_) + "-bit words");
    }
  }

  AssembleOptions options_;
  Program program_;
  std::vector<SourceLine> lines_;
  std::map<std::string, std::uint64_t> constants_;
  unsigned word_size_;
  bool word_size_set_ = false;
};

}  // namespace

std::string_view opcode_name(Opcode op) {
  for (const OpcodeInfo& info : kOpcodes) {
    if (info.op == op) return info.name;
  }
  return "?";
}

std::optional<Opcode> opcode_from_name(std::string_view name) {
  for (const OpcodeInfo& info : kOpcodes) {
    if (info.name == name) return info.op;
  }
  return std::nullopt;
}

std::string_view cond_name(CondCode cond) {
  return kCondNames[static_cast<int>(cond)];
}

std::optional<CondCode> cond_from_name(std::string_view name) {
  for (int i = 0; i < kCondCodeCount; ++i) {
    if (kCondNames[i] == name) return static_cast<CondCode>(i);
  }
  return std::nullopt;
}

bool opcode_sets_flags(Opcode op) {
  switch (op) {
    case Opcode::Adds:
    case Opcode::Subs:
    case Opcode::Muls:
    case Opcode::Smuls:
    case Opcode::Cmp:
      return true;
    default:
      return false;
  }
}

Program assemble(std::string_view source, const AssembleOptions& options) {
  if (options.default_word_size != 16 && options.default_word_size != 32) {
    throw InputError("default word size must be 16 or 32");
  }
  if (options.register_count == 0) {
    throw InputError("register count must be positive");
  }
  Parser parser(options);
  return parser.run(source);
}

std::string disassemble(const Program& program) {
  std::map<std::uint32_t, std::string> label_for_index;
  for (const auto& [name, index] : program.labels) {
    // std::map iteration is sorted, so the first name per index wins and
    // the choice is deterministic.
    label_for_index.emplace(index, name);
  }

  std::ostringstream out;
  out << ".word_size " << program.word_size << "\n";
  auto emit_labels = [&](std::uint32_t index) {
    for (const auto& [name, target] : program.labels) {
      if (target == index) out << name << ":\n";
    }
  };

  for (std::uint32_t index = 0; index < program.instructions.size();
       ++index) {
    emit_labels(index);
    const Instruction& insn = program.instructions[index];
    out << "    ";
    if (insn.op == Opcode::B && insn.cond) {
      out << "B_" << cond_name(*insn.cond);
    } else {
      out << opcode_name(insn.op);
    }
    switch (insn.op) {
      case Opcode::Halt:
        break;
      case Opcode::B: {
        if (!insn.target) throw InputError("branch without a target");
        auto label = label_for_index.find(*insn.target);
        if (label == label_for_index.end()) {
          throw InputError("branch target has no label");
        }
        out << " " << label->second;
        break;
      }
      case Opcode::Load:
        out << " R" << insn.rd << " " << *insn.imm;
        break;
      case Opcode::Store:
        out << " R" << insn.rn << " " << *insn.imm;
        break;
      case Opcode::Mov:
        out << " R" << insn.rd << " ";
        if (insn.imm) {
          out << *insn.imm;
        } else {
          out << "R" << insn.rn;
        }
        break;
      case Opcode::Not:
      case Opcode::Rbit:
      case Opcode::Rev:
        out << " R" << insn.rd << " R" << insn.rn;
        break;
      case Opcode::Cmp:
        out << " R" << insn.rn << " ";
        if (insn.imm) {
          out << *insn.imm;
        } else {
          out << "R" << insn.rm;
        }
        break;
      case Opcode::Bfc:
        out << " R" << insn.rd << " " << *insn.imm << " " << *insn.imm2;
        break;
      case Opcode::Bfi:
        out << " R" << insn.rd << " R" << insn.rn << " " << *insn.imm << " "
            << *insn.imm2;
        break;
      default:
        out << " R" << insn.rd << " R" << insn.rn << " ";
        if (insn.imm) {
          out << *insn.imm;
        } else {
          out << "R" << insn.rm;
        }
        break;
    }
    out << "\n";
  }
  emit_labels(static_cast<std::uint32_t>(program.instructions.size()));
  return out.str();
}

}  // namespace cryptovm
