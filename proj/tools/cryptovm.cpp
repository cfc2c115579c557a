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

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cryptovm/emulator.hpp"
#include "cryptovm/errors.hpp"
#include "cryptovm/isa.hpp"
#include "cryptovm/keyservice.hpp"
#include "cryptovm/sched.hpp"
#include "cryptovm/sim_backend.hpp"

namespace {

using namespace cryptovm;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  out << content;
}

std::vector<std::uint32_t> parse_workers(const std::string& spec) {
  std::vector<std::uint32_t> workers;
  std::stringstream stream(spec);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (item.empty()) continue;
    try {
      unsigned long value = std::stoul(item);
      if (value == 0 || value > 100000) throw InputError("");
      workers.push_back(static_cast<std::uint32_t>(value));
    } catch (const std::exception&) {
      throw InputError("bad worker count `" + item +
                       "` in --workers (expected e.g. 1,2,4,8)");
    }
  }
  if (workers.empty()) throw InputError("--workers must name at least one count");
  return workers;
}

GateDag repriced(const GateDag& dag, const CostTable& costs) {
  GateDag out;
  for (const std::string& name : dag.regions()) out.intern_region(name);
  for (const DagNode& node : dag.nodes()) {
    std::vector<std::uint64_t> deps(node.dep.begin(),
                                    node.dep.begin() + node.dep_count);
    out.append(node.kind, node.input, deps, node.region, node.epoch,
               node.input ? 0.0 : costs.cost(node.kind));
  }
  return out;
}

struct RunOptions {
  std::string program_path;
  std::string mem_path;
  std::string mem_out_path;
  std::string stats_path;
  std::string trace_path;
  std::string cost_table_path;
  std::string workers = "1,48";
  std::string oracle = "local";
  std::string mem_mode = "buffer";
  unsigned width = 32;
  bool width_given = false;
  unsigned regs = 16;
  std::uint64_t max_steps = 1000000;
};

Program load_program(const std::string& path, unsigned default_width,
                     bool width_given, unsigned regs) {
  AssembleOptions options;
  options.default_word_size = default_width;
  options.register_count = regs;
  Program program;
  try {
    program = assemble(read_file(path), options);
  } catch (const AssembleError& e) {
    throw InputError(path + ": " + e.what());
  }
  if (width_given && program.word_size != default_width) {
    throw InputError(path + " selects " + std::to_string(program.word_size) +
                     "-bit words, which conflicts with --width " +
                     std::to_string(default_width));
  }
  return program;
}

int cmd_assemble(const std::string& input, const std::string& output,
                 unsigned width, bool width_given, unsigned regs) {
  Program program = load_program(input, width, width_given, regs);
  std::string canonical = disassemble(program);
  if (output.empty()) {
    std::cout << canonical;
  } else {
    write_file(output, canonical);
  }
  return 0;
}

int cmd_encrypt(const std::vector<std::uint64_t>& values, unsigned width,
                const std::string& output) {
  encrypt_file(values, width, output);
  return 0;
}

int cmd_decrypt(const std::string& input) {
  MemoryImage image = decrypt_file(input);
  for (std::uint64_t value : image.values) std::cout << value << "\n";
  return 0;
}

int cmd_run(const RunOptions& opt) {
  Program program =
      load_program(opt.program_path, opt.width, opt.width_given, opt.regs);
  const unsigned width = program.word_size;

  CostTable costs;
  if (!opt.cost_table_path.empty()) {
    costs = CostTable::load_file(opt.cost_table_path);
  }
  SimBackend backend(costs);

  std::unique_ptr<DataMemory> memory;
  if (opt.mem_path.empty()) {
    if (opt.mem_mode == "file") {
      throw InputError("--mem-mode file needs a --mem image");
    }
    memory = std::make_unique<BufferMemory>(width, std::vector<Word>{});
  } else if (opt.mem_mode == "file") {
    memory = std::make_unique<FileMemory>(backend, opt.mem_path);
  } else if (opt.mem_mode == "buffer") {
    MemoryImage image = decrypt_file(opt.mem_path);
    if (image.width != width) {
      throw InputError(opt.mem_path + " holds " +
                       std::to_string(image.width) +
                       "-bit words but the program uses " +
                       std::to_string(width) + "-bit words");
    }
    std::vector<Word> words;
    words.reserve(image.values.size());
    for (std::uint64_t v : image.values) {
      words.push_back(Word::encrypt(backend, v, width));
    }
    memory = std::make_unique<BufferMemory>(width, std::move(words));
  } else {
    throw InputError("--mem-mode must be buffer or file");
  }

  std::unique_ptr<BranchOracle> oracle;
  std::unique_ptr<BranchServer> local_server;
  if (opt.oracle == "local") {
    oracle = std::make_unique<LocalBranchOracle>(backend);
  } else {
    auto colon = opt.oracle.rfind(':');
    if (colon == std::string::npos) {
      throw InputError("--oracle must be `local` or `host:port`");
    }
    std::string host = opt.oracle.substr(0, colon);
    int port = std::stoi(opt.oracle.substr(colon + 1));
    oracle = std::make_unique<RemoteBranchOracle>(
        backend, host, static_cast<std::uint16_t>(port));
  }

  MachineConfig config;
  config.word_size = width;
  config.register_count = opt.regs;
  Machine machine(backend, config, std::move(memory), *oracle);

  StopReason reason = StopReason::Halted;
  std::string failure;
  try {
    reason = machine.run(program, opt.max_steps);
  } catch (const Error& e) {
    failure = e.what();
  }

  // Final memory image: file mode already wrote through; buffer mode
  // writes back to the requested destination.
  std::string mem_out = opt.mem_out_path;
  if (mem_out.empty() && opt.mem_mode == "buffer") mem_out = opt.mem_path;
  if (!mem_out.empty()) {
    std::vector<std::uint64_t> values;
    values.reserve(machine.memory().size());
    for (std::size_t i = 0; i < machine.memory().size(); ++i) {
      values.push_back(decrypt_word(backend, machine.memory().load(i)));
    }
    encrypt_file(values, width, mem_out);
  }

  if (!opt.trace_path.empty()) {
    std::ofstream trace(opt.trace_path, std::ios::trunc);
    if (!trace) throw IoError("cannot write " + opt.trace_path);
    backend.dag().write_json(trace);
  }

  // Stats are reported even when the run aborted.
  nlohmann::json doc;
  if (!backend.dag().empty()) {
    std::vector<std::uint32_t> workers = parse_workers(opt.workers);
    ScheduleReport report = analyze(backend.dag(), workers);
    doc["schedule"] = nlohmann::json::parse(report_to_json(report));
  }
  doc["run"] = {
      {"status", !failure.empty()
                     ? "error"
                     : reason == StopReason::Halted ? "halted" : "step_limit"},
      {"instructions", machine.stats().instructions},
      {"branch_queries", machine.stats().branch_queries},
      {"word_size", width},
  };
  if (!failure.empty()) doc["run"]["error"] = failure;
  std::string rendered = doc.dump(2) + "\n";
  if (opt.stats_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(opt.stats_path, rendered);
  }

  if (!failure.empty()) {
    std::cerr << "error: " << failure << "\n";
    return 1;
  }
  return reason == StopReason::Halted ? 0 : 2;
}

int cmd_stats(const std::string& trace_path, const std::string& workers_spec,
              const std::string& cost_table_path,
              const std::string& stats_path) {
  std::ifstream in(trace_path);
  if (!in) throw IoError("cannot open " + trace_path);
  GateDag dag = GateDag::read_json(in);
  if (!cost_table_path.empty()) {
    dag = repriced(dag, CostTable::load_file(cost_table_path));
  }
  ScheduleReport report = analyze(dag, parse_workers(workers_spec));
  std::string rendered = report_to_json(report) + "\n";
  if (stats_path.empty()) {
    std::cout << rendered;
  } else {
    write_file(stats_path, rendered);
  }
  return 0;
}

int cmd_serve(std::uint16_t port, bool user_controlled) {
  SimBackend backend;
  BranchServer server(backend, port, user_controlled);
  std::cout << "listening on 127.0.0.1:" << server.port() << "\n"
            << std::flush;
  for (;;) std::this_thread::sleep_for(std::chrono::seconds(3600));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homomorphic instruction set emulator (cleartext simulation "
               "backend)"};
  app.require_subcommand(1);

  // assemble
  auto* assemble_cmd =
      app.add_subcommand("assemble", "Parse assembly and emit canonical text");
  std::string asm_input, asm_output;
  unsigned asm_width = 32, asm_regs = 16;
  assemble_cmd->add_option("input", asm_input, "assembly source file")
      ->required();
  assemble_cmd->add_option("-o,--output", asm_output,
                           "output file (default stdout)");
  auto* asm_width_opt =
      assemble_cmd->add_option("--width", asm_width, "word width (16|32)");
  assemble_cmd->add_option("--regs", asm_regs, "register count");

  // encrypt
  auto* encrypt_cmd =
      app.add_subcommand("encrypt", "Build an encrypted memory image");
  std::vector<std::uint64_t> encrypt_values;
  std::string encrypt_output;
  unsigned encrypt_width = 32;
  encrypt_cmd->add_option("values", encrypt_values, "cleartext words");
  encrypt_cmd->add_option("-o,--output", encrypt_output, "memory image path")
      ->required();
  encrypt_cmd->add_option("--width", encrypt_width, "word width (16|32)");

  // decrypt
  auto* decrypt_cmd =
      app.add_subcommand("decrypt", "Decrypt a memory image to stdout");
  std::string decrypt_input;
  decrypt_cmd->add_option("input", decrypt_input, "memory image path")
      ->required();

  // run
  auto* run_cmd = app.add_subcommand("run", "Execute a program");
  RunOptions run_opt;
  run_cmd->add_option("program", run_opt.program_path, "assembly source file")
      ->required();
  run_cmd->add_option("--mem", run_opt.mem_path, "memory image path");
  run_cmd->add_option("--mem-out", run_opt.mem_out_path,
                      "where to write the final memory image "
                      "(default: the --mem path)");
  auto* run_width_opt =
      run_cmd->add_option("--width", run_opt.width, "word width (16|32)");
  run_cmd->add_option("--regs", run_opt.regs, "register count");
  run_cmd->add_option("--cost-table", run_opt.cost_table_path,
                      "gate latency config file");
  run_cmd->add_option("--workers", run_opt.workers,
                      "worker counts for the makespan report");
  run_cmd->add_option("--max-steps", run_opt.max_steps,
                      "instruction budget before aborting");
  run_cmd->add_option("--oracle", run_opt.oracle,
                      "branch oracle: local or host:port");
  run_cmd->add_option("--mem-mode", run_opt.mem_mode, "buffer or file");
  run_cmd->add_option("--stats", run_opt.stats_path,
                      "write the stats JSON here instead of stdout");
  run_cmd->add_option("--trace", run_opt.trace_path,
                      "dump the recorded gate DAG as JSON");

  // stats
  auto* stats_cmd =
      app.add_subcommand("stats", "Re-analyze a recorded gate DAG");
  std::string stats_trace, stats_workers = "1,48", stats_cost_table,
              stats_output;
  stats_cmd->add_option("trace", stats_trace, "trace file from run --trace")
      ->required();
  stats_cmd->add_option("--workers", stats_workers, "worker counts");
  stats_cmd->add_option("--cost-table", stats_cost_table,
                        "re-price gates from this latency config");
  stats_cmd->add_option("--stats", stats_output,
                        "write the report here instead of stdout");

  // serve-oracle
  auto* serve_cmd = app.add_subcommand(
      "serve-oracle", "Run the key-owner branch resolution service");
  std::uint16_t serve_port = 0;
  bool serve_user_controlled = false;
  serve_cmd->add_option("--port", serve_port,
                        "TCP port (0 picks an ephemeral one)");
  serve_cmd->add_flag("--user-controlled", serve_user_controlled,
                      "reply with the next instruction index instead of a "
                      "taken bit");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*assemble_cmd) {
      return cmd_assemble(asm_input, asm_output, asm_width,
                          asm_width_opt->count() > 0, asm_regs);
    }
    if (*encrypt_cmd) {
      return cmd_encrypt(encrypt_values, encrypt_width, encrypt_output);
    }
    if (*decrypt_cmd) return cmd_decrypt(decrypt_input);
    if (*run_cmd) {
      run_opt.width_given = run_width_opt->count() > 0;
      return cmd_run(run_opt);
    }
    if (*stats_cmd) {
      return cmd_stats(stats_trace, stats_workers, stats_cost_table,
                       stats_output);
    }
    if (*serve_cmd) return cmd_serve(serve_port, serve_user_controlled);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
