// Copyright 2026 The Memento Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "memento/cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "memento/bench.hpp"
#include "memento/memento.hpp"
#include "memento/oracle.hpp"

namespace memento::cli {
namespace {

constexpr const char* kDefaultStateFile = "memento_state.json";

// Flag-level failure detected after CLI11 accepted the syntax.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void echo_config(std::ostream& err, const std::string& command,
                 const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = config;
  err << "# resolved " << j.dump() << '\n';
}

std::vector<Algorithm> parse_algorithms(const std::string& list) {
  std::vector<Algorithm> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(parse_algorithm(item));
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
  }
  if (out.empty()) throw UsageError("--algos needs at least one algorithm");
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read state file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

MementoHash read_state(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return load_state(text);
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

void write_state(const std::string& path, const MementoHash& state) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write state file " + path);
  out << save_state(state) << '\n';
  if (!out) throw std::runtime_error("failed writing state file " + path);
}

void print_state(std::ostream& out, const MementoHash& state) {
  out << "n=" << state.size() << " w=" << state.working_count()
      << " r=" << state.replacement_count() << " l=" << state.last_removed() << '\n';
  for (const Replacement& r : state.replacements()) {
    out << "<" << r.removed << " -> " << r.replacer << ", " << r.previous << ">\n";
  }
}

KeyDigest parse_key_hex(std::string text) {
  if (text.starts_with("0x") || text.starts_with("0X")) text.erase(0, 2);
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (text.empty() || text.size() > 16 || res.ec != std::errc{} ||
      res.ptr != text.data() + text.size()) {
    throw UsageError("--key-hex expects up to 16 hex digits");
  }
  return KeyDigest{value};
}

void print_trace(std::ostream& out, const MementoHash& state, KeyDigest key) {
  for (const LookupStep& s : state.explain(key)) {
    switch (s.kind) {
      case LookupStep::Kind::kJump:
        out << "jump(key, " << s.bound << ") -> " << s.bucket << '\n';
        break;
      case LookupStep::Kind::kRehash:
        out << "bucket " << s.bucket << " removed, w_b=" << s.bound << ": hash(key, "
            << s.bucket << ") mod " << s.bound << " -> " << s.target << '\n';
        break;
      case LookupStep::Kind::kHop:
        out << "  follow " << s.bucket << " -> " << s.target << '\n';
        break;
      case LookupStep::Kind::kStop:
        out << "  stop at " << s.bucket << " (replaced by " << s.target << " < w_b "
            << s.bound << ")\n";
        break;
      case LookupStep::Kind::kResult:
        out << "result: " << s.bucket << '\n';
        break;
    }
  }
  const auto [bucket, trace] = state.lookup_traced(key);
  out << "tau=" << trace.external_iterations
      << " hops=" << trace.internal_iterations_total
      << " work=" << trace.product_work << '\n';
}

void print_report(std::ostream& out, const oracle::PropertyReport& report) {
  out << report.to_json().dump() << '\n';
}

struct BenchFlags {
  std::string scenario;
  std::string algos = "memento";
  std::uint64_t size = 10000;
  std::optional<double> remove_fraction;
  std::string order = "lifo";
  double capacity_ratio = 10.0;
  std::uint64_t keys = 100000;
  std::uint64_t seed = 1;
  std::uint64_t reps = 5;
  std::string out;
};

int run_bench(const BenchFlags& f, std::ostream& out, std::ostream& err) {
  bench::ScenarioConfig config;
  try {
    config.scenario = bench::parse_scenario(f.scenario);
    config.order = bench::parse_order(f.order);
    config.algorithms = parse_algorithms(f.algos);
    config.initial_size = f.size;
    config.removal_fraction = f.remove_fraction;
    config.capacity_ratio = f.capacity_ratio;
    config.key_count = f.keys;
    config.seed = f.seed;
    config.repetitions = f.reps;
    config.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }

  nlohmann::ordered_json echo;
  echo["scenario"] = f.scenario;
  echo["algos"] = f.algos;
  echo["size"] = f.size;
  echo["remove_fraction"] = config.effective_fraction();
  echo["order"] = f.order;
  echo["capacity_ratio"] = f.capacity_ratio;
  echo["keys"] = f.keys;
  echo["seed"] = f.seed;
  echo["reps"] = f.reps;
  echo["out"] = f.out.empty() ? "-" : f.out;
  echo_config(err, "bench", echo);

  const auto records = bench::run_scenario(config);
  std::uint64_t bytes = 0;
  if (f.out.empty() || f.out == "-") {
    bytes = bench::emit_csv(records, out);
  } else {
    bytes = bench::emit_csv(records, std::filesystem::path(f.out));
  }
  err << "# wrote " << records.size() << " records (" << bytes << " bytes)\n";
  return kExitOk;
}

int run_verify(const std::string& suite, std::optional<std::uint64_t> size,
               std::uint64_t seed, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kSuites = {
      "balance", "disruption", "monotonicity", "equivalence", "iteration-bounds", "all"};
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    throw UsageError("unknown suite '" + suite + "'");
  }
  if (size && *size == 0) throw UsageError("--size must be positive");

  nlohmann::ordered_json echo;
  echo["suite"] = suite;
  echo["size"] = size ? nlohmann::ordered_json(*size) : nlohmann::ordered_json("default");
  echo["seed"] = seed;
  echo_config(err, "verify", echo);

  const bool all = suite == "all";
  std::vector<oracle::PropertyReport> reports;
  if (all || suite == "equivalence") {
    reports.push_back(oracle::equivalence_suite(1000, size.value_or(32), 20, 1000, seed));
  }
  if (all || suite == "disruption" || suite == "monotonicity") {
    auto result = oracle::history_suite(200, size.value_or(64), 20, 10000, seed);
    if (all || suite == "disruption") reports.push_back(std::move(result.disruption));
    if (all || suite == "monotonicity") reports.push_back(std::move(result.monotonicity));
  }
  if (all || suite == "balance") {
    const std::uint64_t n = size.value_or(1000);
    const auto state = oracle::random_removals(n, n / 5, mix64(seed));
    reports.push_back(oracle::check_balance(state, 1000000, seed));
  }
  if (all || suite == "iteration-bounds") {
    const double grid[] = {0.2, 0.5, 0.65, 0.9};
    for (auto& r : oracle::iteration_bounds_suite(size.value_or(1000), grid, 100000, seed)) {
      reports.push_back(std::move(r));
    }
  }

  bool passed = true;
  for (const auto& r : reports) {
    print_report(out, r);
    if (!r.passed) {
      passed = false;
      err << "FAIL " << r.property;
      if (r.reproduction) {
        err << " (seed " << r.reproduction->seed;
        if (!r.reproduction->history.events().empty()) {
          err << ", history: " << r.reproduction->history.to_string();
        }
        if (r.reproduction->key) err << ", key-hex " << std::hex << r.reproduction->key->value << std::dec;
        err << ")";
      }
      err << '\n';
    }
  }
  return passed ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"MementoHash consistent hashing toolkit", "memento_cli"};
  app.require_subcommand(1);

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "Run a benchmark scenario and emit CSV");
  bench_cmd->add_option("--scenario", bench_flags.scenario,
                        "stable | oneshot | incremental | sensitivity")->required();
  bench_cmd->add_option("--algos", bench_flags.algos, "Comma list of memento,jump,anchor,dx")
      ->capture_default_str();
  bench_cmd->add_option("--size", bench_flags.size, "Initial working buckets w")
      ->capture_default_str();
  bench_cmd->add_option("--remove-fraction", bench_flags.remove_fraction,
                        "Fraction of w removed (default 0.9 for oneshot, else 0)");
  bench_cmd->add_option("--order", bench_flags.order, "lifo | random")->capture_default_str();
  bench_cmd->add_option("--capacity-ratio", bench_flags.capacity_ratio,
                        "a/w for anchor and dx")->capture_default_str();
  bench_cmd->add_option("--keys", bench_flags.keys, "Keys per measurement")
      ->capture_default_str();
  bench_cmd->add_option("--seed", bench_flags.seed, "RNG seed")->capture_default_str();
  bench_cmd->add_option("--reps", bench_flags.reps, "Repetitions")->capture_default_str();
  bench_cmd->add_option("--out", bench_flags.out, "CSV destination (default stdout)");

  std::string suite = "all";
  std::optional<std::uint64_t> verify_size;
  std::uint64_t verify_seed = 1;
  auto* verify_cmd = app.add_subcommand("verify", "Run property verification suites");
  verify_cmd->add_option("--suite", suite,
                         "balance | disruption | monotonicity | equivalence | "
                         "iteration-bounds | all")->capture_default_str();
  verify_cmd->add_option("--size", verify_size, "Instance size for the suite");
  verify_cmd->add_option("--seed", verify_seed, "RNG seed")->capture_default_str();

  auto* state_cmd = app.add_subcommand("state", "Create, mutate and inspect a state file");
  state_cmd->require_subcommand(1);
  std::string state_file = kDefaultStateFile;
  std::uint64_t init_count = 0;
  std::uint64_t remove_bucket = 0;
  auto* init_cmd = state_cmd->add_subcommand("init", "Create a state with N buckets");
  init_cmd->add_option("N", init_count, "Initial node count")->required();
  auto* remove_cmd = state_cmd->add_subcommand("remove", "Remove bucket B");
  remove_cmd->add_option("B", remove_bucket, "Bucket to remove")->required();
  auto* add_cmd = state_cmd->add_subcommand("add", "Add a bucket");
  auto* show_cmd = state_cmd->add_subcommand("show", "Print n, w, r, l and replacements");
  for (auto* cmd : {init_cmd, remove_cmd, add_cmd, show_cmd}) {
    cmd->add_option("--file", state_file, "State file")->capture_default_str();
  }

  std::string trace_file = kDefaultStateFile;
  std::optional<std::string> trace_key;
  std::optional<std::string> trace_key_hex;
  auto* trace_cmd = app.add_subcommand("trace", "Narrate the lookup of one key");
  trace_cmd->add_option("--file", trace_file, "State file")->capture_default_str();
  auto* key_opt = trace_cmd->add_option("--key", trace_key, "Key as a UTF-8 string");
  auto* hex_opt = trace_cmd->add_option("--key-hex", trace_key_hex,
                                        "Key digest as hex, bypassing digestion");
  key_opt->excludes(hex_opt);

  std::vector<const char*> argv{"memento_cli"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*bench_cmd) return run_bench(bench_flags, out, err);
    if (*verify_cmd) return run_verify(suite, verify_size, verify_seed, out, err);

    if (*state_cmd) {
      nlohmann::ordered_json echo;
      echo["file"] = state_file;
      if (*init_cmd) {
        echo["action"] = "init";
        echo["n"] = init_count;
        echo_config(err, "state", echo);
        MementoHash state(init_count);
        write_state(state_file, state);
        print_state(out, state);
        return kExitOk;
      }
      if (*show_cmd) {
        echo["action"] = "show";
        echo_config(err, "state", echo);
        print_state(out, read_state(state_file));
        return kExitOk;
      }
      MementoHash state = read_state(state_file);
      if (*remove_cmd) {
        echo["action"] = "remove";
        echo["bucket"] = remove_bucket;
        echo_config(err, "state", echo);
        if (remove_bucket > kMaxBuckets) {
          throw Error(Errc::kOutOfRange, "bucket " + std::to_string(remove_bucket) +
                                             " out of range");
        }
        state.remove(static_cast<BucketId>(remove_bucket));
      } else {
        echo["action"] = "add";
        echo_config(err, "state", echo);
        out << "added " << state.add() << '\n';
      }
      write_state(state_file, state);
      print_state(out, state);
      return kExitOk;
    }

    if (*trace_cmd) {
      if (!trace_key && !trace_key_hex) throw UsageError("trace needs --key or --key-hex");
      const KeyDigest key = trace_key ? digest_key(*trace_key) : parse_key_hex(*trace_key_hex);
      nlohmann::ordered_json echo;
      echo["file"] = trace_file;
      if (trace_key) echo["key"] = *trace_key;
      std::ostringstream hex;
      hex << std::hex << key.value;
      echo["digest_hex"] = hex.str();
      echo_config(err, "trace", echo);
      print_trace(out, read_state(trace_file), key);
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace memento::cli
