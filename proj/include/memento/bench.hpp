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

#pragma once

// Benchmark harness: stable, one-shot, incremental and capacity-sensitivity
// scenarios over any subset of engines, producing one MetricRecord per
// (point, metric, repetition).

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "memento/engines.hpp"

namespace memento::bench {

enum class Scenario { kStable, kOneShot, kIncremental, kSensitivity };
enum class RemovalOrder { kLifo, kRandom };

std::string_view to_string(Scenario s) noexcept;
std::string_view to_string(RemovalOrder o) noexcept;
/// Throw Error(kInvalidArgument) on unknown names.
Scenario parse_scenario(std::string_view name);
RemovalOrder parse_order(std::string_view name);

/// Removal fractions swept by the incremental scenario: 0.05, 0.10, ..., 0.90.
std::vector<double> incremental_fractions();
/// Capacity ratios swept by the sensitivity scenario: 5, 10, 20, 50, 100.
std::vector<double> sensitivity_ratios();

struct ScenarioConfig {
  Scenario scenario = Scenario::kStable;
  std::vector<Algorithm> algorithms = {Algorithm::kMemento};
  std::uint64_t initial_size = 10000;
  /// Fraction of initial_size removed. Unset means 0.9 for one-shot and 0
  /// otherwise; the incremental scenario always sweeps its own grid.
  std::optional<double> removal_fraction;
  RemovalOrder order = RemovalOrder::kLifo;
  /// a / w for Anchor and Dx outside the sensitivity sweep.
  double capacity_ratio = 10.0;
  std::uint64_t key_count = 100000;
  std::uint64_t seed = 1;
  std::uint64_t repetitions = 5;
  /// When false the latency metrics are skipped (counters and memory only).
  bool time_lookups = true;

  /// Throws Error(kInvalidArgument) on any rule violation, including the
  /// Jump engine combined with random removal order.
  void validate() const;
  [[nodiscard]] double effective_fraction() const;
};

struct MetricRecord {
  std::string algorithm;
  std::string scenario;
  std::uint64_t w_initial = 0;
  std::uint64_t removed_count = 0;
  std::string removal_order;
  double capacity_ratio = 0.0;
  std::string metric;
  double value = 0.0;
  std::string unit;
  std::uint64_t seed = 0;
  std::uint64_t repetition = 0;

  friend bool operator==(const MetricRecord&, const MetricRecord&) = default;
};

struct LatencyStats {
  double median_ns = 0.0;
  double p99_ns = 0.0;
};

/// Per-lookup latency over batches of lookups timed with a monotonic clock.
/// One untimed warmup pass precedes `repetitions` timed passes over `keys`.
LatencyStats measure_lookup_latency(const Engine& engine,
                                    std::span<const KeyDigest> keys,
                                    std::uint64_t repetitions);

struct IterationStats {
  double outer_mean = 0.0;
  double work_mean = 0.0;
};

IterationStats measure_iterations(const Engine& engine,
                                  std::span<const KeyDigest> keys);

MemoryFootprint measure_memory(const Engine& engine);

/// Order in which buckets 0..size-1 are removed: size-1 downward for LIFO,
/// a seeded permutation for random order.
std::vector<BucketId> removal_sequence(std::uint64_t size, RemovalOrder order,
                                       std::uint64_t seed);

std::vector<MetricRecord> run_scenario(const ScenarioConfig& config);

/// Header plus one RFC-4180 row per record. Returns bytes written.
std::uint64_t emit_csv(std::span<const MetricRecord> records, std::ostream& out);
/// Throws Error(kInvalidArgument) if the file cannot be written.
std::uint64_t emit_csv(std::span<const MetricRecord> records,
                       const std::filesystem::path& destination);
/// Parses text produced by emit_csv.
std::vector<MetricRecord> parse_csv(std::string_view text);

}  // namespace memento::bench
