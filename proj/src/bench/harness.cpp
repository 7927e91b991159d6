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

#include <chrono>
#include <cmath>
#include <string>

#include "memento/bench.hpp"
#include "memento/stats.hpp"

namespace memento::bench {
namespace {

constexpr std::size_t kBatch = 1024;

struct Point {
  double ratio;
  std::uint64_t removed;
};

std::uint64_t removed_for(double fraction, std::uint64_t size) {
  return static_cast<std::uint64_t>(std::llround(fraction * static_cast<double>(size)));
}

}  // namespace

std::string_view to_string(Scenario s) noexcept {
  switch (s) {
    case Scenario::kStable: return "stable";
    case Scenario::kOneShot: return "oneshot";
    case Scenario::kIncremental: return "incremental";
    case Scenario::kSensitivity: return "sensitivity";
  }
  return "unknown";
}

std::string_view to_string(RemovalOrder o) noexcept {
  return o == RemovalOrder::kLifo ? "lifo" : "random";
}

Scenario parse_scenario(std::string_view name) {
  if (name == "stable") return Scenario::kStable;
  if (name == "oneshot") return Scenario::kOneShot;
  if (name == "incremental") return Scenario::kIncremental;
  if (name == "sensitivity") return Scenario::kSensitivity;
  throw Error(Errc::kInvalidArgument, "unknown scenario '" + std::string(name) + "'");
}

RemovalOrder parse_order(std::string_view name) {
  if (name == "lifo") return RemovalOrder::kLifo;
  if (name == "random") return RemovalOrder::kRandom;
  throw Error(Errc::kInvalidArgument, "unknown removal order '" + std::string(name) + "'");
}

std::vector<double> incremental_fractions() {
  std::vector<double> out;
  for (int pct = 5; pct <= 90; pct += 5) out.push_back(pct / 100.0);
  return out;
}

std::vector<double> sensitivity_ratios() { return {5.0, 10.0, 20.0, 50.0, 100.0}; }

double ScenarioConfig::effective_fraction() const {
  if (removal_fraction) return *removal_fraction;
  return scenario == Scenario::kOneShot ? 0.9 : 0.0;
}

void ScenarioConfig::validate() const {
  auto reject = [](const std::string& why) { throw Error(Errc::kInvalidArgument, why); };
  if (algorithms.empty()) reject("no algorithms selected");
  if (initial_size == 0) reject("initial size must be positive");
  if (initial_size > kMaxBuckets) reject("initial size exceeds 2^31 - 1");
  if (key_count == 0) reject("key count must be positive");
  if (repetitions == 0) reject("repetitions must be positive");
  const double f = effective_fraction();
  if (!(f >= 0.0 && f < 1.0)) reject("removal fraction must lie in [0, 1)");
  if (scenario == Scenario::kStable && f != 0.0) {
    reject("stable scenario removes no buckets");
  }
  if (removed_for(f, initial_size) >= initial_size) {
    reject("removal fraction leaves no working bucket");
  }
  if (!(capacity_ratio >= 1.0)) reject("capacity ratio must be >= 1");
  for (Algorithm a : algorithms) {
    if (a == Algorithm::kJump && order == RemovalOrder::kRandom) {
      reject("jump only supports LIFO removal; use --order lifo or drop jump");
    }
    if (a == Algorithm::kAnchor || a == Algorithm::kDx) {
      const auto ratios = scenario == Scenario::kSensitivity
                              ? sensitivity_ratios()
                              : std::vector<double>{capacity_ratio};
      for (double r : ratios) {
        if (r * static_cast<double>(initial_size) > static_cast<double>(kMaxBuckets)) {
          reject("capacity a = ratio * size exceeds 2^31 - 1");
        }
      }
    }
  }
}

LatencyStats measure_lookup_latency(const Engine& engine,
                                    std::span<const KeyDigest> keys,
                                    std::uint64_t repetitions) {
  using Clock = std::chrono::steady_clock;
  volatile BucketId sink = 0;
  for (const KeyDigest k : keys) sink = engine.lookup(k);

  std::vector<double> per_lookup;
  per_lookup.reserve(repetitions * (keys.size() / kBatch + 1));
  for (std::uint64_t rep = 0; rep < repetitions; ++rep) {
    for (std::size_t start = 0; start < keys.size(); start += kBatch) {
      const std::size_t end = std::min(keys.size(), start + kBatch);
      BucketId acc = 0;
      const auto t0 = Clock::now();
      for (std::size_t i = start; i < end; ++i) acc ^= engine.lookup(keys[i]);
      const auto t1 = Clock::now();
      sink = acc;
      const double ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
      per_lookup.push_back(ns / static_cast<double>(end - start));
    }
  }
  (void)sink;
  if (per_lookup.empty()) return {};
  return {stats::percentile(per_lookup, 50.0), stats::percentile(per_lookup, 99.0)};
}

IterationStats measure_iterations(const Engine& engine,
                                  std::span<const KeyDigest> keys) {
  if (keys.empty()) return {};
  std::uint64_t outer = 0;
  std::uint64_t work = 0;
  for (const KeyDigest k : keys) {
    const EngineTrace t = engine.lookup_traced(k);
    outer += t.outer;
    work += t.work;
  }
  const auto n = static_cast<double>(keys.size());
  return {static_cast<double>(outer) / n, static_cast<double>(work) / n};
}

MemoryFootprint measure_memory(const Engine& engine) { return engine.memory(); }

std::vector<BucketId> removal_sequence(std::uint64_t size, RemovalOrder order,
                                       std::uint64_t seed) {
  if (order == RemovalOrder::kRandom) return stats::random_permutation(size, seed);
  std::vector<BucketId> out(size);
  for (std::uint64_t i = 0; i < size; ++i) out[i] = static_cast<BucketId>(size - 1 - i);
  return out;
}

std::vector<MetricRecord> run_scenario(const ScenarioConfig& config) {
  config.validate();
  const auto keys = stats::random_keys(config.key_count, config.seed);
  const auto sequence =
      removal_sequence(config.initial_size, config.order, mix64(config.seed));

  // Points in sweep order; incremental points share one engine per algorithm.
  std::vector<Point> points;
  switch (config.scenario) {
    case Scenario::kStable:
    case Scenario::kOneShot:
      points.push_back({config.capacity_ratio,
                        removed_for(config.effective_fraction(), config.initial_size)});
      break;
    case Scenario::kIncremental:
      for (double f : incremental_fractions()) {
        points.push_back({config.capacity_ratio, removed_for(f, config.initial_size)});
      }
      break;
    case Scenario::kSensitivity:
      for (double r : sensitivity_ratios()) {
        points.push_back({r, removed_for(config.effective_fraction(), config.initial_size)});
      }
      break;
  }

  std::vector<MetricRecord> records;
  for (Algorithm algorithm : config.algorithms) {
    std::unique_ptr<Engine> engine;
    std::uint64_t applied = 0;
    for (const Point& point : points) {
      const bool fresh = config.scenario != Scenario::kIncremental || !engine;
      if (fresh) {
        engine = make_engine(algorithm, config.initial_size, point.ratio);
        applied = 0;
      }
      for (; applied < point.removed; ++applied) engine->remove(sequence[applied]);

      const IterationStats iterations = measure_iterations(*engine, keys);
      const MemoryFootprint memory = measure_memory(*engine);
      for (std::uint64_t rep = 0; rep < config.repetitions; ++rep) {
        auto emit = [&](std::string metric, double value, std::string unit) {
          records.push_back(MetricRecord{
              std::string(to_string(algorithm)), std::string(to_string(config.scenario)),
              config.initial_size, point.removed, std::string(to_string(config.order)),
              point.ratio, std::move(metric), value, std::move(unit), config.seed, rep});
        };
        if (config.time_lookups) {
          const LatencyStats latency = measure_lookup_latency(*engine, keys, 1);
          emit("lookup_ns_median", latency.median_ns, "ns");
          emit("lookup_ns_p99", latency.p99_ns, "ns");
        }
        emit("ext_iter_mean", iterations.outer_mean, "iterations");
        emit("int_iter_mean", iterations.work_mean, "iterations");
        emit("memory_entries", static_cast<double>(memory.entries), "entries");
        emit("memory_bytes_est", static_cast<double>(memory.bytes), "bytes");
      }
    }
  }
  return records;
}

}  // namespace memento::bench
