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

// Reference model and property checks for MementoHash.
//
// NaiveModel replays an EventLog with a plain removal stack and linear
// scans: no hash table, no p-links, and the internal-loop condition phrased
// as "d was removed no later than b" instead of the numeric u >= w_b test.
// It is the arbiter the fast engine is compared against.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "memento/hashing.hpp"
#include "memento/memento.hpp"

namespace memento::oracle {

struct Event {
  enum class Kind { kInit, kRemove, kAdd };
  Kind kind = Kind::kAdd;
  std::uint64_t value = 0;  // node count for kInit, bucket for kRemove

  static Event init(std::uint64_t n) { return {Kind::kInit, n}; }
  static Event remove(BucketId b) { return {Kind::kRemove, b}; }
  static Event add() { return {Kind::kAdd, 0}; }

  friend bool operator==(const Event&, const Event&) = default;
};

/// Full mutation history. Valid when it starts with exactly one Init and
/// every prefix is a legal history.
class EventLog {
 public:
  EventLog() = default;
  explicit EventLog(std::vector<Event> events) : events_(std::move(events)) {}

  [[nodiscard]] const std::vector<Event>& events() const noexcept { return events_; }
  [[nodiscard]] std::size_t size() const noexcept { return events_.size(); }
  void push(Event e) { events_.push_back(e); }
  [[nodiscard]] EventLog prefix(std::size_t count) const;

  /// Throws Error(kInvalidArgument) when the log is not valid.
  void validate() const;
  [[nodiscard]] bool is_valid() const noexcept;

  /// Compact form such as "init 10; remove 9; remove 5; add".
  [[nodiscard]] std::string to_string() const;

 private:
  std::vector<Event> events_;
};

/// Applies every event of `log` to a fresh MementoHash.
MementoHash replay(const EventLog& log);

class NaiveModel {
 public:
  /// Throws Error(kInvalidArgument) if the log is invalid.
  explicit NaiveModel(const EventLog& log);

  /// Returns false (leaving the model unchanged) if the event is illegal.
  bool apply(const Event& e);

  [[nodiscard]] BucketId lookup(KeyDigest key) const;

  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
  [[nodiscard]] std::uint64_t working_count() const noexcept {
    return size_ - stack_.size();
  }
  [[nodiscard]] BucketId last_removed() const noexcept;
  /// Replacements newest first, in the same shape MementoHash reports.
  [[nodiscard]] std::vector<Replacement> replacements() const;
  [[nodiscard]] bool is_working(BucketId b) const noexcept;

 private:
  struct Removal {
    BucketId bucket;
    std::uint64_t working_after;
  };

  // Index in the removal stack (0 = oldest), or -1.
  [[nodiscard]] std::int64_t position(BucketId b) const noexcept;

  std::uint64_t size_ = 0;
  std::vector<Removal> stack_;
};

BucketId naive_lookup(const EventLog& log, KeyDigest key);

struct Reproduction {
  std::uint64_t seed = 0;
  EventLog history;
  std::optional<KeyDigest> key;
};

struct PropertyReport {
  std::string property;
  std::uint64_t cases = 0;
  std::uint64_t keys = 0;
  std::string statistic_name;
  double statistic = 0.0;
  double bound = 0.0;
  bool passed = true;
  std::string detail;
  /// Secondary observed figures, e.g. moved fractions or z-scores.
  std::vector<std::pair<std::string, double>> figures;
  std::optional<Reproduction> reproduction;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Removes working bucket `b` from replay(history) and checks that the keys
/// whose bucket changed are exactly the keys that were on `b`.
PropertyReport check_minimal_disruption(const EventLog& history, BucketId b,
                                        std::span<const KeyDigest> keys);

/// Calls add() on replay(history) and checks every moved key lands on the
/// returned bucket, with the moved fraction within 3 sigma of 1/w_new.
PropertyReport check_monotonicity(const EventLog& history,
                                  std::span<const KeyDigest> keys);

/// Every working bucket within k/w +- 6 sqrt(k/w) and the chi-square
/// statistic below its 99.9th percentile.
PropertyReport check_balance(const MementoHash& state, std::uint64_t key_count,
                             std::uint64_t seed);

/// Sample mean of tau <= 1 + ln(n/w) + 3 SE, stddev of tau <= sqrt(ln(n/w)) +
/// 3 SE, mean inner-loop work <= (1 + ln(n/w))^2 + 3 SE, and its stddev
/// within (1 + ln(n/w))^(3/2) + 3 SE.
PropertyReport check_iteration_bounds(const MementoHash& state,
                                      std::uint64_t key_count,
                                      std::uint64_t seed);

/// Random valid history: Init with n in [1, max_size] followed by up to
/// max_events removals and additions, never growing past max_size.
EventLog random_history(std::mt19937_64& rng, std::uint64_t max_size,
                        std::size_t max_events);

/// State with `removed` buckets of init(size) removed in a seeded random order.
MementoHash random_removals(std::uint64_t size, std::uint64_t removed,
                            std::uint64_t seed);

// Randomized suites, deterministic in their seed.

PropertyReport equivalence_suite(std::uint64_t cases, std::uint64_t max_size,
                                 std::size_t max_events,
                                 std::uint64_t keys_per_case, std::uint64_t seed);

struct HistorySuiteResult {
  PropertyReport disruption;
  PropertyReport monotonicity;
};

/// Walks random histories step by step; every removal is checked for
/// minimal disruption and every addition for monotonicity.
HistorySuiteResult history_suite(std::uint64_t cases, std::uint64_t max_size,
                                 std::size_t max_events,
                                 std::uint64_t keys_per_case, std::uint64_t seed);

/// One iteration-bounds report per removal fraction of init(size), removals
/// in seeded random order.
std::vector<PropertyReport> iteration_bounds_suite(
    std::uint64_t size, std::span<const double> removed_fractions,
    std::uint64_t key_count, std::uint64_t seed);

}  // namespace memento::oracle
