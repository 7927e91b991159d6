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

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "memento/oracle.hpp"
#include "memento/stats.hpp"

namespace memento::oracle {
namespace {

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + 1));
}

constexpr BucketId kNoBucket = ~BucketId{0};

// A lookup that trips the engine's corruption guard counts as landing nowhere,
// so the suites report it as a violation instead of aborting.
BucketId guarded_lookup(const MementoHash& state, KeyDigest key) {
  try {
    return state.lookup(key);
  } catch (const Error&) {
    return kNoBucket;
  }
}

// Greedily drops single events while the log stays valid and `fails` keeps
// holding. The init event and the final (failing) event are kept.
EventLog shrink(EventLog log, const std::function<bool(const EventLog&)>& fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 1; i + 1 < log.size(); ++i) {
      std::vector<Event> events = log.events();
      events.erase(events.begin() + static_cast<std::ptrdiff_t>(i));
      EventLog candidate(std::move(events));
      if (candidate.is_valid() && fails(candidate)) {
        log = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return log;
}

// True when applying the last event of `log` to the state built from the
// rest moves `key` in a way the event forbids.
bool step_violates(const EventLog& log, KeyDigest key) {
  MementoHash state = replay(log.prefix(log.size() - 1));
  const BucketId before = guarded_lookup(state, key);
  const Event& last = log.events().back();
  if (last.kind == Event::Kind::kRemove) {
    state.remove(static_cast<BucketId>(last.value));
    const BucketId after = guarded_lookup(state, key);
    return (before != after) != (before == last.value) || !state.is_working(after);
  }
  const BucketId added = state.add();
  const BucketId after = guarded_lookup(state, key);
  return before != after && after != added;
}

}  // namespace

EventLog random_history(std::mt19937_64& rng, std::uint64_t max_size,
                        std::size_t max_events) {
  if (max_size == 0) throw Error(Errc::kInvalidArgument, "max_size must be positive");
  const std::uint64_t n = 1 + stats::uniform_below(rng, max_size);
  EventLog log({Event::init(n)});
  NaiveModel model(log);
  const std::size_t events = stats::uniform_below(rng, max_events + 1);
  for (std::size_t i = 0; i < events; ++i) {
    const bool can_remove = model.working_count() >= 2;
    const bool can_add = !model.replacements().empty() || model.size() < max_size;
    bool remove = can_remove && (!can_add || stats::uniform_below(rng, 5) < 3);
    if (!remove && !can_add) break;
    if (remove) {
      BucketId b = 0;
      do {
        b = static_cast<BucketId>(stats::uniform_below(rng, model.size()));
      } while (!model.is_working(b));
      log.push(Event::remove(b));
      model.apply(Event::remove(b));
    } else {
      log.push(Event::add());
      model.apply(Event::add());
    }
  }
  return log;
}

MementoHash random_removals(std::uint64_t size, std::uint64_t removed,
                            std::uint64_t seed) {
  if (removed >= size) {
    throw Error(Errc::kInvalidArgument, "must leave at least one working bucket");
  }
  MementoHash state(size);
  const auto order = stats::random_permutation(size, seed);
  for (std::uint64_t i = 0; i < removed; ++i) state.remove(order[i]);
  return state;
}

PropertyReport equivalence_suite(std::uint64_t cases, std::uint64_t max_size,
                                 std::size_t max_events,
                                 std::uint64_t keys_per_case, std::uint64_t seed) {
  PropertyReport report;
  report.property = "equivalence";
  report.cases = cases;
  report.keys = keys_per_case;
  report.statistic_name = "mismatches";
  report.bound = 0.0;

  std::uint64_t mismatches = 0;
  std::uint64_t state_mismatches = 0;
  for (std::uint64_t c = 0; c < cases; ++c) {
    const std::uint64_t s = case_seed(seed, c);
    std::mt19937_64 rng(s);
    const EventLog log = random_history(rng, max_size, max_events);
    const MementoHash engine = replay(log);
    const NaiveModel model(log);

    if (engine.size() != model.size() ||
        engine.last_removed() != model.last_removed() ||
        engine.replacements() != model.replacements()) {
      ++state_mismatches;
      if (!report.reproduction) report.reproduction = Reproduction{s, log, std::nullopt};
    }
    const auto keys = stats::random_keys(keys_per_case, s);
    for (const KeyDigest key : keys) {
      if (guarded_lookup(engine, key) == model.lookup(key)) continue;
      ++mismatches;
      if (!report.reproduction || !report.reproduction->key) {
        auto fails = [key](const EventLog& l) {
          return guarded_lookup(replay(l), key) != NaiveModel(l).lookup(key);
        };
        report.reproduction = Reproduction{s, shrink(log, fails), key};
      }
    }
  }
  report.statistic = static_cast<double>(mismatches + state_mismatches);
  report.passed = mismatches == 0 && state_mismatches == 0;
  report.figures = {{"lookup_mismatches", static_cast<double>(mismatches)},
                    {"state_mismatches", static_cast<double>(state_mismatches)}};
  return report;
}

HistorySuiteResult history_suite(std::uint64_t cases, std::uint64_t max_size,
                                 std::size_t max_events,
                                 std::uint64_t keys_per_case, std::uint64_t seed) {
  HistorySuiteResult result;
  auto& dis = result.disruption;
  auto& mono = result.monotonicity;
  dis.property = "minimal_disruption";
  mono.property = "monotonicity";
  for (auto* r : {&dis, &mono}) {
    r->cases = cases;
    r->keys = keys_per_case;
    r->statistic_name = "violations";
    r->bound = 0.0;
  }

  std::uint64_t removal_steps = 0;
  std::uint64_t add_steps = 0;
  std::uint64_t dis_violations = 0;
  std::uint64_t mono_violations = 0;
  double moved_total = 0.0;
  double expected_total = 0.0;
  double variance_total = 0.0;
  std::uint64_t per_step_outliers = 0;

  std::vector<BucketId> before(keys_per_case);
  std::vector<BucketId> after(keys_per_case);
  for (std::uint64_t c = 0; c < cases; ++c) {
    const std::uint64_t s = case_seed(seed, c);
    std::mt19937_64 rng(s);
    const EventLog log = random_history(rng, max_size, max_events);
    const auto keys = stats::random_keys(keys_per_case, s);

    MementoHash state(log.events().front().value);
    for (std::size_t i = 0; i < keys.size(); ++i) before[i] = guarded_lookup(state, keys[i]);

    for (std::size_t step = 1; step < log.size(); ++step) {
      const Event& e = log.events()[step];
      if (e.kind == Event::Kind::kRemove) {
        const auto b = static_cast<BucketId>(e.value);
        state.remove(b);
        ++removal_steps;
        for (std::size_t i = 0; i < keys.size(); ++i) {
          after[i] = guarded_lookup(state, keys[i]);
          const bool changed = after[i] != before[i];
          if (changed == (before[i] == b) && state.is_working(after[i])) continue;
          ++dis_violations;
          if (!dis.reproduction) {
            const KeyDigest key = keys[i];
            auto fails = [key](const EventLog& l) { return step_violates(l, key); };
            dis.reproduction = Reproduction{s, shrink(log.prefix(step + 1), fails), key};
          }
        }
      } else {
        const BucketId added = state.add();
        ++add_steps;
        std::uint64_t moved = 0;
        for (std::size_t i = 0; i < keys.size(); ++i) {
          after[i] = guarded_lookup(state, keys[i]);
          if (after[i] == before[i]) continue;
          ++moved;
          if (after[i] == added) continue;
          ++mono_violations;
          if (!mono.reproduction) {
            const KeyDigest key = keys[i];
            auto fails = [key](const EventLog& l) { return step_violates(l, key); };
            mono.reproduction = Reproduction{s, shrink(log.prefix(step + 1), fails), key};
          }
        }
        const double p = 1.0 / static_cast<double>(state.working_count());
        const double k = static_cast<double>(keys.size());
        moved_total += static_cast<double>(moved);
        expected_total += k * p;
        variance_total += k * p * (1.0 - p);
        const double sd = std::sqrt(k * p * (1.0 - p));
        if (sd > 0.0 && std::abs(static_cast<double>(moved) - k * p) > 3.0 * sd) {
          ++per_step_outliers;
        }
      }
      std::swap(before, after);
    }
  }

  const double pooled_z =
      variance_total > 0.0 ? (moved_total - expected_total) / std::sqrt(variance_total)
                           : 0.0;
  dis.statistic = static_cast<double>(dis_violations);
  dis.passed = dis_violations == 0;
  dis.figures = {{"removal_steps", static_cast<double>(removal_steps)}};

  mono.statistic = static_cast<double>(mono_violations);
  mono.passed = mono_violations == 0 && std::abs(pooled_z) <= 3.0;
  mono.figures = {{"add_steps", static_cast<double>(add_steps)},
                  {"pooled_moved_z", pooled_z},
                  {"steps_outside_3_sigma", static_cast<double>(per_step_outliers)}};
  if (mono.passed || mono.reproduction) return result;
  mono.reproduction = Reproduction{seed, {}, std::nullopt};
  return result;
}

std::vector<PropertyReport> iteration_bounds_suite(
    std::uint64_t size, std::span<const double> removed_fractions,
    std::uint64_t key_count, std::uint64_t seed) {
  std::vector<PropertyReport> reports;
  for (std::size_t i = 0; i < removed_fractions.size(); ++i) {
    const double f = removed_fractions[i];
    const auto removed =
        static_cast<std::uint64_t>(std::llround(f * static_cast<double>(size)));
    const std::uint64_t s = case_seed(seed, i);
    const MementoHash state = random_removals(size, removed, s);
    auto report = check_iteration_bounds(state, key_count, s);
    report.detail = "n=" + std::to_string(size) + " removed=" + std::to_string(removed);
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace memento::oracle
