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

// MementoHash: jump consistent hashing extended with arbitrary bucket removal.
//
// The state is the triple (n, R, l): the b-array size, the replacement set and
// the last removed bucket. Removing a bucket b other than the tail records
// <b -> w-1, l> in R, where w is the working count before the removal; adding
// a bucket restores the last removed one (LIFO) or grows the tail when R is
// empty. Lookup starts from jump(key, n) and, while the current bucket has a
// replacement, rehashes into the range of buckets that were working when it
// was removed.
//
// Thread safety: lookups are const and may run concurrently; add/remove need
// exclusive access.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "memento/error.hpp"
#include "memento/hashing.hpp"
#include "memento/replacement_table.hpp"

namespace memento {

/// <removed -> replacer, previous>.
struct Replacement {
  BucketId removed = 0;
  BucketId replacer = 0;
  BucketId previous = 0;

  friend constexpr bool operator==(const Replacement&,
                                   const Replacement&) = default;
};

/// Loop counters of one lookup.
struct LookupTrace {
  /// Passes of the external loop (tau). Zero iff jump hit a working bucket.
  std::uint64_t external_iterations = 0;
  /// Replacement-chain hops taken by the internal loop, summed over passes.
  std::uint64_t internal_iterations_total = 0;
  /// Internal-loop steps including each pass's terminating check, i.e. the
  /// sum over passes of (1 + hops). Proxy for omega = tau * sigma.
  std::uint64_t product_work = 0;

  friend constexpr bool operator==(const LookupTrace&,
                                   const LookupTrace&) = default;
};

/// One step of a narrated lookup.
struct LookupStep {
  enum class Kind {
    kJump,     // bucket = jump(key, n), bound = n
    kRehash,   // bucket removed with w_b = bound; target = hash(key, b) mod w_b
    kHop,      // internal loop follows bucket -> target
    kStop,     // internal loop stops at bucket (replacer target < bound)
    kResult,   // bucket is working
  };
  Kind kind = Kind::kResult;
  BucketId bucket = 0;
  BucketId target = 0;
  std::uint64_t bound = 0;
};

class MementoHash {
 public:
  /// Requires initial_node_count >= 1.
  explicit MementoHash(std::uint64_t initial_node_count);

  /// Removes working bucket b. Throws Error with kOutOfRange, kBucketNotWorking
  /// or kLastWorkingBucket without touching the state.
  void remove(BucketId b);

  /// Restores the last removed bucket, or appends a bucket at the tail when no
  /// bucket is removed. Returns the bucket that became working.
  BucketId add();

  [[nodiscard]] BucketId lookup(KeyDigest key) const;
  [[nodiscard]] std::pair<BucketId, LookupTrace> lookup_traced(
      KeyDigest key) const;
  /// Lookup that records every jump, rehash, and chain hop.
  [[nodiscard]] std::vector<LookupStep> explain(KeyDigest key) const;

  /// b-array size n.
  [[nodiscard]] std::uint64_t size() const noexcept { return size_; }
  [[nodiscard]] std::uint64_t working_count() const noexcept {
    return size_ - table_.size();
  }
  [[nodiscard]] std::uint64_t replacement_count() const noexcept {
    return table_.size();
  }
  [[nodiscard]] BucketId last_removed() const noexcept { return last_removed_; }
  [[nodiscard]] bool is_working(BucketId b) const noexcept {
    return b < size_ && !table_.contains(b);
  }

  /// Replacements from the last removed bucket down the p-chain, i.e. newest
  /// removal first.
  [[nodiscard]] std::vector<Replacement> replacements() const;
  [[nodiscard]] const ReplacementTable& table() const noexcept { return table_; }

  /// Rebuilds a state from its parts, validating the p-chain. Entries may be
  /// in any order. Throws Error(kInconsistentSnapshot) on any violation.
  static MementoHash from_parts(std::uint64_t size, BucketId last_removed,
                                const std::vector<Replacement>& entries);

 private:
  MementoHash() = default;

  template <typename Observer>
  BucketId resolve(KeyDigest key, Observer& observer) const;

  std::uint64_t size_ = 0;
  BucketId last_removed_ = 0;
  ReplacementTable table_;
};

/// Two states are equal when n, l and R agree.
bool operator==(const MementoHash& a, const MementoHash& b);

/// Versioned text snapshot:
///   {"version":1,"n":<int>,"l":<int>,"replacements":[[b,c,p],...]}
std::string save_state(const MementoHash& state);
MementoHash load_state(std::string_view text);

}  // namespace memento
