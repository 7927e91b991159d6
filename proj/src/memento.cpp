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

#include "memento/memento.hpp"

#include <string>

namespace memento {
namespace {

struct NullObserver {
  void jump(BucketId, std::uint64_t) {}
  void rehash(BucketId, std::uint64_t, BucketId) {}
  void hop(BucketId, BucketId) {}
  void stop(BucketId, BucketId, std::uint64_t) {}
  void result(BucketId) {}
};

struct CountingObserver : NullObserver {
  LookupTrace trace;
  void rehash(BucketId, std::uint64_t, BucketId) {
    ++trace.external_iterations;
    ++trace.product_work;
  }
  void hop(BucketId, BucketId) {
    ++trace.internal_iterations_total;
    ++trace.product_work;
  }
};

struct RecordingObserver {
  std::vector<LookupStep> steps;
  void jump(BucketId b, std::uint64_t n) {
    steps.push_back({LookupStep::Kind::kJump, b, b, n});
  }
  void rehash(BucketId b, std::uint64_t wb, BucketId d) {
    steps.push_back({LookupStep::Kind::kRehash, b, d, wb});
  }
  void hop(BucketId d, BucketId u) {
    steps.push_back({LookupStep::Kind::kHop, d, u, 0});
  }
  void stop(BucketId d, BucketId u, std::uint64_t wb) {
    steps.push_back({LookupStep::Kind::kStop, d, u, wb});
  }
  void result(BucketId b) {
    steps.push_back({LookupStep::Kind::kResult, b, b, 0});
  }
};

[[noreturn]] void corrupt(const char* what) {
  throw Error(Errc::kCorruptState, what);
}

}  // namespace

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kInvalidArgument: return "invalid argument";
    case Errc::kOutOfRange: return "bucket out of range";
    case Errc::kBucketNotWorking: return "bucket not working";
    case Errc::kLastWorkingBucket: return "cannot remove the last working bucket";
    case Errc::kCapacityExceeded: return "capacity exceeded";
    case Errc::kUnsupportedOperation: return "unsupported operation";
    case Errc::kMalformedSnapshot: return "malformed snapshot";
    case Errc::kUnsupportedVersion: return "unsupported snapshot version";
    case Errc::kInconsistentSnapshot: return "inconsistent snapshot";
    case Errc::kCorruptState: return "internal state corruption";
  }
  return "unknown error";
}

MementoHash::MementoHash(std::uint64_t initial_node_count)
    : size_(initial_node_count),
      last_removed_(static_cast<BucketId>(initial_node_count)) {
  if (initial_node_count == 0) {
    throw Error(Errc::kInvalidArgument, "initial node count must be positive");
  }
  if (initial_node_count > kMaxBuckets) {
    throw Error(Errc::kCapacityExceeded, "initial node count exceeds 2^31 - 1");
  }
}

void MementoHash::remove(BucketId b) {
  if (b >= size_) {
    throw Error(Errc::kOutOfRange, "bucket " + std::to_string(b) +
                                       " out of range [0, " +
                                       std::to_string(size_) + ")");
  }
  if (table_.contains(b)) {
    throw Error(Errc::kBucketNotWorking,
                "bucket not working: " + std::to_string(b));
  }
  const std::uint64_t w = working_count();
  if (w == 1) {
    throw Error(Errc::kLastWorkingBucket,
                "cannot remove the last working bucket " + std::to_string(b));
  }
  if (b == size_ - 1 && table_.empty()) {
    --size_;
  } else {
    table_.insert(b, ReplacementValue{static_cast<BucketId>(w - 1),
                                      last_removed_});
  }
  last_removed_ = b;
}

BucketId MementoHash::add() {
  if (table_.empty()) {
    if (size_ >= kMaxBuckets) {
      throw Error(Errc::kCapacityExceeded, "b-array size at maximum");
    }
    const auto b = static_cast<BucketId>(size_);
    ++size_;
    last_removed_ = static_cast<BucketId>(size_);
    return b;
  }
  const BucketId b = last_removed_;
  const auto entry = table_.erase(b);
  if (!entry) corrupt("last removed bucket has no replacement");
  last_removed_ = entry->previous;
  return b;
}

template <typename Observer>
BucketId MementoHash::resolve(KeyDigest key, Observer& observer) const {
  BucketId b = jump_unchecked(key.value, static_cast<std::uint32_t>(size_));
  observer.jump(b, size_);
  if (table_.empty()) {
    observer.result(b);
    return b;
  }
  std::uint64_t passes = 0;
  for (const ReplacementValue* entry = table_.find(b); entry != nullptr;
       entry = table_.find(b)) {
    if (++passes > size_) corrupt("external loop exceeded iteration cap");
    const BucketId wb = entry->replacer;
    if (wb == 0) corrupt("replacement with empty working range");
    BucketId d = static_cast<BucketId>(keyed_hash(key, b) % wb);
    observer.rehash(b, wb, d);
    std::uint64_t hops = 0;
    for (const ReplacementValue* next = table_.find(d); next != nullptr;
         next = table_.find(d)) {
#ifndef MEMENTO_FAULT_INJECTION
      if (next->replacer < wb) {
        observer.stop(d, next->replacer, wb);
        break;
      }
#endif
      if (++hops > size_) corrupt("internal loop exceeded iteration cap");
      observer.hop(d, next->replacer);
      d = next->replacer;
    }
    b = d;
  }
  observer.result(b);
  return b;
}

BucketId MementoHash::lookup(KeyDigest key) const {
  NullObserver observer;
  return resolve(key, observer);
}

std::pair<BucketId, LookupTrace> MementoHash::lookup_traced(
    KeyDigest key) const {
  CountingObserver observer;
  const BucketId b = resolve(key, observer);
  return {b, observer.trace};
}

std::vector<LookupStep> MementoHash::explain(KeyDigest key) const {
  RecordingObserver observer;
  resolve(key, observer);
  return std::move(observer.steps);
}

std::vector<Replacement> MementoHash::replacements() const {
  std::vector<Replacement> out;
  out.reserve(table_.size());
  BucketId b = last_removed_;
  while (out.size() < table_.size()) {
    const ReplacementValue* v = table_.find(b);
    if (v == nullptr) corrupt("broken removal chain");
    out.push_back({b, v->replacer, v->previous});
    b = v->previous;
  }
  return out;
}

MementoHash MementoHash::from_parts(std::uint64_t size, BucketId last_removed,
                                    const std::vector<Replacement>& entries) {
  auto fail = [](const std::string& why) -> void {
    throw Error(Errc::kInconsistentSnapshot, why);
  };
  if (size == 0) fail("n must be positive");
  if (size > kMaxBuckets) fail("n exceeds 2^31 - 1");
  if (last_removed > size) fail("l exceeds n");
  if (entries.size() >= size) fail("no working bucket left");

  MementoHash state;
  state.size_ = size;
  state.last_removed_ = last_removed;
  for (const Replacement& e : entries) {
    if (e.removed >= size) {
      fail("removed bucket " + std::to_string(e.removed) + " out of range");
    }
    if (!state.table_.insert(e.removed, {e.replacer, e.previous})) {
      fail("duplicate entry for bucket " + std::to_string(e.removed));
    }
  }
  if (entries.empty()) {
    if (last_removed != size) fail("l must equal n when no bucket is removed");
    return state;
  }

  // Walk the removal stack from the newest entry. The k-th entry from the top
  // was removed with n - r + k working buckets, so its replacer is one less.
  const std::uint64_t r = entries.size();
  BucketId b = last_removed;
  for (std::uint64_t k = 0; k < r; ++k) {
    const ReplacementValue* v = state.table_.find(b);
    if (v == nullptr) {
      fail("removal chain from l breaks at bucket " + std::to_string(b));
    }
    const std::uint64_t expected = size - r + k;
    if (v->replacer != expected) {
      fail("bucket " + std::to_string(b) + " has replacer " +
           std::to_string(v->replacer) + ", expected " +
           std::to_string(expected));
    }
    if (k + 1 == r) {
      if (v->previous != size) {
        fail("first removal must point back to n");
      }
      if (b == size - 1) {
        fail("first removal of the tail bucket leaves no replacement");
      }
    }
    b = v->previous;
  }
  return state;
}

bool operator==(const MementoHash& a, const MementoHash& b) {
  if (a.size() != b.size() || a.last_removed() != b.last_removed() ||
      a.replacement_count() != b.replacement_count()) {
    return false;
  }
  bool same = true;
  a.table().for_each([&](BucketId key, const ReplacementValue& v) {
    const ReplacementValue* other = b.table().find(key);
    if (other == nullptr || !(*other == v)) same = false;
  });
  return same;
}

}  // namespace memento
