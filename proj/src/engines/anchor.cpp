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

#include <string>

#include "memento/engines.hpp"

namespace memento {
namespace {

// Salt for the first placement so it is independent of the per-bucket
// rehash keyed_hash(key, b).
constexpr std::uint64_t kAnchorSalt = 0xA0761D6478BD642FULL;

}  // namespace

AnchorEngine::AnchorEngine(CapacityConfig config)
    : capacity_(config.capacity), working_(config.working) {
  config.validate();
  removed_at_.assign(capacity_, 0);
  bucket_at_.resize(capacity_);
  position_of_.resize(capacity_);
  successor_.resize(capacity_);
  for (std::uint64_t b = 0; b < capacity_; ++b) {
    bucket_at_[b] = position_of_[b] = successor_[b] = static_cast<BucketId>(b);
  }
  removed_stack_.reserve(capacity_ - working_);
  for (std::uint64_t b = capacity_; b-- > working_;) {
    removed_stack_.push_back(static_cast<BucketId>(b));
    removed_at_[b] = static_cast<BucketId>(b);
  }
}

BucketId AnchorEngine::add() {
  if (removed_stack_.empty()) {
    throw Error(Errc::kCapacityExceeded,
                "all " + std::to_string(capacity_) + " buckets already working");
  }
  const BucketId b = removed_stack_.back();
  removed_stack_.pop_back();
  removed_at_[b] = 0;
  position_of_[bucket_at_[working_]] = static_cast<BucketId>(working_);
  bucket_at_[position_of_[b]] = b;
  successor_[b] = b;
  ++working_;
  return b;
}

void AnchorEngine::remove(BucketId b) {
  if (b >= capacity_) {
    throw Error(Errc::kOutOfRange, "bucket " + std::to_string(b) + " out of range");
  }
  if (removed_at_[b] != 0) {
    throw Error(Errc::kBucketNotWorking, "bucket not working: " + std::to_string(b));
  }
  if (working_ == 1) {
    throw Error(Errc::kLastWorkingBucket, "cannot remove the last working bucket");
  }
  removed_stack_.push_back(b);
  --working_;
  removed_at_[b] = static_cast<BucketId>(working_);
  const BucketId moved = bucket_at_[working_];
  bucket_at_[position_of_[b]] = moved;
  position_of_[moved] = position_of_[b];
  successor_[b] = moved;
}

template <bool kTraced>
EngineTrace AnchorEngine::resolve(KeyDigest key) const {
  EngineTrace trace;
  BucketId b = static_cast<BucketId>(mix64(key.value ^ kAnchorSalt) % capacity_);
  while (removed_at_[b] > 0) {
    const BucketId limit = removed_at_[b];
    BucketId h = static_cast<BucketId>(keyed_hash(key, b) % limit);
    if constexpr (kTraced) {
      ++trace.outer;
      ++trace.work;
    }
    while (removed_at_[h] >= limit) {
      h = successor_[h];
      if constexpr (kTraced) ++trace.work;
    }
    b = h;
  }
  trace.bucket = b;
  return trace;
}

BucketId AnchorEngine::lookup(KeyDigest key) const {
  return resolve<false>(key).bucket;
}

EngineTrace AnchorEngine::lookup_traced(KeyDigest key) const {
  return resolve<true>(key);
}

MemoryFootprint AnchorEngine::memory() const {
  return {capacity_, 4 * capacity_ * sizeof(BucketId) +
                         removed_stack_.capacity() * sizeof(BucketId)};
}

}  // namespace memento
