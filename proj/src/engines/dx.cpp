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

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace

DxEngine::DxEngine(CapacityConfig config)
    : capacity_(config.capacity), working_(config.working) {
  config.validate();
  bits_.assign((capacity_ + 63) / 64, 0);
  for (std::uint64_t b = 0; b < working_; ++b) bits_[b >> 6] |= 1ULL << (b & 63);
  removed_stack_.reserve(capacity_ - working_);
  for (std::uint64_t b = capacity_; b-- > working_;) {
    removed_stack_.push_back(static_cast<BucketId>(b));
  }
}

BucketId DxEngine::add() {
  if (removed_stack_.empty()) {
    throw Error(Errc::kCapacityExceeded,
                "all " + std::to_string(capacity_) + " buckets already working");
  }
  const BucketId b = removed_stack_.back();
  removed_stack_.pop_back();
  bits_[b >> 6] |= 1ULL << (b & 63);
  ++working_;
  return b;
}

void DxEngine::remove(BucketId b) {
  if (b >= capacity_) {
    throw Error(Errc::kOutOfRange, "bucket " + std::to_string(b) + " out of range");
  }
  if (!test(b)) {
    throw Error(Errc::kBucketNotWorking, "bucket not working: " + std::to_string(b));
  }
  if (working_ == 1) {
    throw Error(Errc::kLastWorkingBucket, "cannot remove the last working bucket");
  }
  bits_[b >> 6] &= ~(1ULL << (b & 63));
  removed_stack_.push_back(b);
  --working_;
}

template <bool kTraced>
EngineTrace DxEngine::resolve(KeyDigest key) const {
  EngineTrace trace;
  std::uint64_t seed = key.value;
  const std::uint64_t limit = probe_limit();
  BucketId b = 0;
  for (std::uint64_t probe = 0; probe < limit; ++probe) {
    seed += kGolden;
    b = static_cast<BucketId>(mix64(seed) % capacity_);
    if constexpr (kTraced) {
      ++trace.outer;
      ++trace.work;
    }
    if (test(b)) {
      trace.bucket = b;
      return trace;
    }
  }
  // Exhausted the probe budget: take the next working bucket cyclically.
  do {
    b = static_cast<BucketId>((b + 1) % capacity_);
    if constexpr (kTraced) ++trace.work;
  } while (!test(b));
  trace.bucket = b;
  return trace;
}

BucketId DxEngine::lookup(KeyDigest key) const { return resolve<false>(key).bucket; }

EngineTrace DxEngine::lookup_traced(KeyDigest key) const {
  return resolve<true>(key);
}

MemoryFootprint DxEngine::memory() const {
  return {capacity_, bits_.size() * sizeof(std::uint64_t) +
                         removed_stack_.capacity() * sizeof(BucketId)};
}

}  // namespace memento
