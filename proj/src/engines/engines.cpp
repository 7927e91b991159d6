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
#include <string>

#include "memento/engines.hpp"

namespace memento {

std::string_view to_string(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::kMemento: return "memento";
    case Algorithm::kJump: return "jump";
    case Algorithm::kAnchor: return "anchor";
    case Algorithm::kDx: return "dx";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "memento") return Algorithm::kMemento;
  if (name == "jump") return Algorithm::kJump;
  if (name == "anchor") return Algorithm::kAnchor;
  if (name == "dx") return Algorithm::kDx;
  throw Error(Errc::kInvalidArgument,
              "unknown algorithm '" + std::string(name) + "'");
}

void CapacityConfig::validate() const {
  if (working == 0) {
    throw Error(Errc::kInvalidArgument, "working bucket count must be positive");
  }
  if (capacity < working) {
    throw Error(Errc::kInvalidArgument,
                "capacity " + std::to_string(capacity) +
                    " below working count " + std::to_string(working));
  }
  if (capacity > kMaxBuckets) {
    throw Error(Errc::kCapacityExceeded, "capacity exceeds 2^31 - 1");
  }
}

EngineTrace MementoEngine::lookup_traced(KeyDigest key) const {
  const auto [bucket, trace] = state_.lookup_traced(key);
  return {bucket, trace.external_iterations, trace.product_work};
}

MemoryFootprint MementoEngine::memory() const {
  // n and l plus the slot array of the replacement table.
  return {state_.replacement_count(),
          2 * sizeof(std::uint64_t) +
              state_.table().slot_count() * sizeof(ReplacementTable::Slot)};
}

JumpEngine::JumpEngine(std::uint64_t initial_node_count)
    : size_(initial_node_count) {
  if (size_ == 0) {
    throw Error(Errc::kInvalidArgument, "initial node count must be positive");
  }
  if (size_ > kMaxBuckets) {
    throw Error(Errc::kCapacityExceeded, "initial node count exceeds 2^31 - 1");
  }
}

BucketId JumpEngine::add() {
  if (size_ >= kMaxBuckets) {
    throw Error(Errc::kCapacityExceeded, "b-array size at maximum");
  }
  return static_cast<BucketId>(size_++);
}

void JumpEngine::remove(BucketId b) {
  if (b >= size_) {
    throw Error(Errc::kOutOfRange, "bucket " + std::to_string(b) + " out of range");
  }
  if (b != size_ - 1) {
    throw Error(Errc::kUnsupportedOperation,
                "jump can only remove the tail bucket " +
                    std::to_string(size_ - 1) + ", not " + std::to_string(b));
  }
  remove_tail();
}

void JumpEngine::remove_tail() {
  if (size_ == 1) {
    throw Error(Errc::kLastWorkingBucket, "cannot remove the last working bucket");
  }
  --size_;
}

std::unique_ptr<Engine> make_engine(Algorithm algorithm,
                                    std::uint64_t initial_working,
                                    double capacity_ratio) {
  auto bounded = [&]() {
    if (!(capacity_ratio >= 1.0)) {
      throw Error(Errc::kInvalidArgument, "capacity ratio must be >= 1");
    }
    CapacityConfig config{
        static_cast<std::uint64_t>(
            std::llround(capacity_ratio * static_cast<double>(initial_working))),
        initial_working};
    config.validate();
    return config;
  };
  switch (algorithm) {
    case Algorithm::kMemento:
      return std::make_unique<MementoEngine>(initial_working);
    case Algorithm::kJump:
      return std::make_unique<JumpEngine>(initial_working);
    case Algorithm::kAnchor:
      return std::make_unique<AnchorEngine>(bounded());
    case Algorithm::kDx:
      return std::make_unique<DxEngine>(bounded());
  }
  throw Error(Errc::kInvalidArgument, "unknown algorithm");
}

}  // namespace memento
