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

// Uniform engine interface over Memento and the three comparison algorithms
// (Jump, in-place Anchor, Dx), so the benchmark harness and property checks
// can drive any of them.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memento/hashing.hpp"
#include "memento/memento.hpp"

namespace memento {

enum class Algorithm { kMemento, kJump, kAnchor, kDx };

std::string_view to_string(Algorithm algorithm) noexcept;
/// Throws Error(kInvalidArgument) for unknown names.
Algorithm parse_algorithm(std::string_view name);

/// Resolved bucket plus loop counters. `outer` counts passes of the
/// engine's outer resolution loop (Memento tau, Anchor rehash passes, Dx
/// probes); `work` counts every bucket examined inside those loops.
struct EngineTrace {
  BucketId bucket = 0;
  std::uint64_t outer = 0;
  std::uint64_t work = 0;
};

/// `entries` is the implementation-independent size figure: replacements for
/// Memento, capacity slots for Anchor and Dx, the single counter for Jump.
/// `bytes` is an estimate from the container sizes actually held.
struct MemoryFootprint {
  std::uint64_t entries = 0;
  std::uint64_t bytes = 0;
};

/// Overall capacity `a` and initial working buckets `w` for the bounded
/// engines.
struct CapacityConfig {
  std::uint64_t capacity = 0;
  std::uint64_t working = 0;

  /// Throws Error(kInvalidArgument) unless capacity >= working >= 1.
  void validate() const;
};

class Engine {
 public:
  virtual ~Engine() = default;

  [[nodiscard]] virtual Algorithm algorithm() const noexcept = 0;
  virtual BucketId add() = 0;
  virtual void remove(BucketId b) = 0;
  [[nodiscard]] virtual BucketId lookup(KeyDigest key) const = 0;
  [[nodiscard]] virtual EngineTrace lookup_traced(KeyDigest key) const = 0;
  [[nodiscard]] virtual bool is_working(BucketId b) const = 0;
  [[nodiscard]] virtual std::uint64_t working_count() const noexcept = 0;
  /// Upper bound on buckets, for engines that have one.
  [[nodiscard]] virtual std::optional<std::uint64_t> capacity() const noexcept {
    return std::nullopt;
  }
  [[nodiscard]] virtual MemoryFootprint memory() const = 0;
};

class MementoEngine final : public Engine {
 public:
  explicit MementoEngine(std::uint64_t initial_node_count)
      : state_(initial_node_count) {}

  Algorithm algorithm() const noexcept override { return Algorithm::kMemento; }
  BucketId add() override { return state_.add(); }
  void remove(BucketId b) override { state_.remove(b); }
  BucketId lookup(KeyDigest key) const override { return state_.lookup(key); }
  EngineTrace lookup_traced(KeyDigest key) const override;
  bool is_working(BucketId b) const override { return state_.is_working(b); }
  std::uint64_t working_count() const noexcept override {
    return state_.working_count();
  }
  MemoryFootprint memory() const override;

  const MementoHash& state() const noexcept { return state_; }

 private:
  MementoHash state_;
};

/// Jump consistent hash over a b-array that only shrinks from the tail.
class JumpEngine final : public Engine {
 public:
  explicit JumpEngine(std::uint64_t initial_node_count);

  Algorithm algorithm() const noexcept override { return Algorithm::kJump; }
  BucketId add() override;
  /// Only the tail bucket n-1 may be removed; anything else throws
  /// Error(kUnsupportedOperation).
  void remove(BucketId b) override;
  void remove_tail();
  BucketId lookup(KeyDigest key) const override {
    return jump_unchecked(key.value, static_cast<std::uint32_t>(size_));
  }
  EngineTrace lookup_traced(KeyDigest key) const override {
    return {lookup(key), 0, 0};
  }
  bool is_working(BucketId b) const override { return b < size_; }
  std::uint64_t working_count() const noexcept override { return size_; }
  MemoryFootprint memory() const override { return {1, sizeof(size_)}; }

 private:
  std::uint64_t size_;
};

/// In-place AnchorHash: four integer arrays of length a plus the stack of
/// removed buckets.
class AnchorEngine final : public Engine {
 public:
  explicit AnchorEngine(CapacityConfig config);

  Algorithm algorithm() const noexcept override { return Algorithm::kAnchor; }
  /// Restores the most recently removed bucket; throws
  /// Error(kCapacityExceeded) when all a buckets are working.
  BucketId add() override;
  void remove(BucketId b) override;
  BucketId lookup(KeyDigest key) const override;
  EngineTrace lookup_traced(KeyDigest key) const override;
  bool is_working(BucketId b) const override {
    return b < capacity_ && removed_at_[b] == 0;
  }
  std::uint64_t working_count() const noexcept override { return working_; }
  std::optional<std::uint64_t> capacity() const noexcept override {
    return capacity_;
  }
  MemoryFootprint memory() const override;

 private:
  template <bool kTraced>
  EngineTrace resolve(KeyDigest key) const;

  std::uint64_t capacity_;
  std::uint64_t working_;
  // A: working count right after the bucket was removed, 0 while working.
  std::vector<BucketId> removed_at_;
  // W and L: the working set as a permutation (position <-> bucket).
  std::vector<BucketId> bucket_at_;
  std::vector<BucketId> position_of_;
  // K: successor followed when a removed bucket is hit during a rehash.
  std::vector<BucketId> successor_;
  std::vector<BucketId> removed_stack_;
};

/// DxHash: a bit-array of working buckets probed along a pseudo-random
/// sequence seeded by the key.
class DxEngine final : public Engine {
 public:
  explicit DxEngine(CapacityConfig config);

  Algorithm algorithm() const noexcept override { return Algorithm::kDx; }
  BucketId add() override;
  void remove(BucketId b) override;
  BucketId lookup(KeyDigest key) const override;
  EngineTrace lookup_traced(KeyDigest key) const override;
  bool is_working(BucketId b) const override {
    return b < capacity_ && test(b);
  }
  std::uint64_t working_count() const noexcept override { return working_; }
  std::optional<std::uint64_t> capacity() const noexcept override {
    return capacity_;
  }
  MemoryFootprint memory() const override;

  /// Probes before falling back to a linear scan for the next working bucket.
  [[nodiscard]] std::uint64_t probe_limit() const noexcept {
    return 64 * capacity_;
  }

 private:
  bool test(BucketId b) const noexcept {
    return (bits_[b >> 6] >> (b & 63)) & 1U;
  }
  template <bool kTraced>
  EngineTrace resolve(KeyDigest key) const;

  std::uint64_t capacity_;
  std::uint64_t working_;
  std::vector<std::uint64_t> bits_;
  std::vector<BucketId> removed_stack_;
};

/// Builds an engine with `initial_working` buckets. Anchor and Dx get a
/// capacity of capacity_ratio * initial_working.
std::unique_ptr<Engine> make_engine(Algorithm algorithm,
                                    std::uint64_t initial_working,
                                    double capacity_ratio = 10.0);

}  // namespace memento
