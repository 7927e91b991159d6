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

// Hashing primitives shared by every engine: key digestion, the splitmix64
// finalizer, the keyed rehash used inside the Memento lookup loop, and
// Lamping-Veach jump consistent hashing.
//
// All functions are pure; the exact constants are fixed so that independent
// implementations of the library resolve every key to the same bucket.

#include <cstdint>
#include <span>
#include <string_view>

namespace memento {

/// 64-bit digest of an arbitrary byte-string key.
struct KeyDigest {
  std::uint64_t value = 0;

  friend constexpr bool operator==(KeyDigest, KeyDigest) = default;
};

/// Index of a bucket in the b-array.
using BucketId = std::uint32_t;

/// Largest b-array size any engine accepts. Jump computes candidates in a
/// signed 32-bit range, so sizes stay below 2^31.
inline constexpr std::uint64_t kMaxBuckets = (std::uint64_t{1} << 31) - 1;

inline constexpr std::uint64_t kFnvOffsetBasis = 0xCBF29CE484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;
inline constexpr std::uint64_t kJumpMultiplier = 2862933555777941757ULL;

/// splitmix64 finalizer. A bijection on 64-bit values.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/// FNV-1a 64 over the bytes, then mix64.
KeyDigest digest_key(std::span<const std::byte> bytes) noexcept;
KeyDigest digest_key(std::string_view text) noexcept;

/// Rehash of `key` for the removed bucket `b`: mix64(key ^ mix64(b)).
constexpr std::uint64_t keyed_hash(KeyDigest key, BucketId b) noexcept {
  return mix64(key.value ^ mix64(b));
}

/// Unchecked jump consistent hash; requires num_buckets >= 1.
constexpr BucketId jump_unchecked(std::uint64_t key,
                                  std::uint32_t num_buckets) noexcept {
  std::int64_t b = -1;
  std::int64_t j = 0;
  while (j < static_cast<std::int64_t>(num_buckets)) {
    b = j;
    key = key * kJumpMultiplier + 1;
    j = static_cast<std::int64_t>(
        static_cast<double>(b + 1) *
        (static_cast<double>(std::int64_t{1} << 31) /
         static_cast<double>((key >> 33) + 1)));
  }
  return static_cast<BucketId>(b);
}

/// Jump consistent hash. Throws std::invalid_argument when num_buckets is 0
/// or above kMaxBuckets.
BucketId jump(KeyDigest key, std::uint64_t num_buckets);

}  // namespace memento
