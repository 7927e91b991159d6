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

#include "memento/hashing.hpp"

#include "memento/error.hpp"

namespace memento {

KeyDigest digest_key(std::span<const std::byte> bytes) noexcept {
  std::uint64_t h = kFnvOffsetBasis;
  for (std::byte byte : bytes) {
    h ^= static_cast<std::uint64_t>(byte);
    h *= kFnvPrime;
  }
  return KeyDigest{mix64(h)};
}

KeyDigest digest_key(std::string_view text) noexcept {
  return digest_key(std::as_bytes(std::span(text.data(), text.size())));
}

BucketId jump(KeyDigest key, std::uint64_t num_buckets) {
  if (num_buckets == 0) {
    throw Error(Errc::kInvalidArgument, "jump: bucket count must be positive");
  }
  if (num_buckets > kMaxBuckets) {
    throw Error(Errc::kOutOfRange, "jump: bucket count exceeds 2^31 - 1");
  }
  return jump_unchecked(key.value, static_cast<std::uint32_t>(num_buckets));
}

}  // namespace memento
