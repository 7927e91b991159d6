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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "memento/hashing.hpp"

namespace memento {

/// Value stored for a removed bucket b: the replacing bucket c (which is also
/// the working count right after b was removed) and the previously removed
/// bucket p.
struct ReplacementValue {
  BucketId replacer = 0;
  BucketId previous = 0;

  friend constexpr bool operator==(ReplacementValue,
                                   ReplacementValue) = default;
};

/// Open-addressing hash table keyed by removed bucket.
///
/// Linear probing over a power-of-two slot array, load factor kept at or
/// below one half, deletion by backward shift (no tombstones), so a probe
/// sequence for an absent key always ends at the first empty slot.
class ReplacementTable {
 public:
  struct Slot {
    BucketId key = kEmpty;
    ReplacementValue value;
  };

  static constexpr BucketId kEmpty = ~BucketId{0};

  ReplacementTable() = default;

  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  [[nodiscard]] bool empty() const noexcept { return size_ == 0; }
  [[nodiscard]] std::size_t slot_count() const noexcept {
    return slots_.size();
  }

  [[nodiscard]] const ReplacementValue* find(BucketId key) const noexcept {
    if (size_ == 0) return nullptr;
    std::size_t i = home(key);
    while (true) {
      const Slot& s = slots_[i];
      if (s.key == key) return &s.value;
      if (s.key == kEmpty) return nullptr;
      i = (i + 1) & mask_;
    }
  }

  [[nodiscard]] bool contains(BucketId key) const noexcept {
    return find(key) != nullptr;
  }

  /// Inserts a new entry. Returns false (and leaves the table untouched) if
  /// the key is already present.
  bool insert(BucketId key, ReplacementValue value);

  /// Removes and returns the entry for `key`, if any.
  std::optional<ReplacementValue> erase(BucketId key);

  void clear() noexcept;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (const Slot& s : slots_) {
      if (s.key != kEmpty) fn(s.key, s.value);
    }
  }

 private:
  static constexpr std::size_t kMinSlots = 8;

  [[nodiscard]] std::size_t home(BucketId key) const noexcept {
    return static_cast<std::size_t>(mix64(key)) & mask_;
  }

  void rehash(std::size_t new_slot_count);

  std::vector<Slot> slots_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace memento
