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

#include "memento/replacement_table.hpp"

#include <utility>

namespace memento {

bool ReplacementTable::insert(BucketId key, ReplacementValue value) {
  if (slots_.empty()) {
    rehash(kMinSlots);
  } else if ((size_ + 1) * 2 > slots_.size()) {
    rehash(slots_.size() * 2);
  }
  std::size_t i = home(key);
  while (slots_[i].key != kEmpty) {
    if (slots_[i].key == key) return false;
    i = (i + 1) & mask_;
  }
  slots_[i] = Slot{key, value};
  ++size_;
  return true;
}

std::optional<ReplacementValue> ReplacementTable::erase(BucketId key) {
  if (size_ == 0) return std::nullopt;
  std::size_t i = home(key);
  while (slots_[i].key != key) {
    if (slots_[i].key == kEmpty) return std::nullopt;
    i = (i + 1) & mask_;
  }
  const ReplacementValue removed = slots_[i].value;

  // Backward-shift: pull later members of the cluster into the hole when
  // their home position does not lie cyclically in (hole, j].
  std::size_t hole = i;
  std::size_t j = i;
  while (true) {
    j = (j + 1) & mask_;
    if (slots_[j].key == kEmpty) break;
    const std::size_t h = home(slots_[j].key);
    const bool stays = (hole <= j) ? (hole < h && h <= j) : (hole < h || h <= j);
    if (!stays) {
      slots_[hole] = slots_[j];
      hole = j;
    }
  }
  slots_[hole] = Slot{};
  --size_;

  if (slots_.size() > kMinSlots && size_ * 8 < slots_.size()) {
    rehash(slots_.size() / 2);
  }
  return removed;
}

void ReplacementTable::clear() noexcept {
  slots_.clear();
  mask_ = 0;
  size_ = 0;
}

void ReplacementTable::rehash(std::size_t new_slot_count) {
  std::vector<Slot> old = std::exchange(slots_, std::vector<Slot>(new_slot_count));
  mask_ = new_slot_count - 1;
  for (const Slot& s : old) {
    if (s.key == kEmpty) continue;
    std::size_t i = home(s.key);
    while (slots_[i].key != kEmpty) i = (i + 1) & mask_;
    slots_[i] = s;
  }
}

}  // namespace memento
