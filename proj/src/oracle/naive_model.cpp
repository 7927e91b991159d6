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

#include "memento/oracle.hpp"

namespace memento::oracle {

EventLog EventLog::prefix(std::size_t count) const {
  const auto end = events_.begin() +
                   static_cast<std::ptrdiff_t>(std::min(count, events_.size()));
  return EventLog(std::vector<Event>(events_.begin(), end));
}

void EventLog::validate() const {
  if (events_.empty() || events_.front().kind != Event::Kind::kInit) {
    throw Error(Errc::kInvalidArgument, "event log must start with init");
  }
  // The naive model performs the legality checks event by event.
  NaiveModel model(EventLog({events_.front()}));
  for (std::size_t i = 1; i < events_.size(); ++i) {
    if (!model.apply(events_[i])) {
      throw Error(Errc::kInvalidArgument,
                  "event " + std::to_string(i) + " is illegal in: " + to_string());
    }
  }
}

bool EventLog::is_valid() const noexcept {
  try {
    validate();
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string EventLog::to_string() const {
  std::string out;
  for (const Event& e : events_) {
    if (!out.empty()) out += "; ";
    switch (e.kind) {
      case Event::Kind::kInit: out += "init " + std::to_string(e.value); break;
      case Event::Kind::kRemove: out += "remove " + std::to_string(e.value); break;
      case Event::Kind::kAdd: out += "add"; break;
    }
  }
  return out;
}

MementoHash replay(const EventLog& log) {
  if (log.events().empty() || log.events().front().kind != Event::Kind::kInit) {
    throw Error(Errc::kInvalidArgument, "event log must start with init");
  }
  MementoHash state(log.events().front().value);
  for (std::size_t i = 1; i < log.size(); ++i) {
    const Event& e = log.events()[i];
    switch (e.kind) {
      case Event::Kind::kInit:
        throw Error(Errc::kInvalidArgument, "init may only appear first");
      case Event::Kind::kRemove:
        state.remove(static_cast<BucketId>(e.value));
        break;
      case Event::Kind::kAdd:
        state.add();
        break;
    }
  }
  return state;
}

NaiveModel::NaiveModel(const EventLog& log) {
  const auto& events = log.events();
  if (events.empty() || events.front().kind != Event::Kind::kInit ||
      events.front().value == 0 || events.front().value > kMaxBuckets) {
    throw Error(Errc::kInvalidArgument, "event log must start with init n >= 1");
  }
  size_ = events.front().value;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (!apply(events[i])) {
      throw Error(Errc::kInvalidArgument,
                  "illegal event " + std::to_string(i) + " in: " + log.to_string());
    }
  }
}

std::int64_t NaiveModel::position(BucketId b) const noexcept {
  for (std::size_t i = 0; i < stack_.size(); ++i) {
    if (stack_[i].bucket == b) return static_cast<std::int64_t>(i);
  }
  return -1;
}

bool NaiveModel::is_working(BucketId b) const noexcept {
  return b < size_ && position(b) < 0;
}

bool NaiveModel::apply(const Event& e) {
  switch (e.kind) {
    case Event::Kind::kInit:
      return false;
    case Event::Kind::kRemove: {
      if (e.value >= size_) return false;
      const auto b = static_cast<BucketId>(e.value);
      if (!is_working(b) || working_count() < 2) return false;
      if (stack_.empty() && b == size_ - 1) {
        --size_;
      } else {
        stack_.push_back({b, working_count() - 1});
      }
      return true;
    }
    case Event::Kind::kAdd:
      if (stack_.empty()) {
        if (size_ >= kMaxBuckets) return false;
        ++size_;
      } else {
        stack_.pop_back();
      }
      return true;
  }
  return false;
}

BucketId NaiveModel::last_removed() const noexcept {
  return stack_.empty() ? static_cast<BucketId>(size_) : stack_.back().bucket;
}

std::vector<Replacement> NaiveModel::replacements() const {
  std::vector<Replacement> out;
  for (std::size_t i = stack_.size(); i-- > 0;) {
    const BucketId previous =
        i == 0 ? static_cast<BucketId>(size_) : stack_[i - 1].bucket;
    out.push_back({stack_[i].bucket,
                   static_cast<BucketId>(stack_[i].working_after), previous});
  }
  return out;
}

BucketId NaiveModel::lookup(KeyDigest key) const {
  BucketId b = jump(key, size_);
  // A removed bucket b at stack index i sends the key into the buckets that
  // were working right after it left; chains are followed only through
  // buckets removed no later than b.
  for (std::int64_t i = position(b); i >= 0; i = position(b)) {
    const std::uint64_t range = stack_[static_cast<std::size_t>(i)].working_after;
    BucketId d = static_cast<BucketId>(keyed_hash(key, b) % range);
    for (std::int64_t j = position(d); j >= 0 && j <= i; j = position(d)) {
      d = static_cast<BucketId>(stack_[static_cast<std::size_t>(j)].working_after);
    }
    b = d;
  }
  return b;
}

BucketId naive_lookup(const EventLog& log, KeyDigest key) {
  return NaiveModel(log).lookup(key);
}

}  // namespace memento::oracle
