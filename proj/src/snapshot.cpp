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

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "json.hpp"
#include "memento/memento.hpp"

namespace memento {
namespace {

constexpr int kSnapshotVersion = 1;

[[noreturn]] void malformed(const std::string& why) {
  throw Error(Errc::kMalformedSnapshot, "malformed snapshot: " + why);
}

std::uint64_t read_unsigned(const nlohmann::json& v, const char* what,
                            std::uint64_t max) {
  if (!v.is_number_integer()) malformed(std::string(what) + " is not an integer");
  if (v.is_number_unsigned()) {
    const auto x = v.get<std::uint64_t>();
    if (x > max) malformed(std::string(what) + " out of range");
    return x;
  }
  const auto x = v.get<std::int64_t>();
  if (x < 0) malformed(std::string(what) + " is negative");
  if (static_cast<std::uint64_t>(x) > max) malformed(std::string(what) + " out of range");
  return static_cast<std::uint64_t>(x);
}

}  // namespace

std::string save_state(const MementoHash& state) {
  nlohmann::json entries = nlohmann::json::array();
  for (const Replacement& r : state.replacements()) {
    entries.push_back({r.removed, r.replacer, r.previous});
  }
  nlohmann::ordered_json doc;
  doc["version"] = kSnapshotVersion;
  doc["n"] = state.size();
  doc["l"] = state.last_removed();
  doc["replacements"] = std::move(entries);
  return doc.dump();
}

MementoHash load_state(std::string_view text) {
  const nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) malformed("not valid JSON");
  if (!doc.is_object()) malformed("top level is not an object");
  for (const char* field : {"version", "n", "l", "replacements"}) {
    if (!doc.contains(field)) malformed(std::string("missing field ") + field);
  }
  if (doc.size() != 4) malformed("unexpected fields");

  const auto version = read_unsigned(doc["version"], "version",
                                     std::numeric_limits<std::uint32_t>::max());
  if (version != kSnapshotVersion) {
    throw Error(Errc::kUnsupportedVersion,
                "unsupported snapshot version " + std::to_string(version));
  }
  const auto n = read_unsigned(doc["n"], "n", kMaxBuckets);
  const auto l = read_unsigned(doc["l"], "l", kMaxBuckets);

  const auto& list = doc["replacements"];
  if (!list.is_array()) malformed("replacements is not an array");
  std::vector<Replacement> entries;
  entries.reserve(list.size());
  for (const auto& item : list) {
    if (!item.is_array() || item.size() != 3) {
      malformed("replacement is not a [b,c,p] triple");
    }
    entries.push_back({
        static_cast<BucketId>(read_unsigned(item[0], "b", kMaxBuckets)),
        static_cast<BucketId>(read_unsigned(item[1], "c", kMaxBuckets)),
        static_cast<BucketId>(read_unsigned(item[2], "p", kMaxBuckets)),
    });
  }
  return MementoHash::from_parts(n, static_cast<BucketId>(l), entries);
}

}  // namespace memento
