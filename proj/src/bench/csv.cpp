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

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "memento/bench.hpp"

namespace memento::bench {
namespace {

constexpr std::string_view kHeader =
    "algorithm,scenario,w_initial,removed_count,removal_order,capacity_ratio,"
    "metric,value,unit,seed,repetition";
constexpr std::size_t kColumns = 11;

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

[[noreturn]] void bad_csv(const std::string& why) {
  throw Error(Errc::kInvalidArgument, "csv: " + why);
}

// Splits one logical RFC-4180 record starting at `pos`; advances `pos`.
std::vector<std::string> next_row(std::string_view text, std::size_t& pos) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool in_quotes = false;
  while (pos < text.size()) {
    const char c = text[pos++];
    if (in_quotes) {
      if (c == '"') {
        if (pos < text.size() && text[pos] == '"') {
          field += '"';
          ++pos;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"' && field.empty() && !quoted) {
      in_quotes = quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      quoted = false;
    } else if (c == '\r' && pos < text.size() && text[pos] == '\n') {
      ++pos;
      break;
    } else if (c == '\n') {
      break;
    } else {
      field += c;
    }
  }
  if (in_quotes) bad_csv("unterminated quoted field");
  fields.push_back(std::move(field));
  return fields;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    bad_csv(std::string("bad ") + what + " '" + s + "'");
  }
  return value;
}

}  // namespace

std::uint64_t emit_csv(std::span<const MetricRecord> records, std::ostream& out) {
  std::string text(kHeader);
  text += "\r\n";
  for (const MetricRecord& r : records) {
    text += quote(r.algorithm) + ',' + quote(r.scenario) + ',' +
            std::to_string(r.w_initial) + ',' + std::to_string(r.removed_count) + ',' +
            quote(r.removal_order) + ',' + format_double(r.capacity_ratio) + ',' +
            quote(r.metric) + ',' + format_double(r.value) + ',' + quote(r.unit) + ',' +
            std::to_string(r.seed) + ',' + std::to_string(r.repetition) + "\r\n";
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(Errc::kInvalidArgument, "csv: write failed");
  return text.size();
}

std::uint64_t emit_csv(std::span<const MetricRecord> records,
                       const std::filesystem::path& destination) {
  std::ofstream file(destination, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw Error(Errc::kInvalidArgument,
                "cannot open " + destination.string() + " for writing");
  }
  const auto bytes = emit_csv(records, file);
  file.close();
  if (!file) throw Error(Errc::kInvalidArgument, "failed writing " + destination.string());
  return bytes;
}

std::vector<MetricRecord> parse_csv(std::string_view text) {
  std::size_t pos = 0;
  const auto header = next_row(text, pos);
  std::string joined;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) joined += ',';
    joined += header[i];
  }
  if (joined != kHeader) bad_csv("unexpected header");

  std::vector<MetricRecord> records;
  while (pos < text.size()) {
    const auto f = next_row(text, pos);
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != kColumns) bad_csv("expected 11 columns");
    records.push_back(MetricRecord{
        f[0], f[1], parse_number<std::uint64_t>(f[2], "w_initial"),
        parse_number<std::uint64_t>(f[3], "removed_count"), f[4],
        parse_number<double>(f[5], "capacity_ratio"), f[6],
        parse_number<double>(f[7], "value"), f[8],
        parse_number<std::uint64_t>(f[9], "seed"),
        parse_number<std::uint64_t>(f[10], "repetition")});
  }
  return records;
}

}  // namespace memento::bench
