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

#include "memento/stats.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "memento/error.hpp"

namespace memento::stats {

std::vector<KeyDigest> random_keys(std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<KeyDigest> keys(count);
  for (auto& k : keys) k.value = rng();
  return keys;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw Error(Errc::kInvalidArgument, "uniform_below: empty range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

std::vector<BucketId> random_permutation(std::uint64_t count, std::uint64_t seed) {
  std::vector<BucketId> out(count);
  for (std::uint64_t i = 0; i < count; ++i) out[i] = static_cast<BucketId>(i);
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = count; i > 1; --i) {
    std::swap(out[i - 1], out[uniform_below(rng, i)]);
  }
  return out;
}

Moments moments(std::span<const double> values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) return m;
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / static_cast<double>(values.size());
  if (values.size() < 2) return m;

  double m2 = 0.0;
  double m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    const double d2 = d * d;
    m2 += d2;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(values.size());
  const double variance = m2 / (n - 1.0);
  m.stddev = std::sqrt(variance);
  m.mean_se = m.stddev / std::sqrt(n);
  const double pop_var = m2 / n;
  const double kurt_term = m4 / n - pop_var * pop_var;
  if (m.stddev > 0.0 && kurt_term > 0.0) {
    m.stddev_se = std::sqrt(kurt_term / n) / (2.0 * m.stddev);
  }
  return m;
}

double chi_square_uniform(std::span<const std::uint64_t> counts) {
  if (counts.empty()) return 0.0;
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  const double expected = total / static_cast<double>(counts.size());
  if (expected == 0.0) return 0.0;
  double chi = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  return chi;
}

double chi_square_quantile(double degrees_of_freedom, double probability) {
  if (degrees_of_freedom <= 0.0) return 0.0;
  boost::math::chi_squared dist(degrees_of_freedom);
  return boost::math::quantile(dist, probability);
}

double percentile(std::vector<double> values, double pct) {
  if (values.empty()) throw Error(Errc::kInvalidArgument, "percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double rank = std::clamp(pct, 0.0, 100.0) / 100.0 *
                      static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = static_cast<std::size_t>(std::ceil(rank));
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + (values[hi] - values[lo]) * frac;
}

}  // namespace memento::stats
