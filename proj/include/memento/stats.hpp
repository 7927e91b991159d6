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

// Small statistics toolkit for the property checks and the benchmark
// harness: seeded key samples, moments, chi-square, and percentiles.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "memento/hashing.hpp"

namespace memento::stats {

/// `count` uniform 64-bit digests drawn from mt19937_64 seeded with `seed`.
std::vector<KeyDigest> random_keys(std::uint64_t count, std::uint64_t seed);

/// Uniform draw in [0, bound) by rejection, independent of the standard
/// library's distribution implementations.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates permutation of 0..count-1.
std::vector<BucketId> random_permutation(std::uint64_t count, std::uint64_t seed);

struct Moments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;         // sample standard deviation (n - 1)
  double mean_se = 0.0;        // standard error of the mean
  double stddev_se = 0.0;      // delta-method standard error of stddev
};

/// Mean, sample standard deviation, and their standard errors. The stddev
/// standard error uses the fourth central moment, so it stays honest for
/// skewed data such as loop counts.
Moments moments(std::span<const double> values);

/// Pearson statistic of `counts` against a uniform expectation.
double chi_square_uniform(std::span<const std::uint64_t> counts);

/// Upper quantile of the chi-square distribution: P(X <= x) = probability.
double chi_square_quantile(double degrees_of_freedom, double probability);

/// Linear-interpolated percentile in [0, 100] of an unsorted sample.
double percentile(std::vector<double> values, double pct);

}  // namespace memento::stats
