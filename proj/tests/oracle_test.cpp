#include <gtest/gtest.h>

#include <random>

#include "memento/oracle.hpp"
#include "memento/stats.hpp"

namespace memento::oracle {
namespace {

double figure(const PropertyReport& r, const std::string& name) {
  for (const auto& [k, v] : r.figures) {
    if (k == name) return v;
  }
  ADD_FAILURE() << "missing figure " << name;
  return 0.0;
}

TEST(EventLog, PrintsAndValidates) {
  const EventLog log({Event::init(10), Event::remove(9), Event::add()});
  EXPECT_EQ(log.to_string(), "init 10; remove 9; add");
  EXPECT_TRUE(log.is_valid());
  EXPECT_EQ(log.prefix(2).to_string(), "init 10; remove 9");

  EXPECT_FALSE(EventLog({Event::remove(1)}).is_valid());
  EXPECT_FALSE(EventLog({Event::init(3), Event::remove(3)}).is_valid());
  EXPECT_FALSE(EventLog({Event::init(3), Event::remove(1), Event::remove(1)}).is_valid());
  EXPECT_FALSE(EventLog({Event::init(1), Event::remove(0)}).is_valid());
  EXPECT_FALSE(EventLog({Event::init(2), Event::init(2)}).is_valid());
  EXPECT_THROW(EventLog({Event::init(0)}).validate(), Error);
}

TEST(NaiveModel, TracksTheSameStateAsTheEngine) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 1000; ++i) {
    const EventLog log = random_history(rng, 40, 30);
    ASSERT_TRUE(log.is_valid()) << log.to_string();
    const MementoHash engine = replay(log);
    const NaiveModel model(log);
    ASSERT_EQ(model.size(), engine.size());
    ASSERT_EQ(model.working_count(), engine.working_count());
    ASSERT_EQ(model.last_removed(), engine.last_removed());
    ASSERT_EQ(model.replacements(), engine.replacements()) << log.to_string();
  }
}

TEST(NaiveModel, WorkedChain) {
  const EventLog log({Event::init(10), Event::remove(9), Event::remove(5),
                      Event::remove(1), Event::remove(8)});
  const NaiveModel model(log);
  EXPECT_EQ(model.replacements(),
            (std::vector<Replacement>{{8, 6, 1}, {1, 7, 5}, {5, 8, 9}}));
}

TEST(NaiveModel, LookupAgreesWithEngine) {
  const auto report = equivalence_suite(300, 32, 20, 2000, 77);
  EXPECT_TRUE(report.passed) << report.to_json().dump();
  EXPECT_EQ(report.statistic, 0.0);
}

TEST(RandomHistory, RespectsLimits) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 2000; ++i) {
    const EventLog log = random_history(rng, 16, 12);
    ASSERT_LE(log.size(), 13u);
    const MementoHash m = replay(log);
    ASSERT_LE(m.size(), 16u);
  }
}

TEST(RandomRemovals, RemovesExactlyTheRequestedCount) {
  const MementoHash m = random_removals(1000, 650, 3);
  EXPECT_EQ(m.size(), 1000u);
  EXPECT_EQ(m.working_count(), 350u);
}

TEST(Properties, MinimalDisruptionOnSingleRemoval) {
  const EventLog log({Event::init(10), Event::remove(9), Event::remove(5)});
  const auto keys = stats::random_keys(20000, 1);
  const auto report = check_minimal_disruption(log, 1, keys);
  EXPECT_TRUE(report.passed) << report.to_json().dump();
}

TEST(Properties, MonotonicityOnSingleAdd) {
  const EventLog log({Event::init(20), Event::remove(3), Event::remove(11)});
  const auto keys = stats::random_keys(50000, 2);
  const auto report = check_monotonicity(log, keys);
  EXPECT_TRUE(report.passed) << report.to_json().dump();
}

TEST(Properties, HistorySuitePasses) {
  const auto result = history_suite(100, 64, 20, 5000, 5);
  EXPECT_TRUE(result.disruption.passed) << result.disruption.to_json().dump();
  EXPECT_TRUE(result.monotonicity.passed) << result.monotonicity.to_json().dump();
  EXPECT_GT(figure(result.disruption, "removal_steps"), 0.0);
  EXPECT_GT(figure(result.monotonicity, "add_steps"), 0.0);
}

TEST(Properties, BalanceAfterRandomRemovals) {
  const MementoHash m = random_removals(500, 100, 4);
  const auto report = check_balance(m, 500000, 4);
  EXPECT_TRUE(report.passed) << report.to_json().dump();
  EXPECT_EQ(figure(report, "keys_on_removed_buckets"), 0.0);
}

TEST(Properties, IterationBoundsAcrossGrid) {
  const double grid[] = {0.2, 0.5, 0.9};
  for (const auto& report : iteration_bounds_suite(1000, grid, 50000, 6)) {
    EXPECT_TRUE(report.passed) << report.to_json().dump();
  }
}

TEST(Properties, ExternalIterationsTrackLogRatio) {
  // tau is a sum of independent Bernoulli(1/j) over the removed range, so its
  // mean is close to H(n) - H(w) ~ ln(n/w).
  const MementoHash m = random_removals(1000, 900, 8);
  const auto report = check_iteration_bounds(m, 100000, 8);
  EXPECT_NEAR(figure(report, "tau_mean"), std::log(10.0), 0.05);
}

TEST(Properties, ReportJsonShape) {
  PropertyReport r;
  r.property = "balance";
  r.cases = 1;
  r.statistic_name = "chi_square";
  r.passed = false;
  r.figures = {{"working", 3.0}};
  r.reproduction = Reproduction{9, EventLog({Event::init(3)}), KeyDigest{255}};
  const auto j = r.to_json();
  EXPECT_EQ(j["property"], "balance");
  EXPECT_EQ(j["passed"], false);
  EXPECT_EQ(j["figures"]["working"], 3.0);
  EXPECT_EQ(j["reproduction"]["seed"], 9);
  EXPECT_EQ(j["reproduction"]["history"], "init 3");
  EXPECT_EQ(j["reproduction"]["key_hex"], "00000000000000ff");
}

}  // namespace
}  // namespace memento::oracle
