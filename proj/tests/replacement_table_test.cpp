#include <gtest/gtest.h>

#include <random>
#include <unordered_map>

#include "memento/replacement_table.hpp"

namespace memento {
namespace {

TEST(ReplacementTable, EmptyLookups) {
  ReplacementTable t;
  EXPECT_TRUE(t.empty());
  EXPECT_EQ(t.find(0), nullptr);
  EXPECT_FALSE(t.erase(3).has_value());
}

TEST(ReplacementTable, InsertFindErase) {
  ReplacementTable t;
  EXPECT_TRUE(t.insert(5, {8, 9}));
  EXPECT_FALSE(t.insert(5, {1, 1}));
  ASSERT_NE(t.find(5), nullptr);
  EXPECT_EQ(*t.find(5), (ReplacementValue{8, 9}));
  EXPECT_EQ(t.erase(5), (ReplacementValue{8, 9}));
  EXPECT_FALSE(t.contains(5));
  EXPECT_EQ(t.size(), 0u);
}

TEST(ReplacementTable, LoadFactorStaysAtMostHalf) {
  ReplacementTable t;
  for (BucketId b = 0; b < 10000; ++b) {
    t.insert(b * 7919, {b, b});
    ASSERT_LE(2 * t.size(), t.slot_count());
  }
  for (BucketId b = 0; b < 10000; ++b) t.erase(b * 7919);
  EXPECT_LE(t.slot_count(), 16u);
}

TEST(ReplacementTable, MatchesUnorderedMapUnderRandomOps) {
  std::mt19937_64 rng(42);
  for (int round = 0; round < 20; ++round) {
    ReplacementTable t;
    std::unordered_map<BucketId, ReplacementValue> ref;
    // Small key universe forces collisions, clustering and backward shifts.
    const BucketId universe = 16 + static_cast<BucketId>(rng() % 512);
    for (int op = 0; op < 20000; ++op) {
      const auto key = static_cast<BucketId>(rng() % universe);
      switch (rng() % 3) {
        case 0: {
          const ReplacementValue v{static_cast<BucketId>(rng()), static_cast<BucketId>(rng())};
          ASSERT_EQ(t.insert(key, v), ref.emplace(key, v).second);
          break;
        }
        case 1: {
          const auto got = t.erase(key);
          const auto it = ref.find(key);
          ASSERT_EQ(got.has_value(), it != ref.end());
          if (got) {
            ASSERT_EQ(*got, it->second);
            ref.erase(it);
          }
          break;
        }
        default: {
          const auto* got = t.find(key);
          const auto it = ref.find(key);
          ASSERT_EQ(got != nullptr, it != ref.end());
          if (got) ASSERT_EQ(*got, it->second);
        }
      }
      ASSERT_EQ(t.size(), ref.size());
    }
    std::size_t visited = 0;
    t.for_each([&](BucketId k, ReplacementValue v) {
      ++visited;
      ASSERT_EQ(ref.at(k), v);
    });
    EXPECT_EQ(visited, ref.size());
  }
}

TEST(ReplacementTable, ClearResets) {
  ReplacementTable t;
  for (BucketId b = 0; b < 100; ++b) t.insert(b, {b, b});
  t.clear();
  EXPECT_TRUE(t.empty());
  EXPECT_FALSE(t.contains(10));
  EXPECT_TRUE(t.insert(10, {1, 2}));
}

}  // namespace
}  // namespace memento
