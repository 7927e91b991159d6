#include <gtest/gtest.h>

#include <functional>
#include <random>
#include <vector>

#include "memento/memento.hpp"

namespace memento {
namespace {

using Kind = LookupStep::Kind;

struct Accessors {
  std::uint64_t n, w, r;
  BucketId l;
  friend bool operator==(const Accessors&, const Accessors&) = default;
};

Accessors accessors(const MementoHash& m) {
  return {m.size(), m.working_count(), m.replacement_count(), m.last_removed()};
}

std::vector<Replacement> sorted(std::vector<Replacement> v) {
  std::sort(v.begin(), v.end(),
            [](const Replacement& a, const Replacement& b) { return a.removed < b.removed; });
  return v;
}

MementoHash six_minus_035() {
  MementoHash m(6);
  m.remove(0);
  m.remove(3);
  m.remove(5);
  return m;
}

KeyDigest find_key(const std::function<bool(KeyDigest)>& pred) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 1000000; ++i) {
    const KeyDigest k{rng()};
    if (pred(k)) return k;
  }
  ADD_FAILURE() << "no key found";
  return {};
}

TEST(Memento, InitState) {
  MementoHash m(10);
  EXPECT_EQ(accessors(m), (Accessors{10, 10, 0, 10}));
  EXPECT_TRUE(m.replacements().empty());
}

TEST(Memento, WorkedRemovalSequence) {
  MementoHash m(10);
  m.remove(9);
  EXPECT_EQ(accessors(m), (Accessors{9, 9, 0, 9}));
  m.remove(5);
  EXPECT_EQ(accessors(m), (Accessors{9, 8, 1, 5}));
  EXPECT_EQ(m.replacements(), (std::vector<Replacement>{{5, 8, 9}}));
  m.remove(1);
  EXPECT_EQ(accessors(m), (Accessors{9, 7, 2, 1}));
  EXPECT_EQ(m.replacements(), (std::vector<Replacement>{{1, 7, 5}, {5, 8, 9}}));

  // Removing a replacing bucket chains 5 -> 8 -> 6.
  m.remove(8);
  EXPECT_EQ(accessors(m), (Accessors{9, 6, 3, 8}));
  EXPECT_EQ(m.replacements(),
            (std::vector<Replacement>{{8, 6, 1}, {1, 7, 5}, {5, 8, 9}}));
  for (BucketId b : {0u, 2u, 3u, 4u, 6u, 7u}) EXPECT_TRUE(m.is_working(b)) << b;
  for (BucketId b : {1u, 5u, 8u, 9u}) EXPECT_FALSE(m.is_working(b)) << b;
}

TEST(Memento, ReplacingWithItself) {
  MementoHash m(3);
  m.remove(0);
  m.remove(1);
  EXPECT_EQ(sorted(m.replacements()), (std::vector<Replacement>{{0, 2, 3}, {1, 1, 0}}));
  EXPECT_EQ(m.working_count(), 1u);
}

TEST(Memento, AddRestoresInReverseOrder) {
  MementoHash m(10);
  for (BucketId b : {9u, 5u, 1u, 8u}) m.remove(b);
  EXPECT_EQ(m.add(), 8u);
  EXPECT_EQ(accessors(m), (Accessors{9, 7, 2, 1}));
  EXPECT_EQ(m.add(), 1u);
  EXPECT_EQ(accessors(m), (Accessors{9, 8, 1, 5}));
  EXPECT_EQ(m.add(), 5u);
  EXPECT_EQ(accessors(m), (Accessors{9, 9, 0, 9}));
  EXPECT_EQ(m.add(), 9u);
  EXPECT_EQ(m.add(), 10u);
  EXPECT_EQ(accessors(m), (Accessors{11, 11, 0, 11}));
}

TEST(Memento, RemoveThenAddIsIdentity) {
  std::mt19937_64 rng(1);
  for (int round = 0; round < 300; ++round) {
    MementoHash m(1 + rng() % 50);
    for (int i = 0; i < 10 && m.working_count() > 1; ++i) {
      BucketId b;
      do b = static_cast<BucketId>(rng() % m.size()); while (!m.is_working(b));
      m.remove(b);
    }
    const MementoHash before = m;
    if (m.working_count() < 2) continue;
    BucketId b;
    do b = static_cast<BucketId>(rng() % m.size()); while (!m.is_working(b));
    m.remove(b);
    ASSERT_EQ(m.add(), b);
    ASSERT_TRUE(m == before);
  }
}

TEST(Memento, RejectedOperationsLeaveStateUnchanged) {
  MementoHash m(4);
  m.remove(1);
  const MementoHash before = m;
  auto expect_code = [&](auto&& op, Errc code) {
    try {
      op();
      ADD_FAILURE() << "expected error";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
    EXPECT_TRUE(m == before);
  };
  expect_code([&] { m.remove(1); }, Errc::kBucketNotWorking);
  expect_code([&] { m.remove(4); }, Errc::kOutOfRange);
  expect_code([&] { m.remove(1u << 31); }, Errc::kOutOfRange);

  MementoHash single(1);
  try {
    single.remove(0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLastWorkingBucket);
  }
  EXPECT_EQ(single.working_count(), 1u);

  EXPECT_THROW(MementoHash(0), Error);
  EXPECT_THROW(MementoHash(kMaxBuckets + 1), Error);
}

TEST(Memento, LastRemovedCanBeARecentlyGrownTail) {
  MementoHash m(5);
  m.remove(4);
  m.remove(3);
  EXPECT_EQ(accessors(m), (Accessors{3, 3, 0, 3}));
  m.remove(0);
  EXPECT_EQ(m.replacements(), (std::vector<Replacement>{{0, 2, 3}}));
  EXPECT_EQ(m.add(), 0u);
  EXPECT_EQ(m.add(), 3u);
}

TEST(Memento, FullyWorkingLookupEqualsJump) {
  std::mt19937_64 rng(8);
  for (std::uint64_t n : {1ull, 2ull, 7ull, 1000ull, 123457ull}) {
    MementoHash m(n);
    for (int i = 0; i < 5000; ++i) {
      const KeyDigest k{rng()};
      ASSERT_EQ(m.lookup(k), jump(k, n));
    }
  }
}

TEST(Memento, ChainStateDirectRehash) {
  const MementoHash m = six_minus_035();
  const KeyDigest k = find_key([](KeyDigest k) {
    return jump(k, 6) == 3 && keyed_hash(k, 3) % 4 == 1;
  });
  const auto steps = m.explain(k);
  ASSERT_EQ(steps.size(), 3u);
  EXPECT_EQ(steps[0].kind, Kind::kJump);
  EXPECT_EQ(steps[1].kind, Kind::kRehash);
  EXPECT_EQ(steps[1].bound, 4u);
  EXPECT_EQ(steps[2].kind, Kind::kResult);
  EXPECT_EQ(steps[2].bucket, 1u);
  const auto [b, trace] = m.lookup_traced(k);
  EXPECT_EQ(b, 1u);
  EXPECT_EQ(trace.external_iterations, 1u);
}

TEST(Memento, ChainStateTwoPassWalk) {
  const MementoHash m = six_minus_035();
  const KeyDigest k = find_key([](KeyDigest k) {
    return jump(k, 6) == 3 && keyed_hash(k, 3) % 4 == 0 && keyed_hash(k, 5) % 3 == 0;
  });
  const auto steps = m.explain(k);
  std::vector<std::tuple<Kind, BucketId, BucketId>> got;
  for (const auto& s : steps) got.emplace_back(s.kind, s.bucket, s.target);
  const std::vector<std::tuple<Kind, BucketId, BucketId>> want = {
      {Kind::kJump, 3, 3},  {Kind::kRehash, 3, 0}, {Kind::kHop, 0, 5},
      {Kind::kStop, 5, 3},  {Kind::kRehash, 5, 0}, {Kind::kHop, 0, 5},
      {Kind::kHop, 5, 3},   {Kind::kHop, 3, 4},    {Kind::kResult, 4, 4}};
  EXPECT_EQ(got, want);
  EXPECT_EQ(steps[1].bound, 4u);
  EXPECT_EQ(steps[3].bound, 4u);
  EXPECT_EQ(steps[4].bound, 3u);

  const auto [b, trace] = m.lookup_traced(k);
  EXPECT_EQ(b, 4u);
  EXPECT_EQ(trace.external_iterations, 2u);
  EXPECT_EQ(trace.internal_iterations_total, 4u);
  EXPECT_EQ(trace.product_work, 6u);
}

TEST(Memento, ChainStateHopIntoWorkingReplacer) {
  const MementoHash m = six_minus_035();
  const KeyDigest k = find_key([](KeyDigest k) {
    return jump(k, 6) == 3 && keyed_hash(k, 3) % 4 == 3;
  });
  EXPECT_EQ(m.lookup(k), 4u);
}

TEST(Memento, LookupAlwaysLandsOnWorkingBucket) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 200; ++round) {
    MementoHash m(2 + rng() % 300);
    const auto removals = rng() % m.size();
    for (std::uint64_t i = 0; i < removals; ++i) {
      BucketId b;
      do b = static_cast<BucketId>(rng() % m.size()); while (!m.is_working(b));
      m.remove(b);
    }
    for (int i = 0; i < 500; ++i) ASSERT_TRUE(m.is_working(m.lookup(KeyDigest{rng()})));
  }
}

TEST(Memento, ReplacementChainInvariants) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 500; ++round) {
    MementoHash m(1 + rng() % 40);
    for (int step = 0; step < 40; ++step) {
      if (m.working_count() > 1 && rng() % 3 != 0) {
        BucketId b;
        do b = static_cast<BucketId>(rng() % m.size()); while (!m.is_working(b));
        m.remove(b);
      } else {
        m.add();
      }
      const auto chain = m.replacements();
      ASSERT_EQ(chain.size(), m.replacement_count());
      ASSERT_EQ(chain.empty(), m.last_removed() == m.size());
      if (chain.empty()) continue;
      ASSERT_EQ(chain.front().removed, m.last_removed());
      ASSERT_EQ(chain.back().previous, m.size());
      const auto r = chain.size();
      for (std::size_t k = 0; k < r; ++k) {
        // Newest entry replaces with n - r, older ones with larger indices.
        ASSERT_EQ(chain[k].replacer, m.size() - r + k);
        if (k + 1 < r) ASSERT_EQ(chain[k].previous, chain[k + 1].removed);
      }
    }
  }
}

TEST(Memento, FromPartsValidates) {
  MementoHash m(10);
  for (BucketId b : {9u, 5u, 1u, 8u}) m.remove(b);
  const auto parts = m.replacements();
  EXPECT_TRUE(MementoHash::from_parts(9, 8, parts) == m);

  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::kCorruptState;
  };
  EXPECT_EQ(code_of([&] { MementoHash::from_parts(9, 1, parts); }),
            Errc::kInconsistentSnapshot);
  auto broken = parts;
  broken[0].replacer = 7;
  EXPECT_EQ(code_of([&] { MementoHash::from_parts(9, 8, broken); }),
            Errc::kInconsistentSnapshot);
  EXPECT_EQ(code_of([&] { MementoHash::from_parts(9, 3, {}); }),
            Errc::kInconsistentSnapshot);
  EXPECT_EQ(code_of([&] { MementoHash::from_parts(0, 0, {}); }),
            Errc::kInconsistentSnapshot);
  // A bottom entry removing the tail would have shrunk n instead.
  EXPECT_EQ(code_of([&] { MementoHash::from_parts(5, 4, {{4, 4, 5}}); }),
            Errc::kInconsistentSnapshot);
}

}  // namespace
}  // namespace memento
