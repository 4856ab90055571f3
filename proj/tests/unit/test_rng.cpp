#include <gtest/gtest.h>

#include <set>

#include "madd/rng.hpp"

using namespace madd;

TEST(Substream, SameKeySameSequence) {
  Substream a{1, 2, 3};
  Substream b{1, 2, 3};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Substream, KeyOrderMatters) {
  EXPECT_NE(combine_keys({1, 2}), combine_keys({2, 1}));
  EXPECT_NE(combine_keys({0}), combine_keys({0, 0}));
}

TEST(Substream, UniformStaysInUnitInterval) {
  Substream rng(42);
  double sum = 0;
  for (int i = 0; i < 20000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 20000, 0.5, 0.01);
}

TEST(Substream, BernoulliEdgeCases) {
  Substream rng(7);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(rng.bernoulli(0.0));
    EXPECT_TRUE(rng.bernoulli(1.0));
  }
}

TEST(Fnv1a64, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(Substream, DistinctKeysRarelyCollide) {
  std::set<std::uint64_t> first;
  for (std::uint64_t k = 0; k < 5000; ++k) first.insert(Substream({9, k})());
  EXPECT_EQ(first.size(), 5000u);
}
