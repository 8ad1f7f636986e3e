#include <gtest/gtest.h>

#include <numeric>

#include "gearquest/hash.hpp"
#include "gearquest/rng.hpp"

using namespace gearquest;

TEST(Hash, KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Rng, PureFunctionOfKeyAndCounter) {
  const CounterRng a(42);
  const CounterRng b(42);
  const CounterRng c(43);
  EXPECT_EQ(a.bits(7), b.bits(7));
  EXPECT_NE(a.bits(7), c.bits(7));
  EXPECT_NE(a.bits(7, 0), a.bits(7, 1));
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const double u = a.uniform(i);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_LT(a.below(i, 13), 13u);
  }
}

TEST(Rng, UniformMeanIsCentred) {
  const CounterRng r(5);
  double sum = 0;
  for (std::uint64_t i = 0; i < 100000; ++i) sum += r.uniform(i);
  EXPECT_NEAR(sum / 100000, 0.5, 0.01);
}

TEST(Rng, ShuffleIsSeededPermutation) {
  std::vector<int> v(20);
  std::iota(v.begin(), v.end(), 0);
  auto a = v;
  auto b = v;
  seeded_shuffle(a, 9);
  seeded_shuffle(b, 9);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, v);
  std::sort(a.begin(), a.end());
  EXPECT_EQ(a, v);
}
