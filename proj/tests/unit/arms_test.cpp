#include <gtest/gtest.h>

#include <set>
#include <unordered_set>

#include "subdelay/arms.hpp"
#include "subdelay/errors.hpp"
#include "subdelay/rng.hpp"

using namespace subdelay;

namespace {

// n! / (k! (n-k)!) in exact arithmetic for small n.
std::uint64_t factorial_binomial(std::uint64_t n, std::uint64_t k) {
  auto fact = [](std::uint64_t x) {
    std::uint64_t f = 1;
    for (std::uint64_t i = 2; i <= x; ++i) f *= i;
    return f;
  };
  return fact(n) / (fact(k) * fact(n - k));
}

}  // namespace

TEST(GroundSet, RejectsEmpty) {
  EXPECT_THROW(GroundSet(0), InvalidArity);
  GroundSet g(3);
  EXPECT_TRUE(g.contains(2));
  EXPECT_FALSE(g.contains(3));
}

TEST(ArmSet, CanonicalOrderAndEquality) {
  ArmSet a(4, {12, 0, 6});
  ArmSet b(4, {6, 12, 0});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.to_string(), "0|6|12");
  EXPECT_EQ(std::hash<ArmSet>{}(a), std::hash<ArmSet>{}(b));
  EXPECT_EQ(ArmSet(2).to_string(), "");
}

TEST(ArmSet, RejectsDuplicatesAndOverflow) {
  EXPECT_THROW(ArmSet(4, {1, 1}), DuplicateArm);
  EXPECT_THROW(ArmSet(2, {1, 2, 3}), CapacityExceeded);
}

TEST(ArmSet, SubsetAndFits) {
  ArmSet small(4, {0, 6});
  ArmSet big(4, {0, 6, 12});
  EXPECT_TRUE(small.subset_of(big));
  EXPECT_FALSE(big.subset_of(small));
  EXPECT_TRUE(big.fits(GroundSet(13)));
  EXPECT_FALSE(big.fits(GroundSet(12)));
}

TEST(WithArm, SpecExample) {
  const auto s = with_arm(ArmSet(4, {0, 6}), 12);
  EXPECT_EQ(s, ArmSet(4, {0, 6, 12}));
  EXPECT_EQ(s.capacity(), 4u);
}

TEST(WithArm, Errors) {
  EXPECT_THROW(with_arm(ArmSet(4, {0, 6}), 6), DuplicateArm);
  EXPECT_THROW(with_arm(ArmSet(2, {0, 6}), 1), CapacityExceeded);
}

TEST(WithArm, CommutesProperty) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng.next_u64() % 15;
    std::vector<Arm> base;
    for (Arm a = 0; a < n; ++a)
      if (rng.uniform() < 0.3) base.push_back(a);
    std::vector<Arm> free;
    for (Arm a = 0; a < n; ++a)
      if (std::find(base.begin(), base.end(), a) == base.end()) free.push_back(a);
    if (free.size() < 2) continue;
    const Arm x = free[rng.next_u64() % free.size()];
    Arm y = x;
    while (y == x) y = free[rng.next_u64() % free.size()];
    ArmSet s(base.size() + 2, base);
    EXPECT_EQ(with_arm(with_arm(s, x), y), with_arm(with_arm(s, y), x));
  }
}

TEST(Binomial, MatchesFactorials) {
  for (std::uint64_t n = 0; n <= 12; ++n)
    for (std::uint64_t k = 0; k <= n; ++k) EXPECT_EQ(binomial(n, k), factorial_binomial(n, k)) << n << "," << k;
  EXPECT_EQ(binomial(3, 5), 0u);
  EXPECT_EQ(binomial(200, 100), std::numeric_limits<std::uint64_t>::max());
}

TEST(Enumerate, SpecExample) {
  const auto sets = enumerate_actions(GroundSet(3), 2, true);
  ASSERT_EQ(sets.size(), 3u);
  EXPECT_EQ(sets[0], ArmSet(2, {0, 1}));
  EXPECT_EQ(sets[1], ArmSet(2, {0, 2}));
  EXPECT_EQ(sets[2], ArmSet(2, {1, 2}));
}

TEST(Enumerate, BenchmarkSize) {
  EXPECT_EQ(enumerate_actions(GroundSet(20), 4, true).size(), 4845u);
}

TEST(Enumerate, CountsDistinctAndSorted) {
  for (std::size_t n = 1; n <= 12; ++n) {
    for (std::size_t k = 0; k <= std::min<std::size_t>(n, 5); ++k) {
      const auto exact = enumerate_actions(GroundSet(n), k, true);
      EXPECT_EQ(exact.size(), factorial_binomial(n, k));
      EXPECT_TRUE(std::is_sorted(exact.begin(), exact.end()));
      std::set<ArmSet> unique(exact.begin(), exact.end());
      EXPECT_EQ(unique.size(), exact.size());
      for (const auto& s : exact) EXPECT_EQ(s.size(), k);

      const auto upto = enumerate_actions(GroundSet(n), k, false);
      std::uint64_t expected = 0;
      for (std::size_t j = 0; j <= k; ++j) expected += factorial_binomial(n, j);
      EXPECT_EQ(upto.size(), expected);
      std::unordered_set<ArmSet> hashed(upto.begin(), upto.end());
      EXPECT_EQ(hashed.size(), upto.size());
    }
  }
}

TEST(Enumerate, Errors) {
  EXPECT_THROW(enumerate_actions(GroundSet(3), 4, true), InvalidArity);
  EXPECT_THROW(enumerate_actions(GroundSet(60), 10, true), CapacityExceeded);
}

TEST(Rng, DeriveSeedGolden) {
  // Computed once with an independent SplitMix64 implementation.
  static_assert(derive_seed(1, 2, 3) == 2124693194411737599ULL);
  EXPECT_NE(derive_seed(1, 2, 3), derive_seed(1, 3, 2));
  EXPECT_NE(derive_seed(1, 0, 0), derive_seed(2, 0, 0));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Rng, VariateMoments) {
  Rng rng(3);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0, se = 0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    se += rng.exponential();
  }
  EXPECT_NEAR(su / n, 0.5, 0.005);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(sn2 / n, 1.0, 0.02);
  EXPECT_NEAR(se / n, 1.0, 0.01);
}
