#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "yamabe/invariants/invariants.hpp"

using namespace yamabe;
constexpr double kPi = std::numbers::pi;

TEST(SphereVolume, LowDimensionsMatchTextbookValues) {
  EXPECT_NEAR(vol_sphere(0), 2.0, 1e-14);
  EXPECT_NEAR(vol_sphere(1), 2.0 * kPi, 1e-13);
  EXPECT_NEAR(vol_sphere(2), 4.0 * kPi, 1e-13);
  EXPECT_NEAR(vol_sphere(3), 2.0 * kPi * kPi, 1e-12);
  EXPECT_NEAR(vol_sphere(4), 8.0 * kPi * kPi / 3.0, 1e-12);
  EXPECT_NEAR(vol_sphere(5), kPi * kPi * kPi, 1e-12);
}

TEST(SphereVolume, GammaAndRecursionAgree) {
  for (int n = 0; n <= 20; ++n) EXPECT_NEAR(vol_sphere(n) / vol_sphere_recursive(n), 1.0, 1e-13) << n;
}

TEST(SphereVolume, NegativeDimensionThrows) {
  EXPECT_THROW(vol_sphere(-1), ParameterError);
  EXPECT_THROW(vol_sphere_recursive(-2), ParameterError);
}

TEST(LambdaN, KnownValues) {
  EXPECT_NEAR(lambda_n(2), 8.0 * kPi, 1e-12);
  EXPECT_NEAR(lambda_n(3), 43.8232327163, 1e-9);
  EXPECT_NEAR(lambda_n(4), 12.0 * std::sqrt(8.0 * kPi * kPi / 3.0), 1e-11);
  EXPECT_NEAR(lambda_n(4), 61.56239, 1e-4);
}

TEST(LambdaN, IncreasesWithDimension) {
  for (int n = 3; n < 12; ++n) EXPECT_LT(lambda_n(n), lambda_n(n + 1));
}

TEST(LambdaN, RejectsLowDimension) { EXPECT_THROW(lambda_n(1), ParameterError); }

TEST(HebeyVaugon, ScalesWithOrbitSize) {
  EXPECT_DOUBLE_EQ(hebey_vaugon_bound(3, 1).value, lambda_n(3));
  EXPECT_NEAR(hebey_vaugon_bound(4, 4).value, 2.0 * lambda_n(4), 1e-12);
  EXPECT_NEAR(hebey_vaugon_bound(3, 8).value, 4.0 * lambda_n(3), 1e-11);
}

TEST(HebeyVaugon, InfiniteOrbitsGiveUnboundedValue) {
  const YamabeValue v = hebey_vaugon_bound(5, std::nullopt);
  EXPECT_TRUE(v.unbounded());
  EXPECT_FALSE(hebey_vaugon_bound(5, 2).unbounded());
}

TEST(HebeyVaugon, BadInputs) {
  EXPECT_THROW(hebey_vaugon_bound(2, 1), ParameterError);
  EXPECT_THROW(hebey_vaugon_bound(3, 0), ParameterError);
}

TEST(Kobayashi, IntervalScalesByVolume) {
  const Interval iv = kobayashi_interval(-2.0, -1.0, 8.0, 3);
  EXPECT_NEAR(iv.lo, -8.0, 1e-12);
  EXPECT_NEAR(iv.hi, -4.0, 1e-12);
  EXPECT_TRUE(iv.contains(-5.0));
  EXPECT_FALSE(iv.contains(-3.0));
}

TEST(Kobayashi, BadInputs) {
  EXPECT_THROW(kobayashi_interval(-1.0, -2.0, 1.0, 3), ParameterError);
  EXPECT_THROW(kobayashi_interval(-1.0, 0.0, 0.0, 3), ParameterError);
  EXPECT_THROW(kobayashi_interval(-1.0, 0.0, 1.0, 2), ParameterError);
}

TEST(DisjointUnion, TwoNegativeValues) {
  EXPECT_NEAR(disjoint_union_yamabe(-1.0, -1.0, 4), -std::sqrt(2.0), 1e-14);
  // n = 3: -(2^{3/2} + 1)^{2/3}
  EXPECT_NEAR(disjoint_union_yamabe(-2.0, -1.0, 3), -std::cbrt(std::pow(std::pow(2.0, 1.5) + 1.0, 2.0)), 1e-12);
}

TEST(DisjointUnion, NonNegativeMaxGivesMin) {
  EXPECT_EQ(disjoint_union_yamabe(3.0, 5.0, 4), 3.0);
  EXPECT_EQ(disjoint_union_yamabe(-3.0, 0.0, 4), -3.0);
  EXPECT_EQ(disjoint_union_yamabe(0.0, 0.0, 5), 0.0);
}

TEST(DisjointUnion, Commutative) {
  for (double a : {-4.0, -0.5, 0.0, 1.5})
    for (double b : {-2.0, -0.1, 0.0, 7.0}) EXPECT_EQ(disjoint_union_yamabe(a, b, 3), disjoint_union_yamabe(b, a, 3));
}

TEST(DisjointUnion, RejectsLowDimension) { EXPECT_THROW(disjoint_union_yamabe(-1.0, -1.0, 2), ParameterError); }

TEST(SurgeryBound, CodimensionRange) {
  EXPECT_TRUE(surgery_lower_bound(2.0, 3, 4).valid);
  EXPECT_EQ(surgery_lower_bound(2.0, 3, 4).value, 2.0);
  EXPECT_TRUE(surgery_lower_bound(2.0, 4, 4).valid);
  EXPECT_FALSE(surgery_lower_bound(2.0, 2, 4).valid);
  EXPECT_FALSE(surgery_lower_bound(2.0, 5, 4).valid);
  EXPECT_FALSE(surgery_lower_bound(2.0, 2, 4).reason.empty());
}

TEST(DerivationChain, ProductAndSumsReachLambda) {
  for (int n : {4, 5, 6}) {
    const ChainReport r = derivation_chain(n, 3, 1, 1);
    EXPECT_TRUE(r.valid) << n;
    EXPECT_EQ(r.value, lambda_n(n)) << n;
    EXPECT_FALSE(r.manifold.empty());
    ASSERT_FALSE(r.steps.empty());
    for (const DerivationStep& s : r.steps) EXPECT_TRUE(s.valid) << s.operation;
  }
}

TEST(DerivationChain, InadmissibleCodimensionIsFlagged) {
  const ChainReport r = derivation_chain(5, 2, 1, 0);
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(std::isnan(r.value));
}

TEST(DerivationChain, NegativeCountsThrow) { EXPECT_THROW(derivation_chain(5, 3, -1, 0), ParameterError); }
