#include <gtest/gtest.h>

#include <cmath>

#include "permeable/cb_rank.hpp"
#include "permeable/error.hpp"
#include "permeable/random.hpp"

using namespace permeable;

namespace {

// Staircase of num/den by long division in base 3: digit 2 -> binary 1,
// digit 0 -> 0, first digit 1 -> final binary 1 and stop.
double staircase_oracle(std::int64_t num, std::int64_t den, int digits = 60) {
  if (num >= den) return 1.0;
  double value = 0.0, w = 0.5;
  std::int64_t r = num;
  for (int k = 0; k < digits && r != 0; ++k) {
    r *= 3;
    const std::int64_t d = r / den;
    r %= den;
    if (d == 1) return value + w;
    if (d == 2) value += w;
    w *= 0.5;
  }
  return value;
}

CBSet random_tree(Rng& rng, int budget, int& expected_rank) {
  if (budget == 0 || rng.integer(0, 3) == 0) {
    const int n = static_cast<int>(rng.integer(1, 4));
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(0.25 * i);
    expected_rank = 1;
    return make_points(v);
  }
  int r = 0;
  CBSet base = random_tree(rng, budget - 1, r);
  expected_rank = r + 1;
  return make_limit(0.0, std::move(base), cb::Law::geometric, 0.5, 3.0);
}

}  // namespace

TEST(CbRank, SkFamily) {
  for (int k = 0; k <= 6; ++k) EXPECT_EQ(cb_rank(make_sk(k)), (CBRank{false, k + 1})) << k;
}

TEST(CbRank, HarmonicSequenceAndCantor) {
  EXPECT_EQ(cb_rank(make_harmonic_sequence()), (CBRank{false, 2}));
  EXPECT_TRUE(cb_rank(make_cantor()).perfect_core);
  EXPECT_EQ(cb_rank(make_cantor()).to_string(), "perfect_core");
}

TEST(CbRank, FiniteAndEmpty) {
  EXPECT_EQ(cb_rank(make_points({})), (CBRank{false, 0}));
  EXPECT_EQ(cb_rank(make_points({0.0, 2.0, 5.0})), (CBRank{false, 1}));
}

TEST(CbRank, UnionTakesTheMaximum) {
  const CBSet u = make_union({make_points({-10.0}), make_sk(3)});
  validate(u);
  EXPECT_EQ(cb_rank(u).rank, 4);
  const CBSet with_core = make_union({make_sk(2), make_cantor(20.0, 21.0)});
  EXPECT_TRUE(cb_rank(with_core).perfect_core);
}

TEST(CbRank, DerivativeLowersRankByOne) {
  Rng rng(10);
  for (int i = 0; i < 50; ++i) {
    int expected = 0;
    const CBSet s = random_tree(rng, 5, expected);
    validate(s);
    ASSERT_EQ(cb_rank(s).rank, expected);
    EXPECT_EQ(cb_rank(cb_derivative(s)).rank, expected - 1);
  }
  EXPECT_TRUE(cb_rank(cb_derivative(make_cantor())).perfect_core);
}

TEST(CbRank, SampledPointsLieInHull) {
  const CBSet s = make_sk(3);
  const auto [lo, hi] = hull(s);
  for (double x : sample_points(s, 8)) {
    EXPECT_GE(x, lo - 1e-12);
    EXPECT_LE(x, hi + 1e-12);
  }
}

TEST(CbRank, OverlappingUnionRejected) {
  EXPECT_THROW(validate(make_union({make_points({0.0, 1.0}), make_points({0.5})})), Error);
}

TEST(CbRank, NestingBound) {
  try {
    (void)make_sk(kMaxNesting);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::depth_exceeded);
  }
}

TEST(Permeability1d, CountableIffNoPerfectCore) {
  EXPECT_TRUE(is_permeable_1d(make_sk(4)).permeable);
  EXPECT_TRUE(is_permeable_1d(make_harmonic_sequence()).permeable);
  EXPECT_FALSE(is_permeable_1d(make_cantor()).permeable);
}

TEST(Staircase, KnownValues) {
  EXPECT_DOUBLE_EQ(cantor_staircase_exact(1, 3), 0.5);
  EXPECT_DOUBLE_EQ(cantor_staircase_exact(1, 4), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cantor_staircase_exact(2, 3), 0.5);
  EXPECT_DOUBLE_EQ(cantor_staircase_exact(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(cantor_staircase_exact(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(cantor_staircase(0.25), 1.0 / 3.0);
}

TEST(Staircase, RatioAtPowersOfThree) {
  std::int64_t p = 1;
  for (int n = 1; n <= 20; ++n) {
    p *= 3;
    const double ratio = (cantor_staircase_exact(1, p) - cantor_staircase_exact(0, 1)) * static_cast<double>(p);
    EXPECT_EQ(ratio, std::pow(1.5, n)) << n;
  }
}

TEST(Staircase, MatchesLongDivisionOracle) {
  for (std::int64_t den = 2; den <= 200; ++den)
    for (std::int64_t num = 0; num <= den; ++num)
      EXPECT_NEAR(cantor_staircase_exact(num, den), staircase_oracle(num, den), 1e-15) << num << "/" << den;
}

TEST(Staircase, MonotoneWithPlateaus) {
  double prev = -1.0;
  for (int i = 0; i <= 3000; ++i) {
    const double c = cantor_staircase(i / 3000.0);
    EXPECT_GE(c, prev - 1e-15);
    prev = c;
  }
  // constant on the removed middle third
  for (double x = 0.34; x < 0.66; x += 0.01) EXPECT_DOUBLE_EQ(cantor_staircase(x), 0.5);
}

TEST(Staircase, OutsideUnitIntervalRejected) {
  EXPECT_THROW((void)cantor_staircase(-0.1), Error);
}
