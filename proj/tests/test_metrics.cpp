#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <numbers>

#include "permeable/error.hpp"
#include "permeable/exception_set.hpp"
#include "permeable/metrics.hpp"
#include "permeable/random.hpp"

using namespace permeable;

namespace {

// Shortest path around the closed negative real axis: straight when the
// segment misses the half-line, through the origin otherwise.
double slit_oracle(const Point& x, const Point& y) {
  const double dy = y[1] - x[1];
  bool blocked = false;
  if (x[1] == 0.0 && x[0] <= 0.0) blocked = true;
  if (y[1] == 0.0 && y[0] <= 0.0) blocked = true;
  if (dy != 0.0) {
    const double t = -x[1] / dy;
    if (t >= 0.0 && t <= 1.0 && x[0] + t * (y[0] - x[0]) <= 0.0) blocked = true;
  }
  return blocked ? norm(x) + norm(y) : distance(x, y);
}

ExceptionSet unit_circle() { return ExceptionSet(2, family::Sphere{Point{0.0, 0.0}, 1.0, {}}); }

void expect_valid_witness(const MetricEstimate& m, const Point& x, const Point& y) {
  ASSERT_TRUE(m.witness);
  EXPECT_TRUE(approx_equal(m.witness->front(), x));
  EXPECT_TRUE(approx_equal(m.witness->back(), y));
  EXPECT_NEAR(polyline_length(*m.witness), m.upper, 1e-9);
  EXPECT_LE(m.lower, m.upper + 1e-12);
}

}  // namespace

TEST(IntrinsicDistance, SlitGeodesicThroughTipByGrid) {
  const Point x{-1.0, 1.0}, y{-1.0, -1.0};
  const auto t0 = std::chrono::steady_clock::now();
  const MetricEstimate m = intrinsic_distance(slit_plane(), x, y, 10, DistanceMethod::grid);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double oracle = slit_oracle(x, y);
  EXPECT_DOUBLE_EQ(oracle, 2.0 * std::numbers::sqrt2);
  ASSERT_FALSE(m.infinite);
  EXPECT_LE(std::fabs(m.upper - oracle), 0.01 * oracle);
  EXPECT_LE(m.lower, oracle + 1e-9);
  EXPECT_LT(secs, 5.0);
  expect_valid_witness(m, x, y);
  // the witness must not cross the slit
  ASSERT_TRUE(m.witness);
  for (std::size_t k = 0; k < m.witness->segment_count(); ++k) {
    const Segment s = m.witness->segment(k);
    const CrossingReport r = segment_crossings(make_slit(false), s);
    ASSERT_TRUE(r.is_finite());
    EXPECT_TRUE(r.crossings.empty());
  }
}

TEST(IntrinsicDistance, SlitClosedFormMatchesOracle) {
  Rng rng(12);
  for (int i = 0; i < 2000; ++i) {
    const Point x = rng.in_box(Point{-3.0, -3.0}, Point{3.0, 3.0});
    const Point y = rng.in_box(Point{-3.0, -3.0}, Point{3.0, 3.0});
    const MetricEstimate m = intrinsic_distance(slit_plane(), x, y);
    ASSERT_FALSE(m.infinite);
    // the infimum through the tip is not attained; the witness passes just beside it
    const double oracle = slit_oracle(x, y);
    EXPECT_NEAR(m.lower, oracle, 1e-9) << i;
    EXPECT_GE(m.upper, oracle - 1e-12) << i;
    EXPECT_LE(m.upper - oracle, 1e-5 * std::max(1.0, oracle)) << i;
  }
}

TEST(IntrinsicDistance, SameSideOfSlitIsStraight) {
  const MetricEstimate m = intrinsic_distance(slit_plane(), Point{-1.0, 1.0}, Point{1.0, 1.0});
  EXPECT_NEAR(m.upper, 2.0, 1e-12);
}

TEST(IntrinsicDistance, EmptyObstacleIsEuclidean) {
  Domain d;
  const MetricEstimate m = intrinsic_distance(d, Point{0.0, 0.0}, Point{3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.upper, 5.0);
  EXPECT_DOUBLE_EQ(m.lower, 5.0);
  expect_valid_witness(m, Point{0.0, 0.0}, Point{3.0, 4.0});
}

TEST(IntrinsicDistance, ConvexRegionIsEuclidean) {
  const Domain d = half_plane(Point{0.0, -1.0}, 0.0);
  const MetricEstimate m = intrinsic_distance(d, Point{0.0, 1.0}, Point{2.0, 3.0});
  EXPECT_NEAR(m.upper, std::sqrt(8.0), 1e-9);
}

TEST(IntrinsicDistance, OneDimensionalGapIsInfinite) {
  Domain d;
  d.dimension = 1;
  d.obstacle = ExceptionSet(1, family::FinitePoints{{Point{0.5}}});
  EXPECT_TRUE(intrinsic_distance(d, Point{0.0}, Point{1.0}).infinite);
  EXPECT_NEAR(intrinsic_distance(d, Point{0.6}, Point{1.0}).upper, 0.4, 1e-12);
}

TEST(IntrinsicDistance, EndpointOnObstacleIsRejected) {
  try {
    (void)intrinsic_distance(slit_plane(), Point{-1.0, 0.0}, Point{1.0, 1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::out_of_domain);
  }
}

TEST(IntrinsicDistance, MetricAxiomsOnSlitPlane) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const Point a = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    const Point b = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    const Point c = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    const double ab = intrinsic_distance(slit_plane(), a, b).upper;
    const double ba = intrinsic_distance(slit_plane(), b, a).upper;
    const double bc = intrinsic_distance(slit_plane(), b, c).upper;
    const double ac = intrinsic_distance(slit_plane(), a, c).upper;
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_LE(ac, ab + bc + 1e-9);
    EXPECT_GE(ab, distance(a, b) - 1e-12);
    EXPECT_DOUBLE_EQ(intrinsic_distance(slit_plane(), a, a).upper, 0.0);
  }
}

TEST(IntrinsicDistance, GridUpperNonIncreasingInDepth) {
  Domain d;
  family::Arrangement wall;
  wall.flats.push_back(Flat{Point{1.0, 0.0}, 0.0, {HalfSpace{Point{0.0, 1.0}, 1.0}, HalfSpace{Point{0.0, -1.0}, 1.0}}});
  d.obstacle = ExceptionSet(2, wall);
  const Point x{-1.0, 0.2}, y{1.0, -0.3};
  double prev = std::numeric_limits<double>::infinity();
  for (int depth = 3; depth <= 9; ++depth) {
    const MetricEstimate m = intrinsic_distance(d, x, y, depth, DistanceMethod::grid);
    ASSERT_FALSE(m.infinite);
    EXPECT_LE(m.upper, prev + 1e-12) << depth;
    prev = m.upper;
  }
  // around the top end (0, 1) or the bottom end (0, -1)
  const double oracle = std::min(distance(x, Point{0.0, 1.0}) + distance(Point{0.0, 1.0}, y),
                                 distance(x, Point{0.0, -1.0}) + distance(Point{0.0, -1.0}, y));
  EXPECT_LE(std::fabs(prev - oracle), 0.01 * oracle);
  EXPECT_GE(prev, oracle - 1e-9);
}

TEST(ComplementDistance, CircleSeparates) {
  EXPECT_TRUE(complement_distance(unit_circle(), Point{0.0, 0.0}, Point{2.0, 0.0}).infinite);
  EXPECT_NEAR(complement_distance(unit_circle(), Point{0.1, 0.0}, Point{0.0, 0.5}).upper, std::hypot(0.1, 0.5),
              1e-12);
}

TEST(ComplementDistance, HyperplaneSeparates) {
  const ExceptionSet h = make_hyperplane(Point{0.0, 1.0}, 0.0);
  EXPECT_TRUE(complement_distance(h, Point{0.0, 1.0}, Point{0.0, -1.0}).infinite);
  EXPECT_FALSE(complement_distance(h, Point{0.0, 1.0}, Point{5.0, 2.0}).infinite);
}

TEST(ComplementDistance, FinitePointsAreBypassedAtEuclideanCost) {
  const ExceptionSet p(2, family::FinitePoints{{Point{0.5, 0.0}}});
  const MetricEstimate m = complement_distance(p, Point{0.0, 0.0}, Point{1.0, 0.0});
  EXPECT_NEAR(m.upper, 1.0, 1e-6);
  ASSERT_TRUE(m.witness);
  const CrossingReport r = path_crossings(p, *m.witness);
  ASSERT_TRUE(r.is_finite());
  EXPECT_TRUE(r.crossings.empty());
}

TEST(ThetaDistance, RationalGridEuclideanForRandomPairs) {
  const ExceptionSet q(2, family::RationalGrid{});
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    Point x, y;
    if (i % 2 == 0) {
      x = Point{static_cast<double>(rng.integer(-20, 20)) / 8.0, static_cast<double>(rng.integer(-20, 20)) / 8.0};
      y = Point{static_cast<double>(rng.integer(-20, 20)) / 8.0, static_cast<double>(rng.integer(-20, 20)) / 8.0};
    } else {
      x = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
      y = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    }
    if (x == y) continue;
    ThetaOptions t;
    t.seed = static_cast<std::uint64_t>(i);
    const MetricEstimate m = theta_intrinsic_distance(q, x, y, t);
    ASSERT_TRUE(m.witness);
    EXPECT_LE(m.upper, distance(x, y) + 1e-6);
    EXPECT_GE(m.upper, distance(x, y) - 1e-12);
    for (std::size_t k = 0; k < m.witness->segment_count(); ++k) {
      const CrossingReport r = segment_crossings(q, m.witness->segment(k));
      ASSERT_TRUE(r.is_finite()) << i;
      EXPECT_LE(r.crossings.size(), 1U);
    }
  }
}

TEST(ThetaDistance, IsolatedCantorIsInfiniteAcrossTheInterval) {
  const ExceptionSet d0(1, family::IsolatedCantorD0{});
  EXPECT_TRUE(theta_intrinsic_distance(d0, Point{-1.0}, Point{2.0}).infinite);
}

TEST(Certificate, CircleCrossedTwiceWithFourUnitsLength) {
  const Point x{-2.0, 0.0}, y{2.0, 0.0};
  const Certificate c = permeability_certificate(unit_circle(), x, y, 1e-6, 3);
  const CrossingReport r = path_crossings(unit_circle(), c.path);
  ASSERT_TRUE(r.is_finite());
  EXPECT_EQ(r.crossings.size(), 2U);
  EXPECT_NEAR(polyline_length(c.path), 4.0, 1e-6);
  EXPECT_LE(polyline_length(c.path), 4.0 + 1e-6);
}

TEST(Certificate, SegmentAlongALineIsReplaced) {
  family::Arrangement a;
  a.flats.push_back(Flat{Point{0.0, 1.0}, 0.0, {}});
  const ExceptionSet line(2, a);
  const Point x{-1.0, 0.0}, y{1.0, 0.0};
  const Certificate c = permeability_certificate(line, x, y, 1e-6, 1);
  const CrossingReport r = path_crossings(line, c.path);
  ASSERT_TRUE(r.is_finite());
  EXPECT_LE(polyline_length(c.path), 2.0 + 1e-6);
  EXPECT_TRUE(approx_equal(c.path.front(), x));
  EXPECT_TRUE(approx_equal(c.path.back(), y));
}

TEST(Certificate, RandomPairsAgainstArrangement) {
  family::Arrangement a;
  a.flats.push_back(Flat{Point{0.0, 1.0}, 0.0, {}});
  a.flats.push_back(Flat{Point{1.0, 0.0}, 0.3, {}});
  a.flats.push_back(Flat{Point{1.0, -1.0}, 0.1, {}});
  const ExceptionSet lines(2, a);
  Rng rng(77);
  for (int i = 0; i < 60; ++i) {
    const Point x = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    const Point y = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    const Certificate c = permeability_certificate(lines, x, y, 1e-6, static_cast<std::uint64_t>(i));
    const CrossingReport r = path_crossings(lines, c.path);
    EXPECT_TRUE(r.is_finite());
    EXPECT_LE(polyline_length(c.path), distance(x, y) + 1e-6);
  }
}

TEST(Certificate, IrrationalSquareRejected) {
  try {
    (void)permeability_certificate(ExceptionSet(2, family::IrrationalSquare{}), Point{0.3, 0.4}, Point{0.6, 0.7},
                                   1e-6, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_permeable_family);
  }
}

TEST(ChartDetour, RisesByHalfLengthTimesA) {
  const Chart c = make_hyperplane_chart(Point{0.0, 1.0}, 0.0);
  const Polyline p = chart_detour(c, Point{0.0, 0.0}, Point{1.0, 0.0}, 0.005);
  double apex = 0.0;
  for (const auto& v : p.vertices()) apex = std::max(apex, std::fabs(v[1]));
  EXPECT_NEAR(apex, 0.0025, 1e-12);
  EXPECT_NEAR(polyline_length(p), 1.005, 1e-12);
  EXPECT_TRUE(approx_equal(p.front(), Point{0.0, 0.0}));
  EXPECT_TRUE(approx_equal(p.back(), Point{1.0, 0.0}));
  // only the endpoints touch the line
  const CrossingReport r = path_crossings(make_hyperplane(Point{0.0, 1.0}, 0.0), p);
  ASSERT_TRUE(r.is_finite());
  EXPECT_EQ(r.crossings.size(), 2U);
}

TEST(ChartDetour, CoincidentEntryAndExitGiveConstantPath) {
  const Chart c = make_hyperplane_chart(Point{0.0, 1.0}, 0.0);
  EXPECT_TRUE(chart_detour(c, Point{0.4, 0.0}, Point{0.4, 0.0}, 0.1).is_constant());
}

TEST(ChartDetour, ParameterOutsideUnitIntervalRejected) {
  const Chart c = make_hyperplane_chart(Point{0.0, 1.0}, 0.0);
  EXPECT_THROW((void)chart_detour(c, Point{0.0, 0.0}, Point{1.0, 0.0}, 1.5), Error);
}

TEST(ConeChain, LengthWithinHalfEpsAndCrossesBarrierOnce) {
  family::Arrangement a;
  a.flats.push_back(Flat{Point{1.0, 0.0}, 0.0, {}});
  const ExceptionSet barrier(2, a);
  const Point x{-1.0, 0.0}, y{1.0, 0.0};
  for (double eps : {1e-1, 1e-3, 1e-6}) {
    const Polyline p = cone_chain(barrier, x, y, eps, 9);
    EXPECT_EQ(p.size(), 3U);
    EXPECT_LE(polyline_length(p), 2.0 + eps / 2.0 + 1e-12);
    const CrossingReport r = path_crossings(barrier, p);
    ASSERT_TRUE(r.is_finite());
    EXPECT_EQ(r.crossings.size(), 1U);
  }
}

TEST(L1Distance, Examples) {
  EXPECT_DOUBLE_EQ(l1_distance_irrational_square(Point{0.0, 0.0}, Point{1.0, 1.0}), 2.0);
  EXPECT_DOUBLE_EQ(l1_distance_irrational_square(Point{0.25, 0.5}, Point{0.5, 0.25}), 0.5);
  EXPECT_THROW((void)l1_distance_irrational_square(Point{1.5, 0.0}, Point{0.0, 0.0}), Error);
}

TEST(RationalLines, ConvergesToL1) {
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    const Point x{static_cast<double>(rng.integer(1, 96)) / 97.0, rng.uniform(0.01, 0.99)};
    const Point y{rng.uniform(0.01, 0.99), static_cast<double>(rng.integer(1, 96)) / 97.0};
    const double oracle = std::fabs(x[0] - y[0]) + std::fabs(x[1] - y[1]);
    const MetricEstimate m = rational_lines_distance(x, y, 8);
    ASSERT_FALSE(m.infinite);
    EXPECT_LE(std::fabs(m.upper - oracle), 0.02 * oracle);
  }
}

TEST(BoundedTransform, Values) {
  EXPECT_DOUBLE_EQ(bounded_metric_transform(0.0), 0.0);
  EXPECT_DOUBLE_EQ(bounded_metric_transform(1.0), 0.5);
  EXPECT_DOUBLE_EQ(bounded_metric_transform(3.0), 0.75);
  EXPECT_DOUBLE_EQ(bounded_metric_transform(0.0, true), 1.0);
  EXPECT_THROW((void)bounded_metric_transform(-1.0), Error);
}

TEST(BoundedTransform, PreservesTriangleInequality) {
  Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(0, 10), b = rng.uniform(0, 10);
    const double c = rng.uniform(std::fabs(a - b), a + b);
    EXPECT_LE(bounded_metric_transform(c), bounded_metric_transform(a) + bounded_metric_transform(b) + 1e-15);
  }
}

TEST(QuasiConvexity, SlitRatioBlowsUp) {
  const std::vector<std::pair<Point, Point>> pairs{{Point{-1.0, 0.01}, Point{-1.0, -0.01}}};
  const QuasiConvexity q = quasi_convexity_ratio(slit_plane(), pairs, 50.0);
  const double oracle = 2.0 * std::hypot(1.0, 0.01) / 0.02;
  EXPECT_GE(q.max_ratio, oracle - 1e-9);
  EXPECT_LE(q.max_ratio, oracle * (1.0 + 1e-5));
  EXPECT_TRUE(q.exceeds);
  ASSERT_TRUE(q.witness);
}

TEST(QuasiConvexity, ConvexDomainHasRatioOne) {
  const QuasiConvexity q =
      quasi_convexity_ratio(half_plane(Point{0.0, -1.0}, 0.0), Point{-1.0, 0.0}, Point{1.0, 1.0}, 200, 4);
  EXPECT_NEAR(q.max_ratio, 1.0, 1e-12);
  EXPECT_FALSE(q.exceeds);
}
