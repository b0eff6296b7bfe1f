#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "permeable/error.hpp"
#include "permeable/geometry.hpp"
#include "permeable/random.hpp"

using namespace permeable;

namespace {

// Independent proper/improper intersection test for planar segments.
double orient(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_box(const Point& a, const Point& b, const Point& p, double eps) {
  return std::min(a[0], b[0]) - eps <= p[0] && p[0] <= std::max(a[0], b[0]) + eps &&
         std::min(a[1], b[1]) - eps <= p[1] && p[1] <= std::max(a[1], b[1]) + eps;
}

bool segments_meet(const Point& a, const Point& b, const Point& c, const Point& d, double eps) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > eps && o2 < -eps) || (o1 < -eps && o2 > eps)) && ((o3 > eps && o4 < -eps) || (o3 < -eps && o4 > eps)))
    return true;
  if (std::fabs(o1) <= eps && on_box(a, b, c, eps)) return true;
  if (std::fabs(o2) <= eps && on_box(a, b, d, eps)) return true;
  if (std::fabs(o3) <= eps && on_box(c, d, a, eps)) return true;
  if (std::fabs(o4) <= eps && on_box(c, d, b, eps)) return true;
  return false;
}

bool simple_by_brute_force(const Polyline& p) {
  const auto& v = p.vertices();
  const std::size_t m = p.segment_count();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 2; j < m; ++j)
      if (segments_meet(v[i], v[i + 1], v[j], v[j + 1], 1e-12)) return false;
  // Adjacent segments must not fold back over each other.
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const Point u = v[i + 1] - v[i], w = v[i + 2] - v[i + 1];
    if (std::fabs(orient(v[i], v[i + 1], v[i + 2])) <= 1e-12 && dot(u, w) < 0.0) return false;
  }
  return true;
}

double dist_to_polyline(const Point& q, const Polyline& p) {
  double best = INFINITY;
  for (std::size_t k = 0; k < p.segment_count(); ++k) {
    const Point a = p.vertices()[k], b = p.vertices()[k + 1];
    const Point ab = b - a;
    const double l2 = dot(ab, ab);
    const double t = l2 > 0 ? std::clamp(dot(q - a, ab) / l2, 0.0, 1.0) : 0.0;
    best = std::min(best, norm(q - (a + ab * t)));
  }
  return best;
}

Polyline random_polyline(Rng& rng) {
  const int n = static_cast<int>(rng.integer(2, 14));
  std::vector<Point> v;
  for (int k = 0; k < n; ++k) v.push_back(Point{rng.uniform(), rng.uniform()});
  return Polyline::from_points(v);
}

}  // namespace

TEST(Point, RejectsMixedDimensions) {
  EXPECT_THROW(require_same_dimension(Point{0.0, 1.0}, Point{1.0}), Error);
  EXPECT_THROW((void)distance(Point{0.0, 1.0}, Point{1.0, 2.0, 3.0}), Error);
}

TEST(PolylineLength, UnitSegment) { EXPECT_DOUBLE_EQ(polyline_length(Polyline{{0.0, 0.0}, {1.0, 0.0}}), 1.0); }

TEST(PolylineLength, SquareLoop) {
  EXPECT_DOUBLE_EQ(polyline_length(Polyline{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {0.0, 0.0}}), 4.0);
}

TEST(PolylineLength, MidpointInsertionKeepsLength) {
  EXPECT_DOUBLE_EQ(polyline_length(Polyline{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}}), 1.0);
}

TEST(PolylineLength, ConstantPathHasZeroLength) {
  EXPECT_EQ(polyline_length(Polyline::constant(Point{2.0, 3.0})), 0.0);
  EXPECT_TRUE(Polyline::constant(Point{2.0, 3.0}).is_constant());
}

TEST(PolylineLength, SubdivisionInvariantOnRandomPaths) {
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const Polyline p = random_polyline(rng);
    for (int parts : {2, 3, 7}) EXPECT_NEAR(polyline_length(subdivide(p, parts)), polyline_length(p), 1e-12);
    // Inserting an arbitrary point of a segment as a vertex.
    std::vector<Point> v = p.vertices();
    const std::size_t k = static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(v.size()) - 2));
    v.insert(v.begin() + static_cast<std::ptrdiff_t>(k) + 1, lerp(v[k], v[k + 1], rng.uniform(0.1, 0.9)));
    EXPECT_NEAR(polyline_length(Polyline(v)), polyline_length(p), 1e-12);
  }
}

TEST(PolylineLength, SumOfSegmentLengthsIn3d) {
  const Polyline p{{0.0, 0.0, 0.0}, {1.0, 2.0, 2.0}, {1.0, 2.0, 5.0}};
  EXPECT_DOUBLE_EQ(polyline_length(p), 3.0 + 3.0);
}

TEST(PolylineFromPoints, DropsRepeatedVertices) {
  const Polyline p = Polyline::from_points({{0.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}, {1.0, 0.0}});
  EXPECT_EQ(p.size(), 2U);
  const Polyline c = Polyline::from_points({{1.0, 1.0}, {1.0, 1.0}});
  EXPECT_TRUE(c.is_constant());
}

TEST(Concatenate, SharedEndpointAppearsOnce) {
  const Polyline a{{0.0, 0.0}, {1.0, 0.0}}, b{{1.0, 0.0}, {1.0, 1.0}};
  const Polyline c = concatenate({a, b});
  EXPECT_EQ(c.size(), 3U);
  EXPECT_DOUBLE_EQ(polyline_length(c), 2.0);
}

TEST(SegmentIntersection, CrossingDiagonals) {
  const auto r = segment_intersection({{0.0, 0.0}, {2.0, 2.0}}, {{2.0, 0.0}, {0.0, 2.0}});
  ASSERT_EQ(r.kind, SegmentIntersection::Kind::point);
  EXPECT_TRUE(approx_equal(r.first, Point{1.0, 1.0}));
  EXPECT_NEAR(r.s_first, 0.5, 1e-12);
  EXPECT_NEAR(r.t_first, 0.5, 1e-12);
}

TEST(SegmentIntersection, DisjointCollinear) {
  EXPECT_EQ(segment_intersection({{0.0, 0.0}, {1.0, 0.0}}, {{2.0, 0.0}, {3.0, 0.0}}).kind,
            SegmentIntersection::Kind::empty);
}

TEST(SegmentIntersection, CollinearOverlap) {
  const auto r = segment_intersection({{0.0, 0.0}, {2.0, 0.0}}, {{1.0, 0.0}, {3.0, 0.0}});
  ASSERT_EQ(r.kind, SegmentIntersection::Kind::overlap);
  EXPECT_TRUE(approx_equal(r.first, Point{1.0, 0.0}));
  EXPECT_TRUE(approx_equal(r.second, Point{2.0, 0.0}));
}

TEST(SegmentIntersection, SymmetricOnRandomSegments) {
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const Segment s1{Point{rng.uniform(), rng.uniform()}, Point{rng.uniform(), rng.uniform()}};
    const Segment s2{Point{rng.uniform(), rng.uniform()}, Point{rng.uniform(), rng.uniform()}};
    const auto a = segment_intersection(s1, s2), b = segment_intersection(s2, s1);
    ASSERT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.kind != SegmentIntersection::Kind::empty, segments_meet(s1.a, s1.b, s2.a, s2.b, 0.0));
    if (a.kind == SegmentIntersection::Kind::point) EXPECT_TRUE(approx_equal(a.first, b.first, 1e-9));
  }
}

TEST(SegmentIntersection, TouchingEndpoint) {
  const auto r = segment_intersection({{0.0, 0.0}, {1.0, 0.0}}, {{1.0, 0.0}, {1.0, 1.0}});
  ASSERT_EQ(r.kind, SegmentIntersection::Kind::point);
  EXPECT_TRUE(approx_equal(r.first, Point{1.0, 0.0}));
}

TEST(LoopErase, SimplePathUnchanged) {
  const Polyline p{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}};
  EXPECT_EQ(loop_erase(p).vertices(), p.vertices());
}

TEST(LoopErase, BacktrackRemoved) {
  const Polyline q = loop_erase(Polyline{{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.0}, {0.0, 1.0}});
  ASSERT_EQ(q.size(), 2U);
  EXPECT_TRUE(approx_equal(q.front(), Point{0.0, 0.0}));
  EXPECT_TRUE(approx_equal(q.back(), Point{0.0, 1.0}));
  EXPECT_DOUBLE_EQ(polyline_length(q), 1.0);
}

TEST(LoopErase, SplicesAtCrossing) {
  const Polyline q = loop_erase(Polyline{{0.0, 0.0}, {2.0, 2.0}, {2.0, 0.0}, {0.0, 2.0}});
  ASSERT_EQ(q.size(), 3U);
  EXPECT_TRUE(approx_equal(q.vertices()[1], Point{1.0, 1.0}));
  EXPECT_NEAR(polyline_length(q), 2.0 * std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(simple_by_brute_force(q));
}

TEST(LoopErase, ConstantInputReturnsItself) {
  const Polyline c = Polyline::constant(Point{0.5, 0.5});
  EXPECT_TRUE(loop_erase(c).is_constant());
}

TEST(LoopErase, CollinearOverlapKeepsEarlierDirection) {
  const Polyline q = loop_erase(Polyline{{0.0, 0.0}, {2.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}});
  EXPECT_FALSE(has_self_intersection(q));
  EXPECT_TRUE(approx_equal(q.back(), Point{1.0, 1.0}));
  EXPECT_NEAR(polyline_length(q), 2.0, 1e-12);
}

TEST(LoopErase, ThousandRandomPolylinesAreSimpleAndShorter) {
  Rng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const Polyline p = random_polyline(rng);
    const Polyline q = loop_erase(p);
    ASSERT_TRUE(simple_by_brute_force(q)) << "case " << i;
    EXPECT_FALSE(has_self_intersection(q));
    EXPECT_EQ(q.front(), p.front());
    EXPECT_EQ(q.back(), p.back());
    EXPECT_LE(polyline_length(q), polyline_length(p) + 1e-12);
    for (const Point& v : q.vertices()) EXPECT_LE(dist_to_polyline(v, p), 1e-9);
  }
}

TEST(LoopErase, Idempotent) {
  Rng rng(77);
  for (int i = 0; i < 300; ++i) {
    const Polyline q = loop_erase(random_polyline(rng));
    const Polyline r = loop_erase(q);
    ASSERT_EQ(q.size(), r.size());
    for (std::size_t k = 0; k < q.size(); ++k) EXPECT_TRUE(approx_equal(q.vertices()[k], r.vertices()[k]));
  }
}

TEST(LoopErase, LengthBetweenChordAndInput) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    std::vector<Point> v;
    for (int k = 0; k < 4; ++k) v.push_back(Point{rng.uniform(), rng.uniform()});
    const Polyline p(v);
    const Polyline q = loop_erase(p);
    EXPECT_LE(polyline_length(q), polyline_length(p) + 1e-12);
    EXPECT_GE(polyline_length(q) + 1e-12, distance(p.front(), p.back()));
  }
}
