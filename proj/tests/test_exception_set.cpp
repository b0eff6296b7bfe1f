#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "permeable/error.hpp"
#include "permeable/exception_set.hpp"
#include "permeable/random.hpp"
#include "permeable/rational.hpp"

using namespace permeable;

namespace {

ExceptionSet circle() { return ExceptionSet(2, family::Sphere{Point{0.0, 0.0}, 1.0, {}}); }

ExceptionSet lines(std::vector<Flat> flats) { return ExceptionSet(2, family::Arrangement{std::move(flats)}); }

Flat horizontal(double c) { return Flat{Point{0.0, 1.0}, c, {}}; }
Flat vertical(double c) { return Flat{Point{1.0, 0.0}, c, {}}; }

// Roots of |a + t (b - a)|^2 = 1 on [0, 1].
std::vector<double> circle_roots(const Point& a, const Point& b) {
  const Point d = b - a;
  const double A = dot(d, d), B = 2.0 * dot(a, d), C = dot(a, a) - 1.0;
  const double disc = B * B - 4 * A * C;
  std::vector<double> out;
  if (disc < 0) return out;
  for (double t : {(-B - std::sqrt(disc)) / (2 * A), (-B + std::sqrt(disc)) / (2 * A)})
    if (t >= 0 && t <= 1) out.push_back(t);
  if (out.size() == 2 && std::fabs(out[0] - out[1]) < 1e-12) out.pop_back();
  return out;
}

}  // namespace

TEST(Rationality, DyadicAndSmallDenominators) {
  EXPECT_TRUE(is_rational(0.5));
  EXPECT_TRUE(is_rational(0.25));
  EXPECT_TRUE(is_rational(1.0 / 3.0));
  EXPECT_TRUE(is_rational(-7.0 / 11.0));
  const auto d = classify_rational(22.0 / 7.0);
  EXPECT_EQ(d.approximation.num, 22);
  EXPECT_EQ(d.approximation.den, 7);
}

TEST(Rationality, IrrationalConstants) {
  EXPECT_FALSE(is_rational(std::numbers::sqrt2));
  EXPECT_FALSE(is_rational(std::numbers::pi));
  EXPECT_FALSE(is_rational(std::numbers::sqrt2 - 1.0));
}

TEST(Rationality, UndecidableWhenToleranceHidesTheValue) {
  EXPECT_EQ(classify_rational(std::numbers::pi, 1e-3).verdict, Rationality::undecidable);
  EXPECT_EQ(classify_rational(std::numbers::pi, 0.0).verdict, Rationality::irrational);
}

TEST(Contains, SlitExamples) {
  const ExceptionSet s = make_slit();
  EXPECT_TRUE(contains(s, Point{-1.0, 0.0}));
  EXPECT_FALSE(contains(s, Point{1.0, 0.0}));
  EXPECT_FALSE(contains(s, Point{0.0, 0.0}));
  EXPECT_TRUE(contains(make_slit(true), Point{0.0, 0.0}));
  EXPECT_FALSE(contains(s, Point{-1.0, 0.1}));
}

TEST(Contains, RationalGrid) {
  const ExceptionSet q(2, family::RationalGrid{});
  EXPECT_TRUE(contains(q, Point{0.5, 0.25}, 0.0));
  EXPECT_FALSE(contains(q, Point{std::numbers::sqrt2, 0.25}, 0.0));
  // sqrt(2) has convergents within 1e-9, so a loose tolerance cannot decide
  try {
    (void)contains(q, Point{std::numbers::sqrt2, 0.25}, 1e-9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undecidable_at_tolerance);
  }
}

TEST(Contains, IrrationalSquareAndCantor) {
  const ExceptionSet sq(2, family::IrrationalSquare{});
  EXPECT_TRUE(contains(sq, Point{std::numbers::sqrt2 / 2.0, std::numbers::pi / 4.0}, 0.0));
  EXPECT_FALSE(contains(sq, Point{0.5, std::numbers::pi / 4.0}, 0.0));
  EXPECT_FALSE(contains(sq, Point{1.5, 1.5}, 0.0));
  const ExceptionSet c(1, family::CantorSet{Point{0.0}, Point{1.0}});
  EXPECT_TRUE(contains(c, Point{0.25}));
  EXPECT_TRUE(contains(c, Point{2.0 / 3.0}));
  EXPECT_FALSE(contains(c, Point{0.5}));
}

TEST(Contains, DimensionMismatch) {
  EXPECT_THROW((void)contains(make_slit(), Point{0.0, 0.0, 0.0}), Error);
  try {
    ExceptionSet bad(3, family::RationalGrid{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(SegmentCrossings, SlitTransversal) {
  const CrossingReport r = segment_crossings(make_slit(), Segment{{-2.0, -1.0}, {-2.0, 1.0}});
  ASSERT_TRUE(r.is_finite());
  ASSERT_EQ(r.crossings.size(), 1U);
  EXPECT_NEAR(r.crossings[0].param, 0.5, 1e-12);
  EXPECT_TRUE(approx_equal(r.crossings[0].point, Point{-2.0, 0.0}));
}

TEST(SegmentCrossings, SegmentInsideSlitIsUncountable) {
  const CrossingReport r = segment_crossings(make_slit(), Segment{{-3.0, 0.0}, {-1.0, 0.0}});
  EXPECT_EQ(r.classification, Classification::uncountable_closure);
  EXPECT_FALSE(r.runs.empty());
}

TEST(SegmentCrossings, RationalGridIrrationalSlope) {
  const ExceptionSet q(2, family::RationalGrid{});
  const Segment s{{0.0, 0.0}, {1.0, std::numbers::sqrt2 - 1.0}};
  const CrossingReport r = segment_crossings(q, s);
  ASSERT_TRUE(r.is_finite());
  EXPECT_LE(r.crossings.size(), 1U);
  // Exhaustive oracle: rational x = p/q on the segment whose y is p'/q'.
  int found = 0;
  const double slope = std::numbers::sqrt2 - 1.0;
  for (int qd = 1; qd <= 300; ++qd)
    for (int p = 0; p <= qd; ++p) {
      const double y = slope * p / qd;
      for (int q2 = 1; q2 <= 300; ++q2)
        if (std::fabs(y * q2 - std::round(y * q2)) < 1e-12) {
          if (p != 0) ++found;
          break;
        }
    }
  EXPECT_EQ(found, 0);
}

TEST(SegmentCrossings, RationalSlopeIsUncountable) {
  const ExceptionSet q(2, family::RationalGrid{});
  EXPECT_NE(segment_crossings(q, Segment{{0.0, 0.0}, {1.0, 0.5}}).classification, Classification::finite);
}

TEST(SegmentCrossings, CircleMatchesQuadraticOracle) {
  Rng rng(3);
  const ExceptionSet c = circle();
  for (int i = 0; i < 500; ++i) {
    const Point a{rng.uniform(-2, 2), rng.uniform(-2, 2)}, b{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const CrossingReport r = segment_crossings(c, Segment{a, b});
    ASSERT_TRUE(r.is_finite());
    const auto roots = circle_roots(a, b);
    ASSERT_EQ(r.crossings.size(), roots.size()) << i;
    for (std::size_t k = 0; k < roots.size(); ++k) EXPECT_NEAR(r.crossings[k].param, roots[k], 1e-9);
  }
}

TEST(SegmentCrossings, SortedByParameter) {
  const ExceptionSet l = lines({vertical(0.1), vertical(0.5), vertical(0.3)});
  const CrossingReport r = segment_crossings(l, Segment{{0.0, 0.0}, {1.0, 0.2}});
  ASSERT_EQ(r.crossings.size(), 3U);
  EXPECT_LT(r.crossings[0].param, r.crossings[1].param);
  EXPECT_LT(r.crossings[1].param, r.crossings[2].param);
}

TEST(PathCrossings, HyperplaneZigZag) {
  const ExceptionSet h = make_hyperplane(Point{0.0, 1.0}, 0.0);
  const CrossingReport r = path_crossings(h, Polyline{{0.0, -1.0}, {1.0, 1.0}, {2.0, -1.0}});
  ASSERT_TRUE(r.is_finite());
  ASSERT_EQ(r.crossings.size(), 2U);
  EXPECT_TRUE(approx_equal(r.crossings[0].point, Point{0.5, 0.0}));
  EXPECT_TRUE(approx_equal(r.crossings[1].point, Point{1.5, 0.0}));
}

TEST(PathCrossings, EmptySetHasNoCrossings) {
  const CrossingReport r = path_crossings(make_empty_set(2), Polyline{{0.0, 0.0}, {1.0, 1.0}, {2.0, 0.0}});
  EXPECT_TRUE(r.is_finite());
  EXPECT_TRUE(r.crossings.empty());
}

TEST(PathCrossings, IsolatedCantorOnIntervalIsUncountable) {
  const ExceptionSet d0(1, family::IsolatedCantorD0{});
  EXPECT_EQ(path_crossings(d0, Polyline{{-1.0}, {2.0}}).classification, Classification::uncountable_closure);
}

TEST(PathCrossings, SharedVertexCountedOnce) {
  const ExceptionSet h = make_hyperplane(Point{0.0, 1.0}, 0.0);
  const CrossingReport r = path_crossings(h, Polyline{{0.0, -1.0}, {1.0, 0.0}, {2.0, 1.0}});
  ASSERT_TRUE(r.is_finite());
  EXPECT_EQ(r.crossings.size(), 1U);
}

TEST(PathCrossings, InvariantUnderSubdivision) {
  Rng rng(8);
  const std::vector<ExceptionSet> sets{circle(), lines({horizontal(0.2), vertical(-0.4)}), make_slit(),
                                       ExceptionSet(2, family::TopologistSine{false})};
  for (int i = 0; i < 100; ++i) {
    std::vector<Point> v;
    for (int k = 0; k < 4; ++k) v.push_back(Point{rng.uniform(0.05, 2.0), rng.uniform(-2, 2)});
    const Polyline p(v);
    for (const auto& s : sets) {
      const CrossingReport a = path_crossings(s, p), b = path_crossings(s, subdivide(p, 3));
      ASSERT_EQ(a.classification, b.classification);
      if (!a.is_finite()) continue;
      ASSERT_EQ(a.crossings.size(), b.crossings.size());
      for (std::size_t k = 0; k < a.crossings.size(); ++k) {
        EXPECT_NEAR(a.crossings[k].param, b.crossings[k].param, 1e-9);
        EXPECT_TRUE(approx_equal(a.crossings[k].point, b.crossings[k].point, 1e-8));
      }
    }
  }
}

TEST(PathCrossings, SubArrangementNeverCrossesMore) {
  Rng rng(21);
  const std::vector<Flat> all{horizontal(0.0), vertical(0.0), Flat{Point{1.0, 1.0}, 0.3, {}},
                              Flat{Point{1.0, -2.0}, 0.1, {HalfSpace{Point{-1.0, 0.0}, 0.0}}}};
  const ExceptionSet big = lines(all);
  for (int i = 0; i < 300; ++i) {
    std::vector<Flat> part;
    for (const auto& f : all)
      if (rng.bits() & 1U) part.push_back(f);
    const ExceptionSet small = lines(part);
    const Segment s{{rng.uniform(-2, 2), rng.uniform(-2, 2)}, {rng.uniform(-2, 2), rng.uniform(-2, 2)}};
    const CrossingReport rb = segment_crossings(big, s), rs = segment_crossings(small, s);
    if (rb.is_finite()) {
      ASSERT_TRUE(rs.is_finite());
      EXPECT_LE(rs.crossings.size(), rb.crossings.size());
    }
  }
}

TEST(TopologistSine, AxisSegmentIsCountable) {
  const ExceptionSet s(2, family::TopologistSine{false});
  EXPECT_EQ(segment_crossings(s, Segment{{0.0, 0.0}, {1.0, 0.0}}).classification, Classification::countable_closure);
}

TEST(TopologistSine, FarSegmentIsFinite) {
  const ExceptionSet s(2, family::TopologistSine{false});
  const CrossingReport r = segment_crossings(s, Segment{{0.5, -2.0}, {0.5, 2.0}});
  ASSERT_TRUE(r.is_finite());
  ASSERT_EQ(r.crossings.size(), 1U);
  EXPECT_NEAR(r.crossings[0].point[1], std::sin(2.0), 1e-9);
}

TEST(TopologistSine, ClosureAlongAxisIsUncountable) {
  const ExceptionSet s(2, family::TopologistSine{true});
  EXPECT_EQ(segment_crossings(s, Segment{{0.0, -0.5}, {0.0, 0.5}}).classification,
            Classification::uncountable_closure);
}

TEST(ClosedFamilies, NoInteriorPoints) {
  const std::vector<ExceptionSet> sets{circle(), make_slit(true), make_hyperplane(Point{1.0, 2.0}, 0.3),
                                       ExceptionSet(2, family::CantorSet{Point{0.0, 0.0}, Point{1.0, 1.0}}),
                                       lines({horizontal(0.1), vertical(0.2)})};
  Rng rng(99);
  for (const auto& s : sets) {
    ASSERT_TRUE(is_closed_subset(s));
    for (int i = 0; i < 200; ++i) {
      const auto x = sample_member(s, rng, Point{-2.0, -2.0}, Point{2.0, 2.0});
      ASSERT_TRUE(x);
      ASSERT_TRUE(contains(s, *x, 1e-7)) << to_string(s.kind());
      for (double r = 1e-1; r >= 1e-6; r /= 10.0) {
        bool outside = false;
        for (int k = 0; k < 50 && !outside; ++k) outside = !contains(s, rng.in_ball(*x, r), 0.0);
        EXPECT_TRUE(outside) << to_string(s.kind()) << " r=" << r;
      }
    }
  }
}

TEST(SampleMember, StaysInsideTheBox) {
  Rng rng(4);
  const Point lo{-0.5, -0.5}, hi{0.5, 0.5};
  for (const auto& s : {make_slit(), circle(), make_hyperplane(Point{1.0, 1.0}, 0.2)}) {
    for (int i = 0; i < 100; ++i) {
      const auto p = sample_member(s, rng, lo, hi);
      if (!p) continue;
      EXPECT_GE((*p)[0], lo[0] - 1e-9);
      EXPECT_LE((*p)[0], hi[0] + 1e-9);
      EXPECT_GE((*p)[1], lo[1] - 1e-9);
      EXPECT_LE((*p)[1], hi[1] + 1e-9);
    }
  }
}

TEST(Closure, RejectsNonRepresentableClosures) {
  try {
    (void)closure(ExceptionSet(2, family::RationalGrid{}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition_failed);
  }
  EXPECT_TRUE(contains(closure(make_slit()), Point{0.0, 0.0}));
}

TEST(Classification, Names) {
  EXPECT_EQ(to_string(Classification::unknown), "unknown_classification");
  EXPECT_EQ(to_string(Classification::countable_closure), "countable_closure");
}
