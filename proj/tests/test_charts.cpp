#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "permeable/charts.hpp"
#include "permeable/error.hpp"
#include "permeable/random.hpp"

using namespace permeable;

namespace {

void expect_round_trip(const Chart& c, std::size_t dim, std::uint64_t seed, double radius = 1.0) {
  Rng rng(seed);
  for (int i = 0; i < 200; ++i) {
    const Point y = rng.in_ball(Point::zeros(dim), radius);
    if (!c.domain.contains(y)) continue;
    EXPECT_TRUE(approx_equal(c.inverse(c.forward(y)), y, 1e-9)) << c.name;
  }
}

}  // namespace

TEST(Charts, AffineConstantIsLargerOfBothNorms) {
  const Chart c = make_affine_chart({{2.0, 0.0}, {0.0, 0.5}}, Point{1.0, 1.0}, 1);
  EXPECT_NEAR(c.lipschitz, 2.0, 1e-12);
  expect_round_trip(c, 2, 1);
  EXPECT_LE(sampled_chart_lipschitz(c, 2, 2000, 3), c.lipschitz + 1e-9);
  EXPECT_GE(sampled_chart_lipschitz(c, 2, 2000, 3), 1.9);
}

TEST(Charts, SingularAffineRejected) {
  EXPECT_THROW((void)make_affine_chart({{1.0, 2.0}, {2.0, 4.0}}, Point{0.0, 0.0}, 1), Error);
}

TEST(Charts, HyperplaneChartIsIsometric) {
  const Chart c = make_hyperplane_chart(Point{1.0, 1.0, 0.0}, 1.0);
  expect_round_trip(c, 3, 2, 3.0);
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Point a = rng.in_ball(Point::zeros(3), 2.0), b = rng.in_ball(Point::zeros(3), 2.0);
    EXPECT_NEAR(distance(c.forward(a), c.forward(b)), distance(a, b), 1e-12);
  }
  // last coordinate zero lands on the plane
  const Point on = c.forward(Point{0.3, -0.7, 0.0});
  EXPECT_NEAR(on[0] + on[1], 1.0, 1e-12);
  EXPECT_NEAR(c.normal_part(c.inverse(Point{2.0, 0.0, 0.0})), 1.0 / std::numbers::sqrt2, 1e-12);
}

TEST(Charts, SlitChartDomainIsOpenHalfSpace) {
  const Chart c = make_slit_chart(Point{0.0, 0.0}, Point{-1.0, 0.0}, Point{0.0, 1.0});
  EXPECT_TRUE(c.domain.contains(Point{0.5, 0.0}));
  EXPECT_FALSE(c.domain.contains(Point{0.0, 0.0}));
  EXPECT_TRUE(c.domain.contains_closure(Point{0.0, 0.0}));
  EXPECT_TRUE(approx_equal(c.forward(Point{2.0, 0.0}), Point{-2.0, 0.0}));
  EXPECT_NEAR(c.domain.clearance(Point{0.25, 3.0}), 0.25, 1e-12);
}

TEST(Charts, CircleChartMapsZeroNormalToCircle) {
  const Chart c = make_circle_chart(Point{1.0, -1.0}, 2.0, Point{3.0, -1.0});
  for (double t = -1.0; t <= 1.0; t += 0.1) {
    const Point p = c.forward(Point{t, 0.0});
    EXPECT_NEAR(distance(p, Point{1.0, -1.0}), 2.0, 1e-12);
  }
  expect_round_trip(c, 2, 5, 0.5);
}

TEST(Charts, GraphChartShiftsByFunction) {
  const GraphFunction g = make_sine_graph(0.5, 3.0);
  EXPECT_NEAR(g.lipschitz, 1.5, 1e-12);
  const Chart c = make_graph_chart(g, 2);
  const Point p = c.forward(Point{0.4, 0.1});
  EXPECT_NEAR(p[1], 0.1 + 0.5 * std::sin(1.2), 1e-12);
  expect_round_trip(c, 2, 6, 2.0);
  EXPECT_LE(sampled_chart_lipschitz(c, 2, 2000, 7), c.lipschitz + 1e-9);
}

TEST(Charts, AbsAndLinearGraphs) {
  const GraphFunction a = make_abs_graph(2.0, {1.0});
  const double x[] = {3.0};
  EXPECT_DOUBLE_EQ(a(x), 4.0);
  const GraphFunction l = make_linear_graph({1.0, -2.0}, 0.5);
  const double y[] = {1.0, 1.0};
  EXPECT_DOUBLE_EQ(l(y), -0.5);
  EXPECT_NEAR(l.lipschitz, std::sqrt(5.0), 1e-12);
}

TEST(ChartDomain, BallAndBox) {
  ChartDomain b;
  b.shape = ChartDomain::Shape::ball;
  b.center = Point{0.0, 0.0};
  b.radius = 1.0;
  EXPECT_TRUE(b.contains(Point{0.5, 0.5}));
  EXPECT_FALSE(b.contains(Point{1.0, 0.0}));
  EXPECT_TRUE(b.contains_closure(Point{1.0, 0.0}));
  EXPECT_NEAR(b.clearance(Point{0.5, 0.0}), 0.5, 1e-12);
  ChartDomain box;
  box.shape = ChartDomain::Shape::box;
  box.lo = Point{0.0, 0.0};
  box.hi = Point{1.0, 2.0};
  EXPECT_TRUE(box.contains(Point{0.5, 1.9}));
  EXPECT_FALSE(box.contains(Point{1.5, 1.0}));
  EXPECT_NEAR(box.clearance(Point{0.5, 1.9}), 0.1, 1e-12);
}
