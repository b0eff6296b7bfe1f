#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "permeable/charts.hpp"
#include "permeable/geometry.hpp"
#include "permeable/random.hpp"

namespace permeable {

/// {x : normal . x <= offset}
struct HalfSpace {
  Point normal;
  double offset = 0.0;

  bool satisfied(const Point& x, double tol = kGeomTol) const {
    return dot(normal, x) <= offset + tol * norm(normal);
  }
};

/// {x : normal . x = offset} intersected with the half-spaces in `bounds`.
struct Flat {
  Point normal;
  double offset = 0.0;
  std::vector<HalfSpace> bounds;
};

namespace family {

struct FinitePoints {
  std::vector<Point> points;
};
struct Hyperplane {
  Point normal;
  double offset = 0.0;
};
/// Finite union of bounded pieces of hyperplanes (lines, rays, barriers).
struct Arrangement {
  std::vector<Flat> flats;
};
/// Half-hyperplane {n.(x - tip) = 0, u.(x - tip) > 0}; the closed variant
/// also contains the tip side boundary. In R^2 with the defaults this is the
/// negative real axis.
struct Slit {
  Point tip;
  Point direction;
  Point normal;
  bool closed = false;
};
/// {x : x_d = g(x_1..x_{d-1})}
struct LipschitzGraph {
  GraphFunction graph;
};
/// Sphere |x - center| = radius, optionally cut by half-spaces.
struct Sphere {
  Point center;
  double radius = 1.0;
  std::vector<HalfSpace> bounds;
};
/// Union of chart images {Psi(y) : y in V, trailing coordinates zero}.
struct ChartManifold {
  std::vector<Chart> charts;
  bool closed = true;
};
/// Middle-thirds Cantor set laid along the segment [start, end].
struct CantorSet {
  Point start;
  Point end;
};
/// Q x Q (planar only).
struct RationalGrid {};
/// ([0,1] \ Q)^2 (planar only).
struct IrrationalSquare {};
/// {(t, sin(1/t)) : t > 0}; with `closure` also {0} x [-1, 1].
struct TopologistSine {
  bool closure = false;
};
/// Left-gap accumulation points {s - 3^-m} of the Cantor set, in the first
/// coordinate (extruded along the others when d >= 2).
struct IsolatedCantorD0 {
  int max_depth = 24;
};

}  // namespace family

using Family = std::variant<family::FinitePoints, family::Hyperplane, family::Arrangement, family::Slit,
                            family::LipschitzGraph, family::Sphere, family::ChartManifold, family::CantorSet,
                            family::RationalGrid, family::IrrationalSquare, family::TopologistSine,
                            family::IsolatedCantorD0>;

enum class Kind {
  finite_points,
  hyperplane,
  arrangement,
  slit,
  lipschitz_graph,
  sphere,
  chart_manifold,
  cantor_set,
  rational_grid,
  irrational_square,
  topologist_sine,
  isolated_cantor_d0,
};

std::string_view to_string(Kind k);

class ExceptionSet {
 public:
  /// Validates the family against the ambient dimension.
  ExceptionSet(std::size_t dimension, Family family);

  std::size_t dimension() const noexcept { return dimension_; }
  const Family& family() const noexcept { return family_; }
  Kind kind() const noexcept { return static_cast<Kind>(family_.index()); }

  template <class F>
  const F* as() const noexcept {
    return std::get_if<F>(&family_);
  }

 private:
  std::size_t dimension_;
  Family family_;
};

ExceptionSet make_empty_set(std::size_t dimension);
ExceptionSet make_slit(bool closed = false);
ExceptionSet make_hyperplane(const Point& normal, double offset);

enum class Classification { finite, countable_closure, uncountable_closure, unknown };

std::string_view to_string(Classification c);

struct Crossing {
  double param = 0.0;  // parameter on the queried segment or polyline
  Point point;
};

/// Intersection of a segment (or polyline) with an exception set.
///
/// `crossings` is exhaustive when the classification is `finite`. `runs` are
/// parameter intervals of positive length lying inside the set.
struct CrossingReport {
  Classification classification = Classification::finite;
  std::vector<Crossing> crossings;
  std::vector<std::pair<double, double>> runs;
  std::string evidence;

  bool is_finite() const { return classification == Classification::finite; }
};

/// Membership within `tol`. For the rational grid and the irrational square
/// the decision may throw undecidable_at_tolerance.
bool contains(const ExceptionSet& theta, const Point& x, double tol = kGeomTol);

CrossingReport segment_crossings(const ExceptionSet& theta, const Segment& s);

/// Parameters are normalized arc length in [0, 1], so the report does not
/// change when the path is subdivided.
CrossingReport path_crossings(const ExceptionSet& theta, const Polyline& p);

/// A point of the set inside the box [lo, hi] when one can be produced.
std::optional<Point> sample_member(const ExceptionSet& theta, Rng& rng, const Point& lo, const Point& hi);

/// Closure of the set. Throws precondition_failed when the closure has
/// interior or cannot be represented.
ExceptionSet closure(const ExceptionSet& theta);

bool is_closed_subset(const ExceptionSet& theta);
bool is_lebesgue_null(const ExceptionSet& theta);
/// True for families known to fail permeability outright.
bool known_non_permeable(const ExceptionSet& theta);

/// Distinguished points (tips, endpoints, centers) worth including in any
/// bounding region around the set.
std::vector<Point> feature_points(const ExceptionSet& theta);

/// Conservative: false only if the closed ball misses the closure of the set.
bool may_meet_ball(const ExceptionSet& theta, const Point& c, double r);

/// A chart whose domain covers the preimage of `p`, when the family has one.
std::optional<Chart> chart_near(const ExceptionSet& theta, const Point& p);

// Cantor set helpers on [0, 1].
double cantor_distance(double u);
/// Does the open interval (lo, hi) meet the Cantor set (margin 1e-12)?
bool cantor_meets_open_interval(double lo, double hi);

}  // namespace permeable
