#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "permeable/charts.hpp"
#include "permeable/exception_set.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

inline constexpr double kInfiniteThreshold = std::numeric_limits<double>::infinity();

/// Distance estimate with a certified lower bound and the length of an
/// explicit witness as upper bound. Infinite distances set `infinite` and
/// carry no witness.
struct MetricEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool infinite = false;
  std::optional<Polyline> witness;
  std::optional<CrossingReport> report;
  std::string method;
  std::string diagnostic;
};

/// E = R^d minus a closed obstacle, intersected with a convex region.
struct Domain {
  std::size_t dimension = 2;
  std::optional<ExceptionSet> obstacle;
  std::vector<HalfSpace> region;
};

Domain slit_plane();
Domain half_plane(const Point& normal, double offset);

enum class DistanceMethod { automatic, grid };

/// Intrinsic distance in the domain. Closed-form for the empty obstacle, for
/// slits (any d) and in d = 1; planar grid search otherwise.
MetricEstimate intrinsic_distance(const Domain& domain, const Point& x, const Point& y, int depth = 10,
                                  DistanceMethod method = DistanceMethod::automatic);

/// Intrinsic distance of R^d minus the closure of the set. Closed-form when
/// the set separates space (hyperplanes, full spheres, d = 1), for slits and
/// for finite sets; planar grid search otherwise.
MetricEstimate complement_distance(const ExceptionSet& theta, const Point& x, const Point& y, int depth = 10);

/// Closed-form slit geodesic: |x - tip| + |tip - y| (with the edge coordinate
/// added in quadrature when d >= 3) when the segment meets the closed slit.
std::optional<double> slit_distance(const family::Slit& slit, const Point& x, const Point& y);

/// Length of the shortest path in [0,1]^2 restricted to the dyadic lines of
/// step 2^-depth plus the lines through rational coordinates of x and y.
MetricEstimate rational_lines_distance(const Point& x, const Point& y, int depth);

struct ThetaOptions {
  double eps = 1e-6;
  bool finite_only = false;
  std::uint64_t seed = 0;
};

/// Theta-intrinsic distance: admissible witnesses have finite (or, unless
/// finite_only, countable-closure) intersection with the set.
MetricEstimate theta_intrinsic_distance(const ExceptionSet& theta, const Point& x, const Point& y,
                                        const ThetaOptions& options = {});

struct Certificate {
  Polyline path;
  CrossingReport report;
  std::string strategy;
};

struct CertificateOptions {
  bool allow_cone = true;
  bool allow_detour = true;
  int retries = 64;
  int samples = 10000;
};

/// Path of length < |x - y| + eps with finitely many crossings, re-verified
/// before it is returned.
Certificate permeability_certificate(const ExceptionSet& theta, const Point& x, const Point& y, double eps,
                                     std::uint64_t seed, const CertificateOptions& options = {});

/// Two-segment chain x -> z -> y with z uniform in the orthogonal disc of
/// radius sqrt((|y-x| + eps/2)^2 - |y-x|^2) / 2 around the midpoint; a chain
/// is accepted when none of `samples` evenly spread points lies in the set.
Polyline cone_chain(const ExceptionSet& theta, const Point& x, const Point& y, double eps, std::uint64_t seed,
                    int samples = 10000, int retries = 64);

/// Three-piece detour in chart coordinates: rise along the last axis by
/// (l/2) a, traverse, descend; l = |Psi^-1(exit) - Psi^-1(entry)|.
Polyline chart_detour(const Chart& chart, const Point& entry, const Point& exit, double a);

double l1_distance_irrational_square(const Point& x, const Point& y);

/// v / (1 + v), and 1 for an infinite distance.
double bounded_metric_transform(double v, bool infinite = false);

struct QuasiConvexity {
  double max_ratio = 0.0;
  std::optional<std::pair<Point, Point>> witness;
  bool exceeds = false;
};

QuasiConvexity quasi_convexity_ratio(const Domain& domain, const std::vector<std::pair<Point, Point>>& pairs,
                                     double threshold = kInfiniteThreshold, int depth = 10);
/// Uniform pairs from the box [lo, hi], skipping pairs with an endpoint on
/// the obstacle.
QuasiConvexity quasi_convexity_ratio(const Domain& domain, const Point& lo, const Point& hi, int pairs,
                                     std::uint64_t seed, double threshold = kInfiniteThreshold, int depth = 10);

}  // namespace permeable
