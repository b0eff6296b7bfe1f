#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "permeable/geometry.hpp"

namespace permeable {

/// Scalar Lipschitz function R^{d-1} -> R with a declared constant.
struct GraphFunction {
  std::function<double(std::span<const double>)> eval;
  double lipschitz = 0.0;
  std::string name;

  double operator()(std::span<const double> x) const { return eval(x); }
};

/// a * sin(w * x_1)
GraphFunction make_sine_graph(double amplitude, double frequency);
/// slope * |x - center| (Euclidean norm in R^{d-1})
GraphFunction make_abs_graph(double slope, std::vector<double> center);
/// <coeffs, x> + offset
GraphFunction make_linear_graph(std::vector<double> coeffs, double offset);

/// Chart coordinate domain V.
struct ChartDomain {
  enum class Shape { whole_space, ball, box, half_space };

  Shape shape = Shape::whole_space;
  Point center;                // ball
  double radius = 0.0;         // ball
  Point lo, hi;                // box (open)
  Point normal;                // half space {normal . y < offset}
  double offset = 0.0;

  bool contains(const Point& y) const;
  /// Membership in the closure of V, with slack `tol`.
  bool contains_closure(const Point& y, double tol = kGeomTol) const;
  /// Distance from y to the boundary of V (infinite for the whole space).
  double clearance(const Point& y) const;
};

/// Bi-Lipschitz chart Psi: V -> U with Psi(y) in the manifold iff the trailing
/// d - m chart coordinates vanish.
struct Chart {
  std::function<Point(const Point&)> forward;
  std::function<Point(const Point&)> inverse;
  ChartDomain domain;
  double lipschitz = 1.0;       // common constant for Psi and its inverse
  std::size_t manifold_dim = 1;
  bool affine = false;
  std::string name;

  /// Norm of the trailing (normal) chart coordinates.
  double normal_part(const Point& y) const;
};

/// Psi(y) = A y + b with A given row-major; the constant is max(|A|, |A^-1|).
Chart make_affine_chart(const std::vector<std::vector<double>>& matrix, const Point& offset,
                        std::size_t manifold_dim, ChartDomain domain = {});
/// Isometric chart of the hyperplane {n . x = c}: last chart axis along n.
Chart make_hyperplane_chart(const Point& normal, double offset);
/// Isometric chart of the half-hyperplane {n.(x - tip) = 0, u.(x - tip) > 0};
/// first chart axis along u, last along n, domain {y_1 > 0}.
Chart make_slit_chart(const Point& tip, const Point& direction, const Point& normal);
/// Psi(y', y_d) = (y', y_d + g(y')).
Chart make_graph_chart(const GraphFunction& g, std::size_t dim, ChartDomain domain = {});
/// Polar chart of a circle in R^2 around the angle of `near`:
/// Psi(y) = c + (r + y_2)(cos(theta0 + y_1), sin(theta0 + y_1)).
Chart make_circle_chart(const Point& center, double radius, const Point& near);

/// Samples |Psi(u) - Psi(v)| / |u - v| (and the inverse ratio) on `samples`
/// random pairs in V and reports the largest ratio seen.
double sampled_chart_lipschitz(const Chart& chart, std::size_t dim, int samples, std::uint64_t seed);

}  // namespace permeable
