#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace permeable {

/// Coincidence / intersection tolerance used by every geometric decision.
inline constexpr double kGeomTol = 1e-9;

/// A point of R^d (d >= 1) with finite coordinates.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim);

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  double& operator[](std::size_t i) { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }

  Point& operator+=(const Point& other);
  Point& operator-=(const Point& other);
  Point& operator*=(double s);

  friend Point operator+(Point a, const Point& b) { return a += b; }
  friend Point operator-(Point a, const Point& b) { return a -= b; }
  friend Point operator*(Point a, double s) { return a *= s; }
  friend Point operator*(double s, Point a) { return a *= s; }
  friend bool operator==(const Point& a, const Point& b) = default;

 private:
  std::vector<double> coords_;
};

double dot(const Point& a, const Point& b);
double norm(const Point& a);
double distance(const Point& a, const Point& b);
/// (1 - t) a + t b
Point lerp(const Point& a, const Point& b, double t);
bool approx_equal(const Point& a, const Point& b, double tol = kGeomTol);

/// Throws dimension_mismatch unless both points live in the same R^d.
void require_same_dimension(const Point& a, const Point& b);

struct Segment {
  Point a;
  Point b;

  Point at(double t) const { return lerp(a, b, t); }
  double length() const { return distance(a, b); }
  std::size_t dim() const { return a.dim(); }
};

/// Distance from p to the segment; `param` receives the clamped parameter of
/// the closest point when non-null.
double point_segment_distance(const Point& p, const Segment& s, double* param = nullptr);

/// Ordered vertex list of a polygonal path. At least two vertices, all of the
/// same dimension; consecutive vertices coincide only for a constant path.
class Polyline {
 public:
  explicit Polyline(std::vector<Point> vertices);
  Polyline(std::initializer_list<Point> vertices);

  /// Drops consecutive vertices closer than `tol`, keeping both endpoints; a
  /// fully degenerate input becomes the constant path [p, p].
  static Polyline from_points(std::vector<Point> points, double tol = kGeomTol);
  static Polyline constant(const Point& p) { return Polyline(std::vector<Point>{p, p}); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t segment_count() const noexcept { return vertices_.size() - 1; }
  std::size_t dim() const noexcept { return vertices_.front().dim(); }
  Segment segment(std::size_t i) const { return {vertices_[i], vertices_[i + 1]}; }
  const Point& front() const { return vertices_.front(); }
  const Point& back() const { return vertices_.back(); }
  bool is_constant(double tol = kGeomTol) const;

 private:
  std::vector<Point> vertices_;
};

/// Sum of the Euclidean segment lengths.
double polyline_length(const Polyline& p);

/// Splits every segment into `parts` equal pieces (subdivision leaves the
/// image and the length unchanged).
Polyline subdivide(const Polyline& p, int parts);

/// Joins paths end to start; the shared endpoint appears once.
Polyline concatenate(const std::vector<Polyline>& pieces);

struct SegmentIntersection {
  enum class Kind { empty, point, overlap };

  Kind kind = Kind::empty;
  // For `point` only `first` is meaningful. For `overlap` [first, second] is
  // the shared sub-segment, oriented along the first argument.
  Point first;
  Point second;
  // Parameters of `first` / `second` on the first and on the second segment.
  double s_first = 0.0, s_second = 0.0;
  double t_first = 0.0, t_second = 0.0;
};

SegmentIntersection segment_intersection(const Segment& s1, const Segment& s2, double tol = kGeomTol);

/// True when some pair of non-adjacent segments meets, or adjacent segments
/// share more than their common vertex.
bool has_self_intersection(const Polyline& p, double tol = kGeomTol);

/// Loop erasure: returns an injective polyline with the same endpoints whose
/// image lies in the image of `p` and whose length does not exceed that of `p`.
Polyline loop_erase(const Polyline& p, double tol = kGeomTol);

}  // namespace permeable
