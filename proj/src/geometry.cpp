#include "permeable/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "permeable/error.hpp"

namespace permeable {

namespace {

void require_valid_coords(const std::vector<double>& coords) {
  if (coords.empty()) throw Error(ErrorCode::invalid_argument, "point must have dimension >= 1");
  for (double c : coords) {
    if (!std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "point coordinates must be finite");
  }
}

}  // namespace

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) { require_valid_coords(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { require_valid_coords(coords_); }

Point Point::zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

Point& Point::operator+=(const Point& other) {
  require_same_dimension(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
  return *this;
}

Point& Point::operator-=(const Point& other) {
  require_same_dimension(*this, other);
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (double& c : coords_) c *= s;
  return *this;
}

void require_same_dimension(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::dimension_mismatch,
                "points of dimension " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

double dot(const Point& a, const Point& b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Point& a) {
  double s = 0.0;
  for (double c : a.coords()) s += c * c;
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  require_same_dimension(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

Point lerp(const Point& a, const Point& b, double t) {
  require_same_dimension(a, b);
  std::vector<double> c(a.dim());
  for (std::size_t i = 0; i < a.dim(); ++i) c[i] = (1.0 - t) * a[i] + t * b[i];
  return Point(std::move(c));
}

bool approx_equal(const Point& a, const Point& b, double tol) { return distance(a, b) <= tol; }

double point_segment_distance(const Point& p, const Segment& s, double* param) {
  const Point u = s.b - s.a;
  const double uu = dot(u, u);
  double t = 0.0;
  if (uu > 0.0) t = std::clamp(dot(p - s.a, u) / uu, 0.0, 1.0);
  if (param) *param = t;
  return distance(p, s.at(t));
}

// ---------------------------------------------------------------------------
// Polyline

Polyline::Polyline(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 2) throw Error(ErrorCode::invalid_argument, "polyline needs at least two vertices");
  const std::size_t d = vertices_.front().dim();
  if (d == 0) throw Error(ErrorCode::invalid_argument, "polyline vertices must have dimension >= 1");
  for (const Point& v : vertices_) {
    if (v.dim() != d) throw Error(ErrorCode::dimension_mismatch, "polyline vertices differ in dimension");
  }
  const bool constant = std::all_of(vertices_.begin(), vertices_.end(),
                                    [&](const Point& v) { return v == vertices_.front(); });
  if (!constant) {
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
      if (vertices_[i] == vertices_[i + 1]) {
        throw Error(ErrorCode::invalid_argument, "consecutive polyline vertices coincide at index " + std::to_string(i));
      }
    }
  }
}

Polyline::Polyline(std::initializer_list<Point> vertices) : Polyline(std::vector<Point>(vertices)) {}

Polyline Polyline::from_points(std::vector<Point> points, double tol) {
  if (points.empty()) throw Error(ErrorCode::invalid_argument, "polyline needs at least one point");
  std::vector<Point> out;
  out.reserve(points.size());
  out.push_back(points.front());
  for (std::size_t k = 1; k + 1 < points.size(); ++k) {
    if (distance(points[k], out.back()) > tol) out.push_back(points[k]);
  }
  const Point& last = points.back();
  if (out.size() == 1 || distance(last, out.back()) > tol) {
    out.push_back(last);
  } else {
    out.back() = last;
  }
  if (out.size() == 2 && distance(out[0], out[1]) <= tol) return constant(out[0]);
  // Replacing the tail by the exact endpoint can leave an exact duplicate.
  std::vector<Point> clean;
  clean.reserve(out.size());
  for (auto& p : out) {
    if (clean.empty() || !(clean.back() == p)) clean.push_back(std::move(p));
  }
  if (clean.size() == 1) return constant(clean.front());
  return Polyline(std::move(clean));
}

bool Polyline::is_constant(double tol) const {
  return std::all_of(vertices_.begin(), vertices_.end(),
                     [&](const Point& v) { return distance(v, vertices_.front()) <= tol; });
}

double polyline_length(const Polyline& p) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) total += distance(p.vertices()[i], p.vertices()[i + 1]);
  return total;
}

Polyline subdivide(const Polyline& p, int parts) {
  if (parts < 1) throw Error(ErrorCode::invalid_argument, "subdivision needs parts >= 1");
  if (p.is_constant(0.0)) return p;
  std::vector<Point> out;
  out.push_back(p.front());
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const Segment s = p.segment(i);
    for (int k = 1; k < parts; ++k) out.push_back(s.at(static_cast<double>(k) / parts));
    out.push_back(s.b);
  }
  return Polyline(std::move(out));
}

Polyline concatenate(const std::vector<Polyline>& pieces) {
  if (pieces.empty()) throw Error(ErrorCode::invalid_argument, "nothing to concatenate");
  std::vector<Point> pts;
  for (const Polyline& piece : pieces) {
    const auto& v = piece.vertices();
    pts.insert(pts.end(), pts.empty() ? v.begin() : v.begin() + 1, v.end());
  }
  return Polyline::from_points(std::move(pts), 0.0);
}

// ---------------------------------------------------------------------------
// Segment intersection

namespace {

SegmentIntersection make_point(const Segment& s1, const Segment& s2, double s, double t) {
  SegmentIntersection r;
  r.kind = SegmentIntersection::Kind::point;
  r.first = lerp(s1.at(s), s2.at(t), 0.5);
  r.second = r.first;
  r.s_first = r.s_second = s;
  r.t_first = r.t_second = t;
  return r;
}

// Closest endpoint-to-segment contact, used when the line solve is unreliable.
SegmentIntersection endpoint_contact(const Segment& s1, const Segment& s2, double tol) {
  double best = std::numeric_limits<double>::infinity();
  double bs = 0.0, bt = 0.0;
  double t = 0.0;
  if (double d = point_segment_distance(s1.a, s2, &t); d < best) best = d, bs = 0.0, bt = t;
  if (double d = point_segment_distance(s1.b, s2, &t); d < best) best = d, bs = 1.0, bt = t;
  if (double d = point_segment_distance(s2.a, s1, &t); d < best) best = d, bs = t, bt = 0.0;
  if (double d = point_segment_distance(s2.b, s1, &t); d < best) best = d, bs = t, bt = 1.0;
  if (best <= tol) return make_point(s1, s2, bs, bt);
  return {};
}

}  // namespace

SegmentIntersection segment_intersection(const Segment& s1, const Segment& s2, double tol) {
  require_same_dimension(s1.a, s1.b);
  require_same_dimension(s2.a, s2.b);
  require_same_dimension(s1.a, s2.a);

  const Point u = s1.b - s1.a;
  const Point v = s2.b - s2.a;
  const Point w = s1.a - s2.a;
  const double uu = dot(u, u), vv = dot(v, v), uv = dot(u, v);
  const double uw = dot(u, w), vw = dot(v, w);
  const double lu = std::sqrt(uu), lv = std::sqrt(vv);

  if (lu <= tol || lv <= tol) return endpoint_contact(s1, s2, tol);

  const double cross2 = std::max(0.0, uu * vv - uv * uv);
  const bool parallel = cross2 <= 1e-20 * uu * vv;

  if (parallel) {
    const double da = std::sqrt(std::max(0.0, dot(s2.a - s1.a, s2.a - s1.a) -
                                                  std::pow(dot(s2.a - s1.a, u), 2) / uu));
    const double db = std::sqrt(std::max(0.0, dot(s2.b - s1.a, s2.b - s1.a) -
                                                  std::pow(dot(s2.b - s1.a, u), 2) / uu));
    if (da > tol || db > tol) return endpoint_contact(s1, s2, tol);

    const double p = dot(s2.a - s1.a, u) / uu;
    const double q = dot(s2.b - s1.a, u) / uu;
    const double lo = std::max(0.0, std::min(p, q));
    const double hi = std::min(1.0, std::max(p, q));
    if ((hi - lo) * lu < -tol) return {};
    auto param_on_s2 = [&](double s) { return std::clamp(dot(s1.at(s) - s2.a, v) / vv, 0.0, 1.0); };
    if ((hi - lo) * lu <= tol) {
      const double s = std::clamp(0.5 * (lo + hi), 0.0, 1.0);
      return make_point(s1, s2, s, param_on_s2(s));
    }
    SegmentIntersection r;
    r.kind = SegmentIntersection::Kind::overlap;
    r.first = s1.at(lo);
    r.second = s1.at(hi);
    r.s_first = lo;
    r.s_second = hi;
    r.t_first = param_on_s2(lo);
    r.t_second = param_on_s2(hi);
    return r;
  }

  const double s = (uv * vw - vv * uw) / cross2;
  const double t = (uu * vw - uv * uw) / cross2;
  const double ms = tol / lu, mt = tol / lv;
  if (s >= -ms && s <= 1.0 + ms && t >= -mt && t <= 1.0 + mt) {
    const double sc = std::clamp(s, 0.0, 1.0), tc = std::clamp(t, 0.0, 1.0);
    if (distance(s1.at(sc), s2.at(tc)) <= tol) return make_point(s1, s2, sc, tc);
  }
  return endpoint_contact(s1, s2, tol);
}

bool has_self_intersection(const Polyline& p, double tol) {
  if (p.is_constant(tol)) return false;
  const std::size_t m = p.segment_count();
  for (std::size_t i = 0; i < m; ++i) {
    const Segment si = p.segment(i);
    const double li = si.length();
    for (std::size_t j = i + 1; j < m; ++j) {
      const auto hit = segment_intersection(si, p.segment(j), tol);
      if (hit.kind == SegmentIntersection::Kind::empty) continue;
      if (hit.kind == SegmentIntersection::Kind::overlap) return true;
      if (j == i + 1 && hit.s_first >= 1.0 - tol / li) continue;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Loop erasure

Polyline loop_erase(const Polyline& p, double tol) {
  if (p.is_constant(tol)) return p;
  std::vector<Point> v = p.vertices();

  const std::size_t guard = 10 * v.size() * v.size() + 100;
  for (std::size_t iter = 0; iter < guard; ++iter) {
    bool spliced = false;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i + 1 < n && !spliced; ++i) {
      const Segment si{v[i], v[i + 1]};
      const double li = si.length();
      if (li <= tol) continue;

      // Earliest point of segment i that the path visits again later.
      double best_s = std::numeric_limits<double>::infinity();
      for (std::size_t j = i + 1; j + 1 < n; ++j) {
        const auto hit = segment_intersection(si, Segment{v[j], v[j + 1]}, tol);
        if (hit.kind == SegmentIntersection::Kind::empty) continue;
        double s = hit.s_first;
        if (hit.kind == SegmentIntersection::Kind::point) {
          if (j == i + 1 && s >= 1.0 - tol / li) continue;
        } else {
          s = std::min(hit.s_first, hit.s_second);
        }
        best_s = std::min(best_s, s);
      }
      if (!std::isfinite(best_s)) continue;

      const Point x = si.at(std::clamp(best_s, 0.0, 1.0));
      // Last visit of x; everything in between is a loop.
      std::size_t last_j = 0;
      bool found = false;
      for (std::size_t j = n - 1; j-- > i + 1;) {
        if (point_segment_distance(x, Segment{v[j], v[j + 1]}) <= tol) {
          last_j = j;
          found = true;
          break;
        }
      }
      if (!found) continue;

      std::vector<Point> out(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      out.push_back(x);
      out.insert(out.end(), v.begin() + static_cast<std::ptrdiff_t>(last_j) + 1, v.end());
      v = Polyline::from_points(std::move(out), tol).vertices();
      spliced = true;
    }
    if (!spliced) break;
    if (v.size() == 2 && distance(v[0], v[1]) <= tol) break;
  }
  return Polyline::from_points(std::move(v), tol);
}

}  // namespace permeable
