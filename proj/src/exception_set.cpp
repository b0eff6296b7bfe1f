#include "permeable/exception_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "permeable/error.hpp"
#include "permeable/rational.hpp"

namespace permeable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSineCutoff = 1e-6;  // x_1 below this is not scanned
constexpr double kCantorMargin = 1e-12;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_dim(const ExceptionSet& theta, std::size_t d) {
  if (d != theta.dimension())
    throw Error(ErrorCode::dimension_mismatch, "query dimension " + std::to_string(d) +
                                                   " differs from set dimension " +
                                                   std::to_string(theta.dimension()));
}

Point unit(const Point& p) {
  const double n = norm(p);
  if (n == 0.0) throw Error(ErrorCode::invalid_argument, "zero direction vector");
  return p * (1.0 / n);
}

double signed_distance(const Point& normal, double offset, const Point& x) {
  return (dot(normal, x) - offset) / norm(normal);
}

bool bounds_ok(const std::vector<HalfSpace>& bounds, const Point& x, double tol) {
  for (const auto& h : bounds)
    if (!h.satisfied(x, tol)) return false;
  return true;
}

Flat slit_flat(const family::Slit& s) {
  // {n.(x - tip) = 0} with u.(x - tip) >= 0 expressed as -u.x <= -u.tip.
  return Flat{s.normal, dot(s.normal, s.tip), {HalfSpace{s.direction * -1.0, -dot(s.direction, s.tip)}}};
}

// ---------------------------------------------------------------------------
// Crossing accumulation

void finalize(CrossingReport& r, const Segment& s) {
  std::sort(r.crossings.begin(), r.crossings.end(),
            [](const Crossing& a, const Crossing& b) { return a.param < b.param; });
  std::vector<Crossing> unique;
  for (auto& c : r.crossings) {
    if (!unique.empty() && distance(unique.back().point, c.point) <= kGeomTol) continue;
    unique.push_back(std::move(c));
  }
  r.crossings = std::move(unique);

  std::sort(r.runs.begin(), r.runs.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& run : r.runs) {
    if (!merged.empty() && run.first <= merged.back().second + 1e-12)
      merged.back().second = std::max(merged.back().second, run.second);
    else
      merged.push_back(run);
  }
  r.runs = std::move(merged);
  if (!r.runs.empty()) {
    const double len = s.length();
    const double slack = len > 0 ? kGeomTol / len : 0.0;
    std::erase_if(r.crossings, [&](const Crossing& c) {
      for (const auto& run : r.runs)
        if (c.param >= run.first - slack && c.param <= run.second + slack) return true;
      return false;
    });
    if (r.classification == Classification::finite || r.classification == Classification::countable_closure)
      r.classification = Classification::uncountable_closure;
  }
}

void add_point(CrossingReport& r, const Segment& s, double t) {
  t = std::clamp(t, 0.0, 1.0);
  r.crossings.push_back({t, s.at(t)});
}

// ---------------------------------------------------------------------------
// Flats

struct FlatHit {
  enum class Kind { none, point, run } kind = Kind::none;
  double t0 = 0.0, t1 = 0.0;
};

FlatHit flat_hit(const Flat& f, const Segment& s) {
  const double len = s.length();
  const double fa = signed_distance(f.normal, f.offset, s.a);
  const double fb = signed_distance(f.normal, f.offset, s.b);
  FlatHit hit;
  if (std::fabs(fa) <= kGeomTol && std::fabs(fb) <= kGeomTol) {
    double lo = 0.0, hi = 1.0;
    const Point dir = s.b - s.a;
    for (const auto& h : f.bounds) {
      const double g0 = dot(h.normal, s.a) - h.offset - kGeomTol * norm(h.normal);
      const double g1 = dot(h.normal, dir);
      if (std::fabs(g1) < 1e-300) {
        if (g0 > 0) return hit;
      } else if (g1 > 0) {
        hi = std::min(hi, -g0 / g1);
      } else {
        lo = std::max(lo, -g0 / g1);
      }
    }
    if (lo > hi) return hit;
    if ((hi - lo) * len <= kGeomTol) {
      hit.kind = FlatHit::Kind::point;
      hit.t0 = hit.t1 = 0.5 * (lo + hi);
    } else {
      hit.kind = FlatHit::Kind::run;
      hit.t0 = lo;
      hit.t1 = hi;
    }
    return hit;
  }
  double t;
  if ((fa < 0) != (fb < 0) && std::fabs(fa) > kGeomTol && std::fabs(fb) > kGeomTol)
    t = fa / (fa - fb);
  else if (std::fabs(fa) <= kGeomTol)
    t = 0.0;
  else if (std::fabs(fb) <= kGeomTol)
    t = 1.0;
  else
    return hit;
  if (!bounds_ok(f.bounds, s.at(t), kGeomTol)) return hit;
  hit.kind = FlatHit::Kind::point;
  hit.t0 = hit.t1 = t;
  return hit;
}

void add_flat(CrossingReport& r, const Flat& f, const Segment& s) {
  const FlatHit h = flat_hit(f, s);
  if (h.kind == FlatHit::Kind::point) add_point(r, s, h.t0);
  if (h.kind == FlatHit::Kind::run) r.runs.emplace_back(h.t0, h.t1);
}

// ---------------------------------------------------------------------------
// Certified zero isolation of a Lipschitz function of the segment parameter.

struct ZeroScan {
  std::vector<double> roots;
  std::vector<std::pair<double, double>> runs;
  bool truncated = false;
};

ZeroScan scan_zeros(const std::function<double(double)>& h, double lip, double seg_len, bool is_signed) {
  ZeroScan out;
  if (seg_len <= kGeomTol) {
    if (std::fabs(h(0.0)) <= kGeomTol) out.roots.push_back(0.0);
    return out;
  }
  const double leaf = std::max(1e-8 / seg_len, 1e-13);
  const double run_min = 1e-4 / seg_len;
  constexpr std::size_t kLeafCap = 400000;

  std::vector<std::pair<double, double>> leaves;
  std::vector<std::pair<double, double>> stack{{0.0, 1.0}};
  while (!stack.empty()) {
    auto [t0, t1] = stack.back();
    stack.pop_back();
    const double m = 0.5 * (t0 + t1);
    const double w = 0.5 * (t1 - t0);
    if (std::fabs(h(m)) > lip * w + kGeomTol) continue;
    if (t1 - t0 >= run_min) {
      bool flat = true;
      for (int i = 0; i <= 8 && flat; ++i) flat = std::fabs(h(t0 + (t1 - t0) * i / 8.0)) <= kGeomTol;
      for (int i = 0; i <= 64 && flat; ++i) flat = std::fabs(h(t0 + (t1 - t0) * i / 64.0)) <= kGeomTol;
      if (flat) {
        out.runs.emplace_back(t0, t1);
        continue;
      }
    }
    if (t1 - t0 <= leaf) {
      leaves.emplace_back(t0, t1);
      if (leaves.size() > kLeafCap) {
        out.truncated = true;
        break;
      }
      continue;
    }
    // Push the right half first so leaves come out sorted.
    stack.emplace_back(m, t1);
    stack.emplace_back(t0, m);
  }

  // Group contiguous leaves into clusters.
  std::size_t i = 0;
  while (i < leaves.size()) {
    std::size_t j = i;
    while (j + 1 < leaves.size() && leaves[j + 1].first <= leaves[j].second + 1e-15) ++j;
    const double c0 = leaves[i].first, c1 = leaves[j].second;
    bool touches_run = false;
    for (auto& run : out.runs) {
      if (std::fabs(run.first - c1) <= 2 * leaf || std::fabs(run.second - c0) <= 2 * leaf) {
        run.first = std::min(run.first, c0);
        run.second = std::max(run.second, c1);
        touches_run = true;
        break;
      }
    }
    if (!touches_run) {
      // Sample the cluster at leaf boundaries.
      std::vector<double> ts;
      for (std::size_t k = i; k <= j; ++k) ts.push_back(leaves[k].first);
      ts.push_back(c1);
      std::vector<double> hs;
      hs.reserve(ts.size());
      for (double t : ts) hs.push_back(h(t));
      bool found = false;
      if (is_signed) {
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
          if (hs[k] == 0.0) {
            out.roots.push_back(ts[k]);
            found = true;
          } else if ((hs[k] < 0) != (hs[k + 1] < 0) && hs[k + 1] != 0.0) {
            double lo = ts[k], hi = ts[k + 1], hlo = hs[k];
            for (int it = 0; it < 60; ++it) {
              const double mid = 0.5 * (lo + hi);
              const double hm = h(mid);
              if ((hm < 0) == (hlo < 0)) {
                lo = mid;
                hlo = hm;
              } else {
                hi = mid;
              }
            }
            out.roots.push_back(0.5 * (lo + hi));
            found = true;
          }
        }
        if (hs.back() == 0.0) {
          out.roots.push_back(ts.back());
          found = true;
        }
      }
      if (!found) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < hs.size(); ++k)
          if (std::fabs(hs[k]) < std::fabs(hs[best])) best = k;
        if (std::fabs(hs[best]) <= kGeomTol) out.roots.push_back(ts[best]);
      }
    }
    i = j + 1;
  }
  return out;
}

void add_scan(CrossingReport& r, const Segment& s, const ZeroScan& z, const std::function<bool(double)>& valid) {
  for (double t : z.roots)
    if (!valid || valid(t)) add_point(r, s, t);
  for (const auto& run : z.runs)
    if (!valid || valid(0.5 * (run.first + run.second))) r.runs.push_back(run);
  if (z.truncated && r.classification == Classification::finite) {
    r.classification = Classification::unknown;
    r.evidence = "zero_isolation_budget_exhausted";
  }
}

// ---------------------------------------------------------------------------
// Cantor set and its isolated left-gap points

struct Gap {
  double right;  // right endpoint s (a point of the Cantor set)
  int level;     // gap width 3^-level; level 0 is (-inf, 0)
};

std::optional<Gap> gap_of(double v) {
  if (v < 0.0) return Gap{0.0, 0};
  if (v > 1.0) return std::nullopt;
  double a = 0.0, w = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double u = (v - a) / w;
    if (u > 1.0 / 3.0 && u < 2.0 / 3.0) return Gap{a + 2.0 * w / 3.0, k + 1};
    if (u <= 1.0 / 3.0) {
      w /= 3.0;
    } else {
      a += 2.0 * w / 3.0;
      w /= 3.0;
    }
  }
  return std::nullopt;
}

bool d0_contains_1d(double v, int max_depth, double tol) {
  const auto g = gap_of(v);
  if (!g) return false;
  for (int j = 1; j <= max_depth; ++j) {
    const double p = g->right - std::pow(3.0, -(g->level + j));
    if (std::fabs(p - v) <= tol) return true;
    if (p > v + tol) break;
  }
  return false;
}

// D0 points in the first-coordinate interval [lo, hi].
void d0_interval(CrossingReport& r, double lo, double hi, int max_depth,
                 const std::function<void(double)>& emit) {
  if (cantor_meets_open_interval(lo, hi)) {
    r.classification = Classification::uncountable_closure;
    r.evidence = "closure_meets_cantor_set";
    return;
  }
  const auto g = gap_of(0.5 * (lo + hi));
  if (!g) return;
  if (hi >= g->right - kCantorMargin && lo < g->right) {
    r.classification = Classification::countable_closure;
    r.evidence = "isolated_points_accumulate_at_gap_end";
    return;
  }
  for (int j = 1; j <= max_depth; ++j) {
    const double p = g->right - std::pow(3.0, -(g->level + j));
    if (p > hi + kGeomTol) break;
    if (p >= lo - kGeomTol) emit(p);
  }
}

// ---------------------------------------------------------------------------
// Rationality helpers

Rationality decide(double x, double tol) {
  const auto d = classify_rational(x, tol);
  return d.verdict;
}

bool exact_rational(double x) { return is_rational(x); }

// ---------------------------------------------------------------------------
// Per-family crossings

CrossingReport crossings_rational_grid(const Segment& s) {
  CrossingReport r;
  const double dx = s.b[0] - s.a[0], dy = s.b[1] - s.a[1];
  if (dx == 0.0 && dy == 0.0) {
    if (exact_rational(s.a[0]) && exact_rational(s.a[1])) add_point(r, s, 0.0);
    r.evidence = "degenerate_segment";
    return r;
  }
  if (dx == 0.0 || dy == 0.0) {
    const double c = dx == 0.0 ? s.a[0] : s.a[1];
    if (exact_rational(c)) {
      r.classification = Classification::uncountable_closure;
      r.evidence = "axis_parallel_on_rational_line";
    } else {
      r.evidence = "axis_parallel_on_irrational_line";
    }
    return r;
  }
  const double slope = dy / dx;
  if (exact_rational(slope)) {
    const double intercept = s.a[1] - slope * s.a[0];
    if (exact_rational(intercept)) {
      r.classification = Classification::uncountable_closure;
      r.evidence = "rational_slope_and_intercept";
    } else {
      r.evidence = "rational_slope_irrational_intercept";
    }
    return r;
  }
  // An irrational-slope line carries at most one rational point.
  r.evidence = "irrational_slope_at_most_one_point";
  for (double t : {0.0, 1.0}) {
    const Point p = s.at(t);
    if (exact_rational(p[0]) && exact_rational(p[1])) {
      add_point(r, s, t);
      break;
    }
  }
  return r;
}

bool clip_to_unit_square(const Segment& s, double& t0, double& t1) {
  t0 = 0.0;
  t1 = 1.0;
  for (int axis = 0; axis < 2; ++axis) {
    const double p = s.a[axis], d = s.b[axis] - s.a[axis];
    if (d == 0.0) {
      if (p < 0.0 || p > 1.0) return false;
      continue;
    }
    double a = (0.0 - p) / d, b = (1.0 - p) / d;
    if (a > b) std::swap(a, b);
    t0 = std::max(t0, a);
    t1 = std::min(t1, b);
  }
  return t0 <= t1;
}

CrossingReport crossings_irrational_square(const Segment& s) {
  CrossingReport r;
  double t0, t1;
  if (!clip_to_unit_square(s, t0, t1)) {
    r.evidence = "outside_unit_square";
    return r;
  }
  const double len = s.length() * (t1 - t0);
  if (len <= kGeomTol) {
    const Point p = s.at(0.5 * (t0 + t1));
    if (!exact_rational(p[0]) && !exact_rational(p[1])) add_point(r, s, 0.5 * (t0 + t1));
    r.evidence = "point_contact";
    return r;
  }
  const double dx = s.b[0] - s.a[0], dy = s.b[1] - s.a[1];
  if ((dx == 0.0 && exact_rational(s.a[0])) || (dy == 0.0 && exact_rational(s.a[1]))) {
    r.evidence = "segment_on_rational_grid_line";
    return r;
  }
  r.classification = Classification::uncountable_closure;
  r.evidence = "positive_length_segment_off_rational_lines";
  return r;
}

CrossingReport crossings_sine(const family::TopologistSine& f, const Segment& s) {
  CrossingReport r;
  const double a0 = s.a[0], b0 = s.b[0];
  const double dx = b0 - a0;
  const double dy = s.b[1] - s.a[1];

  if (std::fabs(a0) <= kGeomTol && std::fabs(b0) <= kGeomTol) {
    r.evidence = "segment_on_axis";
    if (!f.closure) return r;
    double lo = std::max(std::min(s.a[1], s.b[1]), -1.0);
    double hi = std::min(std::max(s.a[1], s.b[1]), 1.0);
    if (hi - lo > kGeomTol) {
      const double ta = dy == 0 ? 0.0 : (lo - s.a[1]) / dy;
      const double tb = dy == 0 ? 1.0 : (hi - s.a[1]) / dy;
      r.runs.emplace_back(std::min(ta, tb), std::max(ta, tb));
      r.classification = Classification::uncountable_closure;
      r.evidence = "segment_along_limit_interval";
    } else if (hi >= lo - kGeomTol) {
      add_point(r, s, dy == 0 ? 0.0 : (0.5 * (lo + hi) - s.a[1]) / dy);
    }
    return r;
  }
  if (std::max(a0, b0) <= kGeomTol) {
    // Entirely in x_1 <= 0, touching the axis at most at one end.
    r.evidence = "left_half_plane";
    if (f.closure) {
      for (double t : {0.0, 1.0}) {
        const Point p = s.at(t);
        if (std::fabs(p[0]) <= kGeomTol && std::fabs(p[1]) <= 1.0 + kGeomTol) add_point(r, s, t);
      }
    }
    return r;
  }

  auto x1 = [&](double t) { return a0 + t * dx; };
  auto x2 = [&](double t) { return s.a[1] + t * dy; };
  auto phi = [&](double t) { return x2(t) - std::sin(1.0 / x1(t)); };

  // Parameter range with x_1 > 0.
  double p0 = 0.0, p1 = 1.0;
  if (dx != 0.0) {
    const double t_axis = -a0 / dx;
    if (dx > 0) p0 = std::max(p0, t_axis);
    else p1 = std::min(p1, t_axis);
  }
  const bool reaches_axis = std::min(a0, b0) <= kGeomTol;
  if (reaches_axis) {
    const double t_axis = std::clamp(-a0 / dx, 0.0, 1.0);
    const double h = x2(t_axis);
    if (f.closure && std::fabs(h) <= 1.0 + kGeomTol) add_point(r, s, t_axis);
    if (std::fabs(h) < 1.0 - kGeomTol) {
      r.classification = Classification::countable_closure;
      r.evidence = "crossings_accumulate_at_axis";
      return r;
    }
    if (std::fabs(h) <= 1.0 + kGeomTol) {
      r.classification = Classification::unknown;
      r.evidence = "approach_to_limit_interval_endpoint";
      return r;
    }
  }
  // Near-axis part x_1 in (0, cutoff) is not scanned; it must stay off |x_2| <= 1.
  double q0 = p0, q1 = p1;
  if (dx != 0.0) {
    const double t_cut = (kSineCutoff - a0) / dx;
    if (dx > 0) q0 = std::max(q0, t_cut);
    else q1 = std::min(q1, t_cut);
  } else if (a0 < kSineCutoff) {
    q0 = 1.0, q1 = 0.0;
  }
  const bool has_near = dx != 0.0 ? ((dx > 0 && q0 > p0) || (dx < 0 && q1 < p1)) : a0 < kSineCutoff;
  if (has_near) {
    const double n0 = dx > 0 ? p0 : (dx < 0 ? q1 : 0.0);
    const double n1 = dx > 0 ? q0 : (dx < 0 ? p1 : 1.0);
    const double h0 = x2(std::clamp(n0, 0.0, 1.0)), h1 = x2(std::clamp(n1, 0.0, 1.0));
    const bool clear = (h0 > 1.0 && h1 > 1.0) || (h0 < -1.0 && h1 < -1.0);
    if (!clear) {
      r.classification = Classification::unknown;
      r.evidence = "segment_enters_unresolved_strip_near_axis";
      return r;
    }
  }
  r.evidence = "sign_change_bracketing";
  if (q0 > q1) return r;

  double t = q0;
  double ft = phi(t);
  if (std::fabs(ft) <= kGeomTol) add_point(r, s, t);
  while (t < q1) {
    const double xv = x1(t);
    double dt = dx == 0.0 ? q1 - t : (std::numbers::pi / 8.0) * xv * xv / std::fabs(dx);
    dt = std::min({dt, 1.0 / 64.0, q1 - t});
    dt = std::max(dt, 1e-15);
    const double t2 = std::min(q1, t + dt);
    const double f2 = phi(t2);
    if (f2 == 0.0 || std::fabs(f2) <= kGeomTol) {
      add_point(r, s, t2);
    } else if ((ft < 0) != (f2 < 0) && std::fabs(ft) > kGeomTol) {
      double lo = t, hi = t2, flo = ft;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = phi(mid);
        if ((fm < 0) == (flo < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      add_point(r, s, 0.5 * (lo + hi));
    }
    t = t2;
    ft = f2;
  }
  return r;
}

CrossingReport crossings_cantor(const family::CantorSet& c, const Segment& s) {
  CrossingReport r;
  const Point axis = c.end - c.start;
  const double len = norm(axis);
  const Segment line{c.start, c.end};
  // Collinear when both segment endpoints lie on the carrier line.
  auto line_dist = [&](const Point& p) {
    const Point v = p - c.start;
    const double along = dot(v, axis) / (len * len);
    return distance(p, c.start + axis * along);
  };
  auto param_of = [&](const Point& p) { return dot(p - c.start, axis) / (len * len); };
  if (line_dist(s.a) <= kGeomTol && line_dist(s.b) <= kGeomTol) {
    const double ua = param_of(s.a), ub = param_of(s.b);
    if (std::fabs(ub - ua) * len <= kGeomTol) {
      if (cantor_distance(ua) * len <= kGeomTol) add_point(r, s, 0.0);
      r.evidence = "degenerate_segment";
      return r;
    }
    const double lo = std::min(ua, ub), hi = std::max(ua, ub);
    if (cantor_meets_open_interval(lo, hi)) {
      r.classification = Classification::uncountable_closure;
      r.evidence = "collinear_overlap_meets_cantor_set";
      return r;
    }
    for (double u : {lo, hi}) {
      if (cantor_distance(u) * len <= kGeomTol) add_point(r, s, (u - ua) / (ub - ua));
    }
    r.evidence = "collinear_gap_overlap";
    return r;
  }
  const auto hit = segment_intersection(s, line);
  if (hit.kind == SegmentIntersection::Kind::point) {
    if (cantor_distance(hit.t_first) * len <= kGeomTol) add_point(r, s, hit.s_first);
  }
  r.evidence = "transversal";
  return r;
}

CrossingReport crossings_d0(const ExceptionSet& theta, const family::IsolatedCantorD0& f, const Segment& s) {
  CrossingReport r;
  const double a0 = s.a[0], b0 = s.b[0];
  if (std::fabs(b0 - a0) <= kGeomTol) {
    if (d0_contains_1d(0.5 * (a0 + b0), f.max_depth, kGeomTol)) {
      if (theta.dimension() >= 2 && s.length() > kGeomTol) {
        r.runs.emplace_back(0.0, 1.0);
        r.evidence = "segment_inside_extruded_fiber";
      } else {
        add_point(r, s, 0.0);
      }
    }
    return r;
  }
  const double lo = std::min(a0, b0), hi = std::max(a0, b0);
  d0_interval(r, lo, hi, f.max_depth, [&](double v) { add_point(r, s, (v - a0) / (b0 - a0)); });
  if (r.evidence.empty()) r.evidence = "enumerated_gap_points";
  return r;
}

CrossingReport crossings_sphere(const family::Sphere& sp, const Segment& s) {
  CrossingReport r;
  const Point d = s.b - s.a;
  const Point m = s.a - sp.center;
  const double A = dot(d, d);
  const double B = 2.0 * dot(m, d);
  const double C = dot(m, m) - sp.radius * sp.radius;
  r.evidence = "quadratic_roots";
  if (A == 0.0) {
    if (std::fabs(norm(m) - sp.radius) <= kGeomTol && bounds_ok(sp.bounds, s.a, kGeomTol)) add_point(r, s, 0.0);
    return r;
  }
  const double disc = B * B - 4.0 * A * C;
  std::vector<double> ts;
  // Tangency when the closest approach is within tol of the radius.
  double tc = std::clamp(-B / (2.0 * A), 0.0, 1.0);
  if (disc < 0.0) {
    if (std::fabs(distance(s.at(tc), sp.center) - sp.radius) <= kGeomTol) ts.push_back(tc);
  } else {
    const double sq = std::sqrt(disc);
    // Numerically stable pair of roots.
    const double q = -0.5 * (B + std::copysign(sq, B));
    double r1 = q / A;
    double r2 = q != 0.0 ? C / q : -B / (2.0 * A);
    for (double t : {r1, r2}) {
      const double slack = kGeomTol / std::sqrt(A);
      if (t >= -slack && t <= 1.0 + slack) ts.push_back(std::clamp(t, 0.0, 1.0));
    }
  }
  for (double t : ts)
    if (bounds_ok(sp.bounds, s.at(t), kGeomTol)) add_point(r, s, t);
  return r;
}

CrossingReport crossings_graph(const family::LipschitzGraph& g, const Segment& s, std::size_t d) {
  CrossingReport r;
  const Point dir = s.b - s.a;
  double horiz = 0.0;
  for (std::size_t i = 0; i + 1 < d; ++i) horiz += dir[i] * dir[i];
  const double lip = std::fabs(dir[d - 1]) + g.graph.lipschitz * std::sqrt(horiz);
  auto h = [&](double t) {
    const Point p = s.at(t);
    return p[d - 1] - g.graph(p.coords().first(d - 1));
  };
  add_scan(r, s, scan_zeros(h, lip, s.length(), true), nullptr);
  if (r.evidence.empty()) r.evidence = "lipschitz_root_isolation";
  return r;
}

CrossingReport crossings_charts(const family::ChartManifold& cm, const Segment& s, std::size_t d) {
  CrossingReport r;
  for (const auto& chart : cm.charts) {
    const bool codim_one = chart.manifold_dim + 1 == d;
    auto h = [&](double t) {
      const Point y = chart.inverse(s.at(t));
      return codim_one ? y[d - 1] : chart.normal_part(y);
    };
    auto valid = [&](double t) { return chart.domain.contains(chart.inverse(s.at(t))); };
    add_scan(r, s, scan_zeros(h, chart.lipschitz * s.length(), s.length(), codim_one), valid);
  }
  if (r.evidence.empty()) r.evidence = "chart_root_isolation";
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Kind k) {
  switch (k) {
    case Kind::finite_points: return "finite_points";
    case Kind::hyperplane: return "hyperplane";
    case Kind::arrangement: return "arrangement";
    case Kind::slit: return "slit";
    case Kind::lipschitz_graph: return "lipschitz_graph";
    case Kind::sphere: return "sphere";
    case Kind::chart_manifold: return "chart_manifold";
    case Kind::cantor_set: return "cantor_set";
    case Kind::rational_grid: return "rational_grid";
    case Kind::irrational_square: return "irrational_square";
    case Kind::topologist_sine: return "topologist_sine";
    case Kind::isolated_cantor_d0: return "isolated_cantor_d0";
  }
  return "unknown";
}

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::finite: return "finite";
    case Classification::countable_closure: return "countable_closure";
    case Classification::uncountable_closure: return "uncountable_closure";
    case Classification::unknown: return "unknown_classification";
  }
  return "unknown_classification";
}

ExceptionSet::ExceptionSet(std::size_t dimension, Family fam) : dimension_(dimension), family_(std::move(fam)) {
  if (dimension_ < 1) throw Error(ErrorCode::invalid_argument, "dimension must be at least 1");
  auto need = [&](const Point& p, const char* what) {
    if (p.dim() != dimension_)
      throw Error(ErrorCode::dimension_mismatch, std::string(what) + " has dimension " + std::to_string(p.dim()) +
                                                     ", expected " + std::to_string(dimension_));
  };
  auto planar = [&](const char* what) {
    if (dimension_ != 2) throw Error(ErrorCode::dimension_mismatch, std::string(what) + " is defined in dimension 2 only");
  };
  std::visit(overloaded{
                 [&](family::FinitePoints& f) {
                   for (const auto& p : f.points) need(p, "point");
                 },
                 [&](family::Hyperplane& f) {
                   need(f.normal, "normal");
                   if (norm(f.normal) == 0.0) throw Error(ErrorCode::invalid_argument, "zero hyperplane normal");
                 },
                 [&](family::Arrangement& f) {
                   for (const auto& fl : f.flats) {
                     need(fl.normal, "flat normal");
                     if (norm(fl.normal) == 0.0) throw Error(ErrorCode::invalid_argument, "zero flat normal");
                     for (const auto& b : fl.bounds) need(b.normal, "bound normal");
                   }
                 },
                 [&](family::Slit& f) {
                   if (dimension_ < 2) throw Error(ErrorCode::dimension_mismatch, "slit needs dimension >= 2");
                   if (f.tip.dim() == 0) f.tip = Point::zeros(dimension_);
                   if (f.direction.dim() == 0) {
                     f.direction = Point::zeros(dimension_);
                     f.direction[0] = -1.0;
                   }
                   if (f.normal.dim() == 0) {
                     f.normal = Point::zeros(dimension_);
                     f.normal[1] = 1.0;
                   }
                   need(f.tip, "slit tip");
                   need(f.direction, "slit direction");
                   need(f.normal, "slit normal");
                   f.direction = unit(f.direction);
                   f.normal = unit(f.normal);
                   if (std::fabs(dot(f.direction, f.normal)) > 1e-9)
                     throw Error(ErrorCode::invalid_argument, "slit direction and normal must be orthogonal");
                 },
                 [&](family::LipschitzGraph& f) {
                   if (dimension_ < 2) throw Error(ErrorCode::dimension_mismatch, "graph needs dimension >= 2");
                   if (!f.graph.eval) throw Error(ErrorCode::invalid_argument, "graph function missing");
                 },
                 [&](family::Sphere& f) {
                   need(f.center, "center");
                   if (!(f.radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be positive");
                   for (const auto& b : f.bounds) need(b.normal, "bound normal");
                 },
                 [&](family::ChartManifold& f) {
                   if (f.charts.empty()) throw Error(ErrorCode::invalid_argument, "chart manifold needs a chart");
                   for (const auto& c : f.charts)
                     if (c.manifold_dim < 1 || c.manifold_dim >= dimension_)
                       throw Error(ErrorCode::dimension_mismatch, "chart manifold dimension out of range");
                 },
                 [&](family::CantorSet& f) {
                   need(f.start, "cantor start");
                   need(f.end, "cantor end");
                   if (distance(f.start, f.end) == 0.0)
                     throw Error(ErrorCode::invalid_argument, "cantor carrier segment is degenerate");
                 },
                 [&](family::RationalGrid&) { planar("rational_grid"); },
                 [&](family::IrrationalSquare&) { planar("irrational_square"); },
                 [&](family::TopologistSine&) { planar("topologist_sine"); },
                 [&](family::IsolatedCantorD0& f) {
                   if (f.max_depth < 1 || f.max_depth > 30)
                     throw Error(ErrorCode::invalid_argument, "max_depth must lie in [1, 30]");
                 },
             },
             family_);
}

ExceptionSet make_empty_set(std::size_t dimension) { return ExceptionSet(dimension, family::FinitePoints{}); }

ExceptionSet make_slit(bool closed) {
  family::Slit s;
  s.closed = closed;
  return ExceptionSet(2, s);
}

ExceptionSet make_hyperplane(const Point& normal, double offset) {
  return ExceptionSet(normal.dim(), family::Hyperplane{normal, offset});
}

bool contains(const ExceptionSet& theta, const Point& x, double tol) {
  require_dim(theta, x.dim());
  const std::size_t d = theta.dimension();
  return std::visit(
      overloaded{
          [&](const family::FinitePoints& f) {
            return std::any_of(f.points.begin(), f.points.end(),
                               [&](const Point& p) { return distance(p, x) <= tol; });
          },
          [&](const family::Hyperplane& f) { return std::fabs(signed_distance(f.normal, f.offset, x)) <= tol; },
          [&](const family::Arrangement& f) {
            return std::any_of(f.flats.begin(), f.flats.end(), [&](const Flat& fl) {
              return std::fabs(signed_distance(fl.normal, fl.offset, x)) <= tol && bounds_ok(fl.bounds, x, tol);
            });
          },
          [&](const family::Slit& f) {
            const Point v = x - f.tip;
            if (std::fabs(dot(v, f.normal)) > tol) return false;
            const double along = dot(v, f.direction);
            return f.closed ? along >= -tol : along > tol;
          },
          [&](const family::LipschitzGraph& f) {
            return std::fabs(x[d - 1] - f.graph(x.coords().first(d - 1))) <= tol;
          },
          [&](const family::Sphere& f) {
            return std::fabs(distance(x, f.center) - f.radius) <= tol && bounds_ok(f.bounds, x, tol);
          },
          [&](const family::ChartManifold& f) {
            for (const auto& c : f.charts) {
              const Point y = c.inverse(x);
              if (c.domain.contains(y) && c.normal_part(y) <= tol * c.lipschitz) return true;
            }
            return false;
          },
          [&](const family::CantorSet& f) {
            const Point axis = f.end - f.start;
            const double len = norm(axis);
            const double u = dot(x - f.start, axis) / (len * len);
            if (distance(x, f.start + axis * u) > tol) return false;
            return cantor_distance(u) * len <= tol;
          },
          [&](const family::RationalGrid&) {
            const Rationality r0 = decide(x[0], tol), r1 = decide(x[1], tol);
            if (r0 == Rationality::irrational || r1 == Rationality::irrational) return false;
            if (r0 == Rationality::rational && r1 == Rationality::rational) return true;
            throw Error(ErrorCode::undecidable_at_tolerance, "rationality of a coordinate is ambiguous at tolerance");
          },
          [&](const family::IrrationalSquare&) {
            if (x[0] < -tol || x[0] > 1.0 + tol || x[1] < -tol || x[1] > 1.0 + tol) return false;
            const Rationality r0 = decide(x[0], tol), r1 = decide(x[1], tol);
            if (r0 == Rationality::rational || r1 == Rationality::rational) return false;
            if (r0 == Rationality::irrational && r1 == Rationality::irrational) return true;
            throw Error(ErrorCode::undecidable_at_tolerance, "rationality of a coordinate is ambiguous at tolerance");
          },
          [&](const family::TopologistSine& f) {
            if (x[0] > tol) return std::fabs(x[1] - std::sin(1.0 / x[0])) <= tol;
            if (x[0] > 0.0 && !f.closure) return std::fabs(x[1] - std::sin(1.0 / x[0])) <= tol;
            return f.closure && std::fabs(x[0]) <= tol && std::fabs(x[1]) <= 1.0 + tol;
          },
          [&](const family::IsolatedCantorD0& f) { return d0_contains_1d(x[0], f.max_depth, tol); },
      },
      theta.family());
}

CrossingReport segment_crossings(const ExceptionSet& theta, const Segment& s) {
  require_dim(theta, s.a.dim());
  require_dim(theta, s.b.dim());
  const std::size_t d = theta.dimension();
  CrossingReport r = std::visit(
      overloaded{
          [&](const family::FinitePoints& f) {
            CrossingReport out;
            for (const auto& p : f.points) {
              double t = 0.0;
              if (point_segment_distance(p, s, &t) <= kGeomTol) out.crossings.push_back({t, p});
            }
            out.evidence = "point_distance";
            return out;
          },
          [&](const family::Hyperplane& f) {
            CrossingReport out;
            add_flat(out, Flat{f.normal, f.offset, {}}, s);
            out.evidence = "linear_root";
            return out;
          },
          [&](const family::Arrangement& f) {
            CrossingReport out;
            for (const auto& fl : f.flats) add_flat(out, fl, s);
            out.evidence = "linear_roots";
            return out;
          },
          [&](const family::Slit& f) {
            CrossingReport out;
            add_flat(out, slit_flat(f), s);
            if (!f.closed) {
              std::erase_if(out.crossings,
                            [&](const Crossing& c) { return dot(c.point - f.tip, f.direction) <= kGeomTol; });
            }
            out.evidence = "half_line_root";
            return out;
          },
          [&](const family::LipschitzGraph& f) { return crossings_graph(f, s, d); },
          [&](const family::Sphere& f) { return crossings_sphere(f, s); },
          [&](const family::ChartManifold& f) { return crossings_charts(f, s, d); },
          [&](const family::CantorSet& f) { return crossings_cantor(f, s); },
          [&](const family::RationalGrid&) { return crossings_rational_grid(s); },
          [&](const family::IrrationalSquare&) { return crossings_irrational_square(s); },
          [&](const family::TopologistSine& f) { return crossings_sine(f, s); },
          [&](const family::IsolatedCantorD0& f) { return crossings_d0(theta, f, s); },
      },
      theta.family());
  finalize(r, s);
  return r;
}

CrossingReport path_crossings(const ExceptionSet& theta, const Polyline& p) {
  require_dim(theta, p.dim());
  const double total = polyline_length(p);
  CrossingReport out;
  auto rank = [](Classification c) {
    switch (c) {
      case Classification::finite: return 0;
      case Classification::countable_closure: return 1;
      case Classification::unknown: return 2;
      case Classification::uncountable_closure: return 3;
    }
    return 0;
  };
  std::vector<std::string> evidence;
  double offset = 0.0;
  for (std::size_t i = 0; i < p.segment_count(); ++i) {
    const Segment s = p.segment(i);
    const double len = s.length();
    if (len == 0.0 && p.segment_count() > 1) continue;
    const CrossingReport r = segment_crossings(theta, s);
    auto map = [&](double t) { return total > 0.0 ? (offset + t * len) / total : 0.0; };
    for (const auto& c : r.crossings) {
      if (!out.crossings.empty() && distance(out.crossings.back().point, c.point) <= kGeomTol) continue;
      out.crossings.push_back({map(c.param), c.point});
    }
    for (const auto& run : r.runs) out.runs.emplace_back(map(run.first), map(run.second));
    if (rank(r.classification) > rank(out.classification)) out.classification = r.classification;
    if (!r.evidence.empty() && std::find(evidence.begin(), evidence.end(), r.evidence) == evidence.end())
      evidence.push_back(r.evidence);
    offset += len;
  }
  for (std::size_t i = 0; i < evidence.size(); ++i) out.evidence += (i ? ";" : "") + evidence[i];
  return out;
}

namespace {

// One draw near the box; sample_member keeps the draws that land inside.
std::optional<Point> draw_member(const ExceptionSet& theta, Rng& rng, const Point& lo, const Point& hi) {
  const std::size_t d = theta.dimension();
  return std::visit(
      overloaded{
          [&](const family::FinitePoints& f) -> std::optional<Point> {
            if (f.points.empty()) return std::nullopt;
            return f.points[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(f.points.size()) - 1))];
          },
          [&](const family::Hyperplane& f) -> std::optional<Point> {
            const Point x = rng.in_box(lo, hi);
            const double n2 = dot(f.normal, f.normal);
            return x - f.normal * ((dot(f.normal, x) - f.offset) / n2);
          },
          [&](const family::Arrangement& f) -> std::optional<Point> {
            if (f.flats.empty()) return std::nullopt;
            for (int attempt = 0; attempt < 256; ++attempt) {
              const auto& fl = f.flats[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(f.flats.size()) - 1))];
              const Point x = rng.in_box(lo, hi);
              const Point y = x - fl.normal * ((dot(fl.normal, x) - fl.offset) / dot(fl.normal, fl.normal));
              if (bounds_ok(fl.bounds, y, 0.0)) return y;
            }
            return std::nullopt;
          },
          [&](const family::Slit& f) -> std::optional<Point> {
            const double scale = std::max(distance(lo, hi), 1e-3);
            Point v = rng.in_box(lo, hi) - f.tip;
            v -= f.normal * dot(v, f.normal);
            v -= f.direction * dot(v, f.direction);
            return f.tip + v + f.direction * rng.uniform(1e-6 * scale, scale);
          },
          [&](const family::LipschitzGraph& f) -> std::optional<Point> {
            Point x = rng.in_box(lo, hi);
            x[d - 1] = f.graph(x.coords().first(d - 1));
            return x;
          },
          [&](const family::Sphere& f) -> std::optional<Point> {
            for (int attempt = 0; attempt < 256; ++attempt) {
              const Point x = f.center + rng.unit_vector(d) * f.radius;
              if (bounds_ok(f.bounds, x, 0.0)) return x;
            }
            return std::nullopt;
          },
          [&](const family::ChartManifold& f) -> std::optional<Point> {
            const auto& c = f.charts[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(f.charts.size()) - 1))];
            Point y;
            switch (c.domain.shape) {
              case ChartDomain::Shape::ball: y = rng.in_ball(c.domain.center, 0.999 * c.domain.radius); break;
              case ChartDomain::Shape::box: y = rng.in_box(c.domain.lo, c.domain.hi); break;
              default: y = c.inverse(rng.in_box(lo, hi)); break;
            }
            for (std::size_t i = c.manifold_dim; i < d; ++i) y[i] = 0.0;
            if (!c.domain.contains(y)) return std::nullopt;
            return c.forward(y);
          },
          [&](const family::CantorSet& f) -> std::optional<Point> {
            double u = 0.0, w = 1.0;
            for (int k = 0; k < 40; ++k) {
              w /= 3.0;
              if (rng.bits() & 1U) u += 2.0 * w;
            }
            return lerp(f.start, f.end, u);
          },
          [&](const family::RationalGrid&) -> std::optional<Point> {
            std::vector<double> c(2);
            for (std::size_t i = 0; i < 2; ++i) {
              const std::int64_t q = rng.integer(1, 64);
              const double a = std::floor(lo[i] * q), b = std::ceil(hi[i] * q);
              c[i] = static_cast<double>(rng.integer(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b))) / q;
            }
            return Point(c);
          },
          [&](const family::IrrationalSquare&) -> std::optional<Point> {
            for (int attempt = 0; attempt < 64; ++attempt) {
              const Point x{rng.uniform(), rng.uniform()};
              if (!is_rational(x[0]) && !is_rational(x[1])) return x;
            }
            return std::nullopt;
          },
          [&](const family::TopologistSine& f) -> std::optional<Point> {
            if (f.closure && (rng.bits() & 3U) == 0) return Point{0.0, rng.uniform(-1.0, 1.0)};
            const double t = rng.uniform(0.05, 1.0);
            return Point{t, std::sin(1.0 / t)};
          },
          [&](const family::IsolatedCantorD0& f) -> std::optional<Point> {
            // Right endpoint of a random gap at a random level.
            const int level = static_cast<int>(rng.integer(0, 8));
            double s = 0.0;
            if (level > 0) {
              double w = 1.0;
              for (int k = 1; k < level; ++k) {
                w /= 3.0;
                if (rng.bits() & 1U) s += 2.0 * w;
              }
              s += 2.0 * w / 3.0;
            }
            const int j = static_cast<int>(rng.integer(1, std::min(f.max_depth, 6)));
            Point x = rng.in_box(lo, hi);
            x[0] = s - std::pow(3.0, -(level + j));
            return x;
          },
      },
      theta.family());
}

}  // namespace

std::optional<Point> sample_member(const ExceptionSet& theta, Rng& rng, const Point& lo, const Point& hi) {
  require_dim(theta, lo.dim());
  require_dim(theta, hi.dim());
  for (int attempt = 0; attempt < 64; ++attempt) {
    const auto p = draw_member(theta, rng, lo, hi);
    if (!p) return std::nullopt;
    bool inside = true;
    for (std::size_t i = 0; i < p->dim(); ++i) inside = inside && (*p)[i] >= lo[i] - kGeomTol && (*p)[i] <= hi[i] + kGeomTol;
    if (inside) return p;
  }
  return std::nullopt;
}

ExceptionSet closure(const ExceptionSet& theta) {
  switch (theta.kind()) {
    case Kind::slit: {
      auto s = *theta.as<family::Slit>();
      s.closed = true;
      return ExceptionSet(theta.dimension(), s);
    }
    case Kind::topologist_sine:
      return ExceptionSet(2, family::TopologistSine{true});
    case Kind::chart_manifold: {
      auto c = *theta.as<family::ChartManifold>();
      c.closed = true;
      return ExceptionSet(theta.dimension(), c);
    }
    case Kind::rational_grid:
    case Kind::irrational_square:
      throw Error(ErrorCode::precondition_failed, "closure of this set has interior points");
    case Kind::isolated_cantor_d0:
      throw Error(ErrorCode::precondition_failed, "closure of this set adds the Cantor set and is not represented");
    default:
      return theta;
  }
}

bool is_closed_subset(const ExceptionSet& theta) {
  switch (theta.kind()) {
    case Kind::slit: return theta.as<family::Slit>()->closed;
    case Kind::chart_manifold: return theta.as<family::ChartManifold>()->closed;
    case Kind::topologist_sine: return theta.as<family::TopologistSine>()->closure;
    case Kind::rational_grid:
    case Kind::irrational_square:
    case Kind::isolated_cantor_d0: return false;
    default: return true;
  }
}

bool is_lebesgue_null(const ExceptionSet& theta) { return theta.kind() != Kind::irrational_square; }

bool known_non_permeable(const ExceptionSet& theta) {
  switch (theta.kind()) {
    case Kind::irrational_square:
    case Kind::isolated_cantor_d0: return true;
    case Kind::cantor_set: return theta.dimension() == 1;
    default: return false;
  }
}

std::vector<Point> feature_points(const ExceptionSet& theta) {
  const std::size_t d = theta.dimension();
  std::vector<Point> out;
  std::visit(overloaded{
                 [&](const family::FinitePoints& f) { out = f.points; },
                 [&](const family::Hyperplane&) {},
                 [&](const family::Arrangement& f) {
                   if (d != 2) return;
                   // Pairwise line intersections and bound endpoints.
                   auto meet = [&](const Point& n1, double c1, const Point& n2, double c2) -> std::optional<Point> {
                     const double det = n1[0] * n2[1] - n1[1] * n2[0];
                     if (std::fabs(det) < 1e-14) return std::nullopt;
                     return Point{(c1 * n2[1] - c2 * n1[1]) / det, (n1[0] * c2 - n2[0] * c1) / det};
                   };
                   for (std::size_t i = 0; i < f.flats.size(); ++i) {
                     for (const auto& b : f.flats[i].bounds)
                       if (auto p = meet(f.flats[i].normal, f.flats[i].offset, b.normal, b.offset)) out.push_back(*p);
                     for (std::size_t j = i + 1; j < f.flats.size(); ++j)
                       if (auto p = meet(f.flats[i].normal, f.flats[i].offset, f.flats[j].normal, f.flats[j].offset))
                         out.push_back(*p);
                   }
                 },
                 [&](const family::Slit& f) { out.push_back(f.tip); },
                 [&](const family::LipschitzGraph&) {},
                 [&](const family::Sphere& f) {
                   for (std::size_t i = 0; i < d; ++i) {
                     Point e = Point::zeros(d);
                     e[i] = f.radius;
                     out.push_back(f.center + e);
                     out.push_back(f.center - e);
                   }
                 },
                 [&](const family::ChartManifold& f) {
                   for (const auto& c : f.charts)
                     if (c.domain.shape == ChartDomain::Shape::ball) out.push_back(c.forward(c.domain.center));
                 },
                 [&](const family::CantorSet& f) {
                   out.push_back(f.start);
                   out.push_back(f.end);
                 },
                 [&](const family::RationalGrid&) {},
                 [&](const family::IrrationalSquare&) {
                   out.push_back(Point{0.0, 0.0});
                   out.push_back(Point{1.0, 1.0});
                 },
                 [&](const family::TopologistSine&) {
                   out.push_back(Point{0.0, 1.0});
                   out.push_back(Point{0.0, -1.0});
                 },
                 [&](const family::IsolatedCantorD0&) {
                   Point a = Point::zeros(d), b = Point::zeros(d);
                   b[0] = 1.0;
                   out.push_back(a);
                   out.push_back(b);
                 },
             },
             theta.family());
  return out;
}

bool may_meet_ball(const ExceptionSet& theta, const Point& c, double r) {
  const std::size_t d = theta.dimension();
  return std::visit(
      overloaded{
          [&](const family::FinitePoints& f) {
            return std::any_of(f.points.begin(), f.points.end(), [&](const Point& p) { return distance(p, c) <= r; });
          },
          [&](const family::Hyperplane& f) { return std::fabs(signed_distance(f.normal, f.offset, c)) <= r; },
          [&](const family::Arrangement& f) {
            return std::any_of(f.flats.begin(), f.flats.end(), [&](const Flat& fl) {
              if (std::fabs(signed_distance(fl.normal, fl.offset, c)) > r) return false;
              for (const auto& b : fl.bounds)
                if (signed_distance(b.normal, b.offset, c) > r) return false;
              return true;
            });
          },
          [&](const family::Slit& f) {
            const Point v = c - f.tip;
            const double along = std::max(0.0, dot(v, f.direction));
            return distance(v, f.direction * along) <= r;
          },
          [&](const family::LipschitzGraph& f) {
            return std::fabs(c[d - 1] - f.graph(c.coords().first(d - 1))) <= r * (1.0 + f.graph.lipschitz);
          },
          [&](const family::Sphere& f) { return std::fabs(distance(c, f.center) - f.radius) <= r; },
          [&](const family::ChartManifold& f) {
            for (const auto& ch : f.charts) {
              const Point y = ch.inverse(c);
              if (!ch.domain.contains(y) || ch.domain.clearance(y) <= ch.lipschitz * r) return true;
              if (ch.normal_part(y) <= ch.lipschitz * r) return true;
            }
            return false;
          },
          [&](const family::CantorSet& f) { return point_segment_distance(c, Segment{f.start, f.end}) <= r; },
          [&](const family::RationalGrid&) { return true; },
          [&](const family::IrrationalSquare&) {
            return c[0] >= -r && c[0] <= 1.0 + r && c[1] >= -r && c[1] <= 1.0 + r;
          },
          [&](const family::TopologistSine&) {
            if (std::fabs(c[1]) > 1.0 + r) return false;
            if (c[0] - r <= 0.0) return c[0] + r >= 0.0 || false;
            const double lo = c[0] - r;
            const double slope = 1.0 / (lo * lo);
            return std::fabs(c[1] - std::sin(1.0 / c[0])) <= r + slope * r;
          },
          [&](const family::IsolatedCantorD0&) { return c[0] >= -1.0 - r && c[0] <= 1.0 + r; },
      },
      theta.family());
}

std::optional<Chart> chart_near(const ExceptionSet& theta, const Point& p) {
  const std::size_t d = theta.dimension();
  switch (theta.kind()) {
    case Kind::hyperplane: {
      const auto& f = *theta.as<family::Hyperplane>();
      return make_hyperplane_chart(f.normal, f.offset);
    }
    case Kind::slit: {
      const auto& f = *theta.as<family::Slit>();
      return make_slit_chart(f.tip, f.direction, f.normal);
    }
    case Kind::arrangement: {
      const auto& f = *theta.as<family::Arrangement>();
      const Flat* best = nullptr;
      double best_d = kInf;
      for (const auto& fl : f.flats) {
        const double dist = std::fabs(signed_distance(fl.normal, fl.offset, p));
        if (dist < best_d) best_d = dist, best = &fl;
      }
      if (!best) return std::nullopt;
      return make_hyperplane_chart(best->normal, best->offset);
    }
    case Kind::lipschitz_graph:
      return make_graph_chart(theta.as<family::LipschitzGraph>()->graph, d);
    case Kind::sphere: {
      const auto& f = *theta.as<family::Sphere>();
      if (d != 2) return std::nullopt;
      return make_circle_chart(f.center, f.radius, p);
    }
    case Kind::chart_manifold: {
      for (const auto& c : theta.as<family::ChartManifold>()->charts) {
        const Point y = c.inverse(p);
        if (c.domain.contains(y)) return c;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

double cantor_distance(double u) {
  if (u < 0.0) return -u;
  if (u > 1.0) return u - 1.0;
  double a = 0.0, w = 1.0;
  for (int k = 0; k < 60; ++k) {
    const double v = (u - a) / w;
    if (v <= 1.0 / 3.0) {
      w /= 3.0;
    } else if (v >= 2.0 / 3.0) {
      a += 2.0 * w / 3.0;
      w /= 3.0;
    } else {
      return std::min(u - (a + w / 3.0), (a + 2.0 * w / 3.0) - u);
    }
  }
  return 0.0;
}

bool cantor_meets_open_interval(double lo, double hi) {
  lo += kCantorMargin;
  hi -= kCantorMargin;
  if (!(lo < hi)) return false;
  // Depth-first over the construction intervals [a, a + w].
  struct Node {
    double a, w;
    int depth;
  };
  std::vector<Node> stack{{0.0, 1.0, 0}};
  while (!stack.empty()) {
    const Node n = stack.back();
    stack.pop_back();
    if (hi < n.a || lo > n.a + n.w) continue;
    if ((lo <= n.a && n.a <= hi) || (lo <= n.a + n.w && n.a + n.w <= hi)) return true;
    if (n.depth > 45) return true;
    stack.push_back({n.a, n.w / 3.0, n.depth + 1});
    stack.push_back({n.a + 2.0 * n.w / 3.0, n.w / 3.0, n.depth + 1});
  }
  return false;
}

}  // namespace permeable
