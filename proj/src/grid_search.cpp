#include "permeable/grid_search.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "permeable/error.hpp"

namespace permeable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool in_region(const std::vector<HalfSpace>& region, const Point& p) {
  for (const auto& h : region)
    if (!h.satisfied(p, kGeomTol)) return false;
  return true;
}

struct Grid {
  double x0, y0, h;
  std::int64_t nx, ny;

  std::int64_t index(std::int64_t i, std::int64_t j) const { return i * ny + j; }
  Point node(std::int64_t k) const {
    return Point{x0 + static_cast<double>(k / ny) * h, y0 + static_cast<double>(k % ny) * h};
  }
};

constexpr int kMoves[16][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1}, {1, 1},   {1, -1},  {-1, 1},  {-1, -1},
                               {1, 2},  {2, 1},  {-1, 2}, {-2, 1}, {1, -2},  {2, -1},  {-1, -2}, {-2, -1}};

std::optional<Polyline> search_box(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region,
                                   const Point& x, const Point& y, const Point& lo, const Point& hi, int depth,
                                   std::size_t node_cap, std::size_t& nodes) {
  const double side = std::max(hi[0] - lo[0], hi[1] - lo[1]);
  Grid g{lo[0], lo[1], side * std::ldexp(1.0, -depth), 0, 0};
  g.nx = static_cast<std::int64_t>(std::ceil((hi[0] - lo[0]) / g.h)) + 1;
  g.ny = static_cast<std::int64_t>(std::ceil((hi[1] - lo[1]) / g.h)) + 1;
  const auto n = static_cast<std::size_t>(g.nx * g.ny);
  if (n > node_cap) throw Error(ErrorCode::budget_exhausted, "grid node budget exceeded at depth " + std::to_string(depth));
  nodes = n;

  // 0 free far from the obstacle, 1 free but near, 2 blocked.
  std::vector<std::uint8_t> state(n, 0);
  const double reach = 2.3 * g.h;
  for (std::size_t k = 0; k < n; ++k) {
    const Point p = g.node(static_cast<std::int64_t>(k));
    if (!in_region(region, p)) {
      state[k] = 2;
      continue;
    }
    if (obstacle && may_meet_ball(*obstacle, p, reach)) state[k] = contains(*obstacle, p, kGeomTol) ? 2 : 1;
  }

  // Virtual nodes n (source x) and n + 1 (target y).
  const std::size_t src = n, dst = n + 1;
  std::vector<double> dist(n + 2, kInf);
  std::vector<std::int64_t> prev(n + 2, -1);

  auto attach = [&](const Point& p) {
    std::vector<std::size_t> out;
    const double r = 2.5 * g.h;
    const auto i0 = static_cast<std::int64_t>(std::floor((p[0] - r - g.x0) / g.h));
    const auto j0 = static_cast<std::int64_t>(std::floor((p[1] - r - g.y0) / g.h));
    for (std::int64_t i = std::max<std::int64_t>(0, i0); i <= std::min(g.nx - 1, i0 + 6); ++i)
      for (std::int64_t j = std::max<std::int64_t>(0, j0); j <= std::min(g.ny - 1, j0 + 6); ++j) {
        const auto k = static_cast<std::size_t>(g.index(i, j));
        if (state[k] == 2) continue;
        const Point q = g.node(static_cast<std::int64_t>(k));
        if (distance(p, q) > r) continue;
        if (segment_free(obstacle, region, Segment{p, q})) out.push_back(k);
      }
    return out;
  };
  const auto from_x = attach(x);
  const auto to_y = attach(y);
  std::vector<std::uint8_t> is_target(n, 0);
  for (auto k : to_y) is_target[k] = 1;

  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    if (k == dst) break;
    auto relax = [&](std::size_t to, double w) {
      if (d + w < dist[to]) {
        dist[to] = d + w;
        prev[to] = static_cast<std::int64_t>(k);
        pq.emplace(dist[to], to);
      }
    };
    if (k == src) {
      for (auto t : from_x) relax(t, distance(x, g.node(static_cast<std::int64_t>(t))));
      continue;
    }
    const Point p = g.node(static_cast<std::int64_t>(k));
    if (is_target[k]) relax(dst, distance(p, y));
    const std::int64_t i = static_cast<std::int64_t>(k) / g.ny, j = static_cast<std::int64_t>(k) % g.ny;
    for (const auto& mv : kMoves) {
      const std::int64_t a = i + mv[0], b = j + mv[1];
      if (a < 0 || b < 0 || a >= g.nx || b >= g.ny) continue;
      const auto t = static_cast<std::size_t>(g.index(a, b));
      if (state[t] == 2) continue;
      const double w = g.h * std::hypot(mv[0], mv[1]);
      if (d + w >= dist[t]) continue;
      if ((state[k] == 1 || state[t] == 1) &&
          !segment_free(obstacle, region, Segment{p, g.node(static_cast<std::int64_t>(t))}))
        continue;
      relax(t, w);
    }
  }
  if (dist[dst] == kInf) return std::nullopt;

  std::vector<Point> pts;
  for (std::int64_t k = static_cast<std::int64_t>(dst); k != -1; k = prev[static_cast<std::size_t>(k)]) {
    const auto u = static_cast<std::size_t>(k);
    pts.push_back(u == dst ? y : (u == src ? x : g.node(k)));
  }
  std::reverse(pts.begin(), pts.end());
  return Polyline::from_points(pts);
}

// Drops vertices lying on the chord of their neighbours.
std::vector<Point> collapse_collinear(const std::vector<Point>& v) {
  if (v.size() <= 2) return v;
  std::vector<Point> out{v.front()};
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (point_segment_distance(v[i], Segment{out.back(), v[i + 1]}) <= 1e-12 &&
        std::fabs(distance(out.back(), v[i]) + distance(v[i], v[i + 1]) - distance(out.back(), v[i + 1])) <= 1e-12)
      continue;
    out.push_back(v[i]);
  }
  out.push_back(v.back());
  return out;
}

double length_of(const std::vector<Point>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) s += distance(v[i], v[i + 1]);
  return s;
}

}  // namespace

bool segment_free(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region, const Segment& s) {
  if (!in_region(region, s.a) || !in_region(region, s.b)) return false;
  if (!obstacle) return true;
  const CrossingReport r = segment_crossings(*obstacle, s);
  return r.is_finite() && r.crossings.empty() && r.runs.empty();
}

Polyline smooth_path(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region, const Polyline& path) {
  std::vector<Point> v = collapse_collinear(path.vertices());
  auto free = [&](const Point& a, const Point& b) { return segment_free(obstacle, region, Segment{a, b}); };

  double len = length_of(v);
  for (int pass = 0; pass < 64; ++pass) {
    std::vector<Point> out{v.front()};
    std::size_t i = 0;
    while (i + 1 < v.size()) {
      const std::size_t last = v.size() - 1;
      std::size_t good = i + 1, step = 1;
      std::size_t bad = last + 1;
      // Gallop forward, then binary search between the last good and first bad index.
      while (i + 2 * step <= last) {
        if (free(v[i], v[i + 2 * step])) {
          good = i + 2 * step;
          step *= 2;
        } else {
          bad = i + 2 * step;
          break;
        }
      }
      if (bad == last + 1 && good < last && free(v[i], v[last])) good = last;
      else if (bad == last + 1) bad = last;
      while (bad > good + 1) {
        const std::size_t mid = good + (bad - good) / 2;
        if (free(v[i], v[mid])) good = mid;
        else bad = mid;
      }
      out.push_back(v[good]);
      i = good;
    }
    out = collapse_collinear(out);
    const double new_len = length_of(out);
    v = std::move(out);
    if (len - new_len <= kGeomTol) {
      len = new_len;
      break;
    }
    len = new_len;
  }

  // Pull each interior vertex toward the chord of its neighbours.
  for (int sweep = 0; sweep < 4; ++sweep) {
    bool moved = false;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      double t = 0.0;
      point_segment_distance(v[k], Segment{v[k - 1], v[k + 1]}, &t);
      const Point target = lerp(v[k - 1], v[k + 1], t);
      for (double lambda = 1.0; lambda > 1e-7; lambda *= 0.5) {
        const Point cand = lerp(v[k], target, lambda);
        if (distance(v[k - 1], cand) + distance(cand, v[k + 1]) >=
            distance(v[k - 1], v[k]) + distance(v[k], v[k + 1]) - 1e-15)
          break;
        if (free(v[k - 1], cand) && free(cand, v[k + 1])) {
          v[k] = cand;
          moved = true;
          break;
        }
      }
    }
    v = collapse_collinear(v);
    if (!moved) break;
  }
  return Polyline::from_points(v);
}

GridSearchResult grid_shortest_path(const ExceptionSet* obstacle, const std::vector<HalfSpace>& region,
                                    const Point& x, const Point& y, const GridSearchOptions& options) {
  require_same_dimension(x, y);
  if (x.dim() != 2) throw Error(ErrorCode::unsupported_family_dimension, "grid search is planar");
  GridSearchResult result;
  if (segment_free(obstacle, region, Segment{x, y})) {
    result.path = Polyline::from_points({x, y});
    result.diagnostic = "straight_segment";
    return result;
  }

  Point lo{std::min(x[0], y[0]), std::min(x[1], y[1])};
  Point hi{std::max(x[0], y[0]), std::max(x[1], y[1])};
  if (obstacle) {
    const double reach = 4.0 * std::max(distance(x, y), 1e-6);
    const Point mid = lerp(x, y, 0.5);
    for (const auto& f : feature_points(*obstacle)) {
      if (distance(f, mid) > reach) continue;
      for (int a = 0; a < 2; ++a) {
        lo[a] = std::min(lo[a], f[a]);
        hi[a] = std::max(hi[a], f[a]);
      }
    }
  }
  const double floor_pad = 0.25 * std::max(distance(x, y), 1e-9);
  for (int a = 0; a < 2; ++a) {
    const double pad = std::max(options.inflate * (hi[a] - lo[a]), floor_pad);
    lo[a] -= pad;
    hi[a] += pad;
  }

  for (int e = 0; e <= options.expansions; ++e) {
    std::optional<Polyline> best;
    double best_len = kInf;
    // Coarser grids nest in finer ones; keeping the minimum makes the
    // estimate monotone in depth.
    for (int depth = std::min(2, options.depth); depth <= options.depth; ++depth) {
      std::size_t nodes = 0;
      auto raw = search_box(obstacle, region, x, y, lo, hi, depth, options.node_cap, nodes);
      result.nodes += nodes;
      if (!raw) continue;
      Polyline smooth = smooth_path(obstacle, region, *raw);
      const double len = polyline_length(smooth);
      if (len < best_len) {
        best_len = len;
        best = std::move(smooth);
      }
    }
    if (best) {
      result.path = std::move(best);
      result.diagnostic = "grid_depth_" + std::to_string(options.depth);
      return result;
    }
    for (int a = 0; a < 2; ++a) {
      const double w = hi[a] - lo[a];
      lo[a] -= 0.5 * w;
      hi[a] += 0.5 * w;
    }
  }
  result.diagnostic = "disconnected";
  return result;
}

}  // namespace permeable
