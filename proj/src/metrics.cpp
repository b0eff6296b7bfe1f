#include "permeable/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "permeable/error.hpp"
#include "permeable/grid_search.hpp"
#include "permeable/random.hpp"
#include "permeable/rational.hpp"

namespace permeable {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MetricEstimate straight(const Point& x, const Point& y, std::string method) {
  MetricEstimate m;
  m.lower = m.upper = distance(x, y);
  m.witness = Polyline::from_points({x, y});
  m.method = std::move(method);
  return m;
}

MetricEstimate infinite(std::string method, std::string diagnostic) {
  MetricEstimate m;
  m.lower = m.upper = kInf;
  m.infinite = true;
  m.method = std::move(method);
  m.diagnostic = std::move(diagnostic);
  return m;
}

bool admissible(const CrossingReport& r, bool finite_only) {
  if (r.classification == Classification::finite) return true;
  return !finite_only && r.classification == Classification::countable_closure;
}

// Slit in edge-adapted coordinates: along u, along n, and the edge part.
struct SlitCoords {
  double a, b;
  Point w;
};

SlitCoords slit_coords(const family::Slit& s, const Point& p) {
  const Point rel = p - s.tip;
  const double a = dot(rel, s.direction), b = dot(rel, s.normal);
  return {a, b, rel - s.direction * a - s.normal * b};
}

double dyadic_between(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  const double mid = 0.5 * (lo + hi);
  for (int k = 0; k <= 50; ++k) {
    const double scale = std::ldexp(1.0, k);
    const double r = std::round(mid * scale) / scale;
    if (r >= lo && r <= hi) return r;
  }
  return std::round(mid * 0x1p40) / 0x1p40;
}

// Staircase along rational lines for the irrational square.
std::optional<Polyline> l1_staircase(const Point& x, const Point& y) {
  const bool x0 = is_rational(x[0]), x1 = is_rational(x[1]);
  const bool y0 = is_rational(y[0]), y1 = is_rational(y[1]);
  std::vector<Point> v;
  if (x1 && y0) {
    v = {x, Point{y[0], x[1]}, y};
  } else if (x0 && y1) {
    v = {x, Point{x[0], y[1]}, y};
  } else if (x1 && y1) {
    const double r = dyadic_between(x[0], y[0]);
    v = {x, Point{r, x[1]}, Point{r, y[1]}, y};
  } else if (x0 && y0) {
    const double r = dyadic_between(x[1], y[1]);
    v = {x, Point{x[0], r}, Point{y[0], r}, y};
  } else {
    return std::nullopt;
  }
  return Polyline::from_points(v);
}

// Replaces every run of the straight segment inside the set by a chart detour.
std::optional<Polyline> detour_path(const ExceptionSet& theta, const Point& x, const Point& y, double eps) {
  const Segment s{x, y};
  const CrossingReport rep = segment_crossings(theta, s);
  if (rep.runs.empty()) return std::nullopt;
  std::vector<Point> v{x};
  const double per_run = eps / (4.0 * static_cast<double>(rep.runs.size()));
  for (const auto& [t0, t1] : rep.runs) {
    const Point entry = s.at(t0), exit = s.at(t1);
    const auto chart = chart_near(theta, s.at(0.5 * (t0 + t1)));
    if (!chart) return std::nullopt;
    const Point u0 = chart->inverse(entry), u1 = chart->inverse(exit);
    const double ell = distance(u0, u1);
    double a = 0.5;
    const double clearance = std::min(chart->domain.clearance(u0), chart->domain.clearance(u1));
    if (clearance > 0.0 && std::isfinite(clearance) && ell > 0.0) a = std::min(a, 0.5 * clearance / ell);
    if (ell > 0.0) a = std::min(a, per_run / (ell * chart->lipschitz));
    std::optional<Polyline> piece;
    for (int k = 0; k < 40 && !piece; ++k) {
      try {
        piece = chart_detour(*chart, entry, exit, a);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::detour_leaves_chart) throw;
        a *= 0.5;
      }
    }
    if (!piece) return std::nullopt;
    const auto& pv = piece->vertices();
    v.insert(v.end(), pv.begin(), pv.end());
  }
  v.push_back(y);
  return Polyline::from_points(v, 0.0);
}

}  // namespace

Domain slit_plane() {
  Domain d;
  d.dimension = 2;
  d.obstacle = make_slit(true);
  return d;
}

Domain half_plane(const Point& normal, double offset) {
  Domain d;
  d.dimension = normal.dim();
  d.region.push_back(HalfSpace{normal, offset});
  return d;
}

std::optional<double> slit_distance(const family::Slit& slit, const Point& x, const Point& y) {
  family::Slit closed = slit;
  closed.closed = true;
  const ExceptionSet set(x.dim(), closed);
  const CrossingReport r = segment_crossings(set, Segment{x, y});
  if (r.is_finite() && r.crossings.empty()) return std::nullopt;
  const SlitCoords cx = slit_coords(slit, x), cy = slit_coords(slit, y);
  const double rx = std::hypot(cx.a, cx.b), ry = std::hypot(cy.a, cy.b);
  return std::hypot(distance(cx.w, cy.w), rx + ry);
}

MetricEstimate intrinsic_distance(const Domain& domain, const Point& x, const Point& y, int depth,
                                  DistanceMethod method) {
  require_same_dimension(x, y);
  if (x.dim() != domain.dimension) throw Error(ErrorCode::dimension_mismatch, "points do not match domain dimension");
  const ExceptionSet* obstacle = domain.obstacle ? &*domain.obstacle : nullptr;
  if (obstacle) {
    if (!is_closed_subset(*obstacle))
      throw Error(ErrorCode::precondition_failed, "obstacle must be a closed set");
    if (contains(*obstacle, x) || contains(*obstacle, y))
      throw Error(ErrorCode::out_of_domain, "endpoint lies on the obstacle");
  }
  for (const auto& h : domain.region)
    if (!h.satisfied(x) || !h.satisfied(y)) throw Error(ErrorCode::out_of_domain, "endpoint outside the region");

  if (x == y) {
    MetricEstimate m;
    m.witness = Polyline::constant(x);
    m.method = "constant";
    return m;
  }
  if (segment_free(obstacle, domain.region, Segment{x, y})) return straight(x, y, "straight");

  std::optional<double> exact;
  const family::Slit* slit = obstacle ? obstacle->as<family::Slit>() : nullptr;
  if (slit && domain.region.empty()) exact = slit_distance(*slit, x, y);

  if (method == DistanceMethod::automatic) {
    if (x.dim() == 1) return infinite("analytic_1d", "disconnected");
    if (exact) {
      // Pass just outside the edge of the slit.
      const SlitCoords cx = slit_coords(*slit, x), cy = slit_coords(*slit, y);
      const double rx = std::hypot(cx.a, cx.b), ry = std::hypot(cy.a, cy.b);
      const double scale = std::max({1.0, rx, ry});
      const Point e = slit->tip + lerp(cx.w, cy.w, rx / (rx + ry)) - slit->direction * (1e-6 * scale);
      const Polyline w = Polyline::from_points({x, e, y});
      if (segment_free(obstacle, {}, Segment{x, e}) && segment_free(obstacle, {}, Segment{e, y})) {
        MetricEstimate m;
        m.lower = *exact;
        m.upper = polyline_length(w);
        m.witness = w;
        m.method = "analytic_slit";
        return m;
      }
    }
  }
  if (x.dim() != 2)
    throw Error(ErrorCode::unsupported_family_dimension, "grid search needs dimension 2");
  GridSearchOptions opts;
  opts.depth = depth;
  const GridSearchResult g = grid_shortest_path(obstacle, domain.region, x, y, opts);
  if (!g.path) return infinite("grid", g.diagnostic);
  MetricEstimate m;
  m.upper = polyline_length(*g.path);
  m.lower = std::min(m.upper, exact.value_or(distance(x, y)));
  m.witness = g.path;
  m.method = "grid";
  m.diagnostic = g.diagnostic;
  return m;
}

MetricEstimate complement_distance(const ExceptionSet& theta, const Point& x, const Point& y, int depth) {
  require_same_dimension(x, y);
  if (x.dim() != theta.dimension()) throw Error(ErrorCode::dimension_mismatch, "points do not match set dimension");
  const ExceptionSet closed = closure(theta);
  if (contains(closed, x) || contains(closed, y)) throw Error(ErrorCode::out_of_domain, "endpoint lies on the set");
  if (segment_free(&closed, {}, Segment{x, y})) return straight(x, y, "straight");
  switch (closed.kind()) {
    case Kind::finite_points:
      if (x.dim() >= 2) {
        // Points do not disconnect; the infimum is the Euclidean distance.
        MetricEstimate m = straight(x, y, "analytic_points");
        const auto& pts = closed.as<family::FinitePoints>()->points;
        double gap = distance(x, y);
        for (const auto& p : pts) gap = std::min({gap, distance(p, x), distance(p, y)});
        Point v = Point::zeros(x.dim());
        v[x[0] != y[0] ? 1 : 0] = 1.0;
        for (double shift = 1e-3 * gap; shift > 1e-12; shift *= 0.5) {
          const Point z = lerp(x, y, 0.5) + v * shift;
          if (segment_free(&closed, {}, Segment{x, z}) && segment_free(&closed, {}, Segment{z, y})) {
            m.witness = Polyline::from_points({x, z, y});
            m.upper = polyline_length(*m.witness);
            return m;
          }
        }
        m.witness.reset();
        return m;
      }
      break;
    case Kind::hyperplane:
      return infinite("analytic_separation", "hyperplane separates the endpoints");
    case Kind::sphere:
      if (closed.as<family::Sphere>()->bounds.empty())
        return infinite("analytic_separation", "sphere separates the endpoints");
      break;
    default:
      break;
  }
  Domain d;
  d.dimension = x.dim();
  d.obstacle = closed;
  return intrinsic_distance(d, x, y, depth);
}

MetricEstimate rational_lines_distance(const Point& x, const Point& y, int depth) {
  require_same_dimension(x, y);
  if (x.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "rational line search is planar");
  for (const Point* p : {&x, &y})
    if ((*p)[0] < 0 || (*p)[0] > 1 || (*p)[1] < 0 || (*p)[1] > 1)
      throw Error(ErrorCode::out_of_domain, "points must lie in the unit square");
  if (depth < 1 || depth > 12) throw Error(ErrorCode::invalid_argument, "depth must lie in [1, 12]");

  struct Line {
    double c;
    bool open;  // traversable: the coordinate is rational
  };
  auto lines = [&](double a, double b) {
    std::vector<Line> out;
    const int n = 1 << depth;
    for (int i = 0; i <= n; ++i) out.push_back({std::ldexp(static_cast<double>(i), -depth), true});
    out.push_back({a, is_rational(a)});
    out.push_back({b, is_rational(b)});
    std::sort(out.begin(), out.end(), [](const Line& l, const Line& r) { return l.c < r.c; });
    std::vector<Line> merged;
    for (const auto& l : out) {
      if (!merged.empty() && merged.back().c == l.c) merged.back().open = merged.back().open || l.open;
      else merged.push_back(l);
    }
    return merged;
  };
  const auto vx = lines(x[0], y[0]);  // vertical lines x_1 = c
  const auto hy = lines(x[1], y[1]);  // horizontal lines x_2 = c
  auto find = [](const std::vector<Line>& ls, double c) {
    return static_cast<std::size_t>(
        std::lower_bound(ls.begin(), ls.end(), c, [](const Line& l, double v) { return l.c < v; }) - ls.begin());
  };
  const std::size_t nx = vx.size(), ny = hy.size();
  const std::size_t sx = find(vx, x[0]), sy = find(hy, x[1]);
  const std::size_t tx = find(vx, y[0]), ty = find(hy, y[1]);
  if (!(vx[sx].open || hy[sy].open) || !(vx[tx].open || hy[ty].open))
    return infinite("rational_lines", "endpoint_off_rational_lines");

  std::vector<double> dist(nx * ny, kInf);
  std::vector<std::int64_t> prev(nx * ny, -1);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  const std::size_t src = sx * ny + sy, dst = tx * ny + ty;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, k] = pq.top();
    pq.pop();
    if (d > dist[k]) continue;
    if (k == dst) break;
    const std::size_t i = k / ny, j = k % ny;
    auto relax = [&](std::size_t to, double w) {
      if (d + w < dist[to]) {
        dist[to] = d + w;
        prev[to] = static_cast<std::int64_t>(k);
        pq.emplace(dist[to], to);
      }
    };
    if (hy[j].open) {
      if (i > 0) relax(k - ny, vx[i].c - vx[i - 1].c);
      if (i + 1 < nx) relax(k + ny, vx[i + 1].c - vx[i].c);
    }
    if (vx[i].open) {
      if (j > 0) relax(k - 1, hy[j].c - hy[j - 1].c);
      if (j + 1 < ny) relax(k + 1, hy[j + 1].c - hy[j].c);
    }
  }
  if (dist[dst] == kInf) return infinite("rational_lines", "disconnected");
  std::vector<Point> pts;
  for (std::int64_t k = static_cast<std::int64_t>(dst); k != -1; k = prev[static_cast<std::size_t>(k)]) {
    const auto u = static_cast<std::size_t>(k);
    pts.push_back(Point{vx[u / ny].c, hy[u % ny].c});
  }
  std::reverse(pts.begin(), pts.end());
  MetricEstimate m;
  m.lower = distance(x, y);
  m.upper = dist[dst];
  m.witness = Polyline::from_points(pts);
  m.method = "rational_lines";
  return m;
}

MetricEstimate theta_intrinsic_distance(const ExceptionSet& theta, const Point& x, const Point& y,
                                        const ThetaOptions& options) {
  require_same_dimension(x, y);
  if (x.dim() != theta.dimension()) throw Error(ErrorCode::dimension_mismatch, "points do not match set dimension");
  if (!(options.eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");

  auto finish = [&](MetricEstimate m) {
    m.report = path_crossings(theta, *m.witness);
    return m;
  };
  if (x == y) {
    MetricEstimate m;
    m.witness = Polyline::constant(x);
    m.method = "constant";
    return finish(m);
  }
  const Segment seg{x, y};
  const CrossingReport direct = segment_crossings(theta, seg);
  if (admissible(direct, options.finite_only)) return finish(straight(x, y, "straight"));

  // In R^1 every path from x to y covers [x, y]; D0 blocks every path whose
  // first coordinate sweeps a blocked interval.
  if (theta.dimension() == 1 || theta.kind() == Kind::isolated_cantor_d0)
    return infinite("analytic", std::string("no admissible path: ") + std::string(to_string(direct.classification)));

  const double e = distance(x, y);
  Rng rng(options.seed);
  switch (theta.kind()) {
    case Kind::rational_grid: {
      // Two segments through a perturbed midpoint; both slopes irrational.
      const Point dir = (y - x) * (1.0 / e);
      const Point normal{-dir[1], dir[0]};
      const double dmax = 0.5 * std::sqrt((e + options.eps) * (e + options.eps) - e * e);
      for (int k = 0; k < 64; ++k) {
        const double delta = dmax * (0.3 + 0.6 * rng.uniform());
        const Point z = lerp(x, y, 0.5) + normal * delta;
        const Polyline w = Polyline::from_points({x, z, y});
        const CrossingReport r = path_crossings(theta, w);
        if (admissible(r, options.finite_only) && polyline_length(w) <= e + options.eps) {
          MetricEstimate m;
          m.lower = e;
          m.upper = polyline_length(w);
          m.witness = w;
          m.report = r;
          m.method = "perturbed_midpoint";
          return m;
        }
      }
      break;
    }
    case Kind::irrational_square: {
      const bool inside = x[0] >= 0 && x[0] <= 1 && x[1] >= 0 && x[1] <= 1 && y[0] >= 0 && y[0] <= 1 &&
                          y[1] >= 0 && y[1] <= 1;
      if (!inside) break;
      const auto w = l1_staircase(x, y);
      if (!w) return infinite("analytic", "endpoint_in_set_off_rational_lines");
      const CrossingReport r = path_crossings(theta, *w);
      if (admissible(r, options.finite_only)) {
        MetricEstimate m;
        m.lower = e;
        m.upper = polyline_length(*w);
        m.witness = w;
        m.report = r;
        m.method = "rational_staircase";
        return m;
      }
      break;
    }
    default:
      break;
  }

  if (is_lebesgue_null(theta) && !known_non_permeable(theta)) {
    try {
      const Certificate c = permeability_certificate(theta, x, y, options.eps, options.seed);
      MetricEstimate m;
      m.lower = e;
      m.upper = polyline_length(c.path);
      m.witness = c.path;
      m.report = c.report;
      m.method = c.strategy;
      return m;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::budget_exhausted && err.code() != ErrorCode::all_samples_rejected) throw;
    }
  }
  throw Error(ErrorCode::no_construction_available,
              "no admissible witness construction for " + std::string(to_string(theta.kind())));
}

Polyline cone_chain(const ExceptionSet& theta, const Point& x, const Point& y, double eps, std::uint64_t seed,
                    int samples, int retries) {
  require_same_dimension(x, y);
  if (!is_lebesgue_null(theta)) throw Error(ErrorCode::precondition_failed, "set is not Lebesgue-null");
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  const double e = distance(x, y);
  if (e == 0.0) throw Error(ErrorCode::invalid_argument, "cone chain needs distinct endpoints");
  const std::size_t d = x.dim();
  const Point dir = (y - x) * (1.0 / e);
  const Point mid = lerp(x, y, 0.5);
  const double radius = 0.5 * std::sqrt((e + 0.5 * eps) * (e + 0.5 * eps) - e * e);
  Rng rng(seed);
  for (int attempt = 0; attempt < retries; ++attempt) {
    Point z = mid;
    if (d >= 2) {
      Point v = rng.unit_vector(d);
      v -= dir * dot(v, dir);
      const double nv = norm(v);
      if (nv < 1e-12) continue;
      const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(d - 1));
      z = mid + v * (r / nv);
    }
    const Polyline chain = Polyline::from_points({x, z, y});
    const double total = polyline_length(chain);
    const double first = distance(x, z);
    bool hit = false;
    for (int k = 0; k < samples && !hit; ++k) {
      const double s = total * (k + rng.uniform()) / samples;
      const Point p = s <= first ? lerp(x, z, first > 0 ? s / first : 0.0)
                                 : lerp(z, y, (s - first) / std::max(total - first, 1e-300));
      hit = contains(theta, p, 0.0);
    }
    if (!hit) return chain;
  }
  throw Error(ErrorCode::all_samples_rejected, "every sampled cone point gave a chain meeting the set");
}

Polyline chart_detour(const Chart& chart, const Point& entry, const Point& exit, double a) {
  require_same_dimension(entry, exit);
  if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::invalid_argument, "detour parameter must lie in (0, 1)");
  const Point u0 = chart.inverse(entry), u1 = chart.inverse(exit);
  if (!chart.domain.contains_closure(u0) || !chart.domain.contains_closure(u1))
    throw Error(ErrorCode::out_of_domain, "entry or exit outside the chart");
  const double ell = distance(u0, u1);
  if (ell == 0.0) return Polyline::constant(entry);

  Point lift = Point::zeros(u0.dim());
  lift[u0.dim() - 1] = 0.5 * ell * a;
  const std::vector<Point> corners{u0, u0 + lift, u1 + lift, u1};
  for (const auto& c : corners)
    if (!chart.domain.contains_closure(c)) throw Error(ErrorCode::detour_leaves_chart, "detour leaves the chart domain");

  std::vector<Point> pts{entry};
  for (std::size_t k = 0; k + 1 < corners.size(); ++k) {
    int parts = 1;
    if (!chart.affine) {
      // Chords of the mapped pieces must stay close to the curve.
      const double step = 0.25 * std::sqrt(lift[u0.dim() - 1] / chart.lipschitz) / chart.lipschitz;
      parts = static_cast<int>(std::clamp(std::ceil(distance(corners[k], corners[k + 1]) / step), 8.0, 20000.0));
    }
    for (int i = 1; i <= parts; ++i) {
      const Point u = lerp(corners[k], corners[k + 1], static_cast<double>(i) / parts);
      if (!chart.domain.contains_closure(u))
        throw Error(ErrorCode::detour_leaves_chart, "detour leaves the chart domain");
      pts.push_back(chart.forward(u));
    }
  }
  pts.back() = exit;
  return Polyline::from_points(pts, 0.0);
}

Certificate permeability_certificate(const ExceptionSet& theta, const Point& x, const Point& y, double eps,
                                     std::uint64_t seed, const CertificateOptions& options) {
  require_same_dimension(x, y);
  if (x.dim() != theta.dimension()) throw Error(ErrorCode::dimension_mismatch, "points do not match set dimension");
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be positive");
  const double budget = distance(x, y) + eps;

  auto accept = [&](const Polyline& p, const char* strategy) -> std::optional<Certificate> {
    CrossingReport r = path_crossings(theta, p);
    const double len = polyline_length(p);
    if (r.is_finite() && (len < budget || (x == y && len == 0.0)))
      return Certificate{p, std::move(r), strategy};
    return std::nullopt;
  };

  if (auto c = accept(Polyline::from_points({x, y}), "straight_segment")) return *c;
  if (known_non_permeable(theta) || !is_lebesgue_null(theta))
    throw Error(ErrorCode::not_permeable_family,
                std::string(to_string(theta.kind())) + " is not permeable in dimension " +
                    std::to_string(theta.dimension()));

  if (options.allow_cone && distance(x, y) > 0.0) {
    for (int attempt = 0; attempt < options.retries; ++attempt) {
      try {
        const Polyline chain = cone_chain(theta, x, y, eps, mix_seed(seed, static_cast<std::uint64_t>(attempt)),
                                          options.samples, 1);
        if (auto c = accept(chain, "cone_chain")) return *c;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::all_samples_rejected) throw;
      }
    }
  }
  if (options.allow_detour) {
    if (const auto p = detour_path(theta, x, y, eps))
      if (auto c = accept(*p, "chart_detour")) return *c;
  }
  throw Error(ErrorCode::budget_exhausted, "no certificate within the retry budget");
}

double l1_distance_irrational_square(const Point& x, const Point& y) {
  require_same_dimension(x, y);
  if (x.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "points must be planar");
  for (const Point* p : {&x, &y})
    if ((*p)[0] < 0 || (*p)[0] > 1 || (*p)[1] < 0 || (*p)[1] > 1)
      throw Error(ErrorCode::out_of_domain, "points must lie in the unit square");
  return std::fabs(x[0] - y[0]) + std::fabs(x[1] - y[1]);
}

double bounded_metric_transform(double v, bool is_infinite) {
  if (is_infinite || std::isinf(v)) return 1.0;
  if (std::isnan(v) || v < 0.0) throw Error(ErrorCode::negative_input, "distance must be non-negative");
  return v / (1.0 + v);
}

QuasiConvexity quasi_convexity_ratio(const Domain& domain, const std::vector<std::pair<Point, Point>>& pairs,
                                     double threshold, int depth) {
  QuasiConvexity q;
  for (const auto& [x, y] : pairs) {
    const double e = distance(x, y);
    if (e == 0.0) continue;
    const MetricEstimate m = intrinsic_distance(domain, x, y, depth);
    const double ratio = m.infinite ? kInf : m.upper / e;
    if (!q.witness || ratio > q.max_ratio) {
      q.max_ratio = ratio;
      q.witness = std::make_pair(x, y);
    }
  }
  q.exceeds = q.max_ratio > threshold;
  return q;
}

QuasiConvexity quasi_convexity_ratio(const Domain& domain, const Point& lo, const Point& hi, int pairs,
                                     std::uint64_t seed, double threshold, int depth) {
  Rng rng(seed);
  std::vector<std::pair<Point, Point>> list;
  auto usable = [&](const Point& p) {
    if (domain.obstacle && contains(*domain.obstacle, p)) return false;
    for (const auto& h : domain.region)
      if (!h.satisfied(p, 0.0)) return false;
    return true;
  };
  int guard = 0;
  while (static_cast<int>(list.size()) < pairs && guard++ < 100 * pairs + 100) {
    Point x = rng.in_box(lo, hi), y = rng.in_box(lo, hi);
    if (usable(x) && usable(y)) list.emplace_back(std::move(x), std::move(y));
  }
  return quasi_convexity_ratio(domain, list, threshold, depth);
}

}  // namespace permeable
