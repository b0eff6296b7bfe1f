#include "permeable/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "permeable/cb_rank.hpp"
#include "permeable/error.hpp"
#include "permeable/metrics.hpp"
#include "permeable/random.hpp"

namespace permeable {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t k) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (k + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Membership that treats undecidable rational tests as "on the set".
bool touches(const ExceptionSet& theta, const Point& p) {
  try {
    return contains(theta, p);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::undecidable_at_tolerance) return true;
    throw;
  }
}

void require_subset(const ExceptionSet& theta0, const ExceptionSet& theta, const Point& lo, const Point& hi,
                    std::uint64_t seed) {
  if (theta0.dimension() != theta.dimension())
    throw Error(ErrorCode::dimension_mismatch, "sets live in different dimensions");
  Rng rng(mix_seed(seed, 0xC0FFEE));
  for (int i = 0; i < 256; ++i) {
    const auto p = sample_member(theta0, rng, lo, hi);
    if (!p) break;
    if (!touches(theta, *p)) {
      std::ostringstream msg;
      msg << "sampled member (" << (*p)[0];
      for (std::size_t k = 1; k < p->dim(); ++k) msg << ", " << (*p)[k];
      msg << ") of the subset is not in the superset";
      throw Error(ErrorCode::subset_violation, msg.str());
    }
  }
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::confirmed: return "confirmed";
    case Verdict::violated: return "violated";
    case Verdict::precondition_rejected: return "precondition_rejected";
    case Verdict::not_permeable_family: return "not_permeable_family";
  }
  return "unknown";
}

MetricOracle euclidean_metric() {
  return [](const Point& x, const Point& y) -> std::optional<double> { return distance(x, y); };
}

MetricOracle complement_metric(ExceptionSet theta, int depth) {
  return [theta = std::move(theta), depth](const Point& x, const Point& y) -> std::optional<double> {
    const MetricEstimate m = complement_distance(theta, x, y, depth);
    if (m.infinite) return std::nullopt;
    return m.upper;
  };
}

MetricOracle l1_square_metric() {
  return [](const Point& x, const Point& y) -> std::optional<double> { return l1_distance_irrational_square(x, y); };
}

std::vector<PointPair> stratified_pairs(const ExceptionSet* theta, const Point& lo, const Point& hi, int n,
                                        std::uint64_t seed) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "pair count must be non-negative");
  require_same_dimension(lo, hi);
  Rng rng(seed);
  std::vector<PointPair> out;
  out.reserve(static_cast<std::size_t>(n));
  const std::size_t d = lo.dim();
  for (int i = 0; i < n; ++i) {
    const int slot = i % 10;
    if (theta && slot >= 5) {
      // Scale cycles through 10^-1 .. 10^-4 across successive strata.
      const double s = std::pow(10.0, -1.0 - static_cast<double>((i / 10) % 4));
      if (const auto p = sample_member(*theta, rng, lo, hi)) {
        const Point u = rng.unit_vector(d);
        if (slot < 8) {
          out.emplace_back(*p + u * (s * rng.uniform(0.1, 1.0)), *p - u * (s * rng.uniform(0.1, 1.0)));
        } else {
          out.emplace_back(*p, *p + u * (s * rng.uniform(0.1, 1.0)));
        }
        continue;
      }
    }
    Point x = rng.in_box(lo, hi);
    Point y = rng.in_box(lo, hi);
    out.emplace_back(std::move(x), std::move(y));
  }
  return out;
}

LipschitzEstimate lipschitz_constant_estimate(const FixtureFunction& f, const MetricOracle& metric,
                                              const std::vector<PointPair>& pairs) {
  LipschitzEstimate est;
  bool have_witness = false;
  for (const auto& [x, y] : pairs) {
    if (x == y) continue;
    const auto m = metric(x, y);
    if (!m) continue;
    if (!(*m > 0.0)) continue;
    ++est.finite_pairs;
    const double r = std::fabs(f(x) - f(y)) / *m;
    if (!have_witness || r > est.value) {
      est.value = r;
      est.witness = {x, y};
      have_witness = true;
    }
  }
  if (est.finite_pairs == 0) throw Error(ErrorCode::no_finite_pair, "no sampled pair has a finite positive distance");
  return est;
}

VerificationReport verify_global_lipschitz(const FixtureFunction& f, const ExceptionSet& theta, double lipschitz,
                                       int pairs, double tol, std::uint64_t seed) {
  VerificationReport r;
  r.claim = "global_lipschitz";
  r.threshold = lipschitz * (1.0 + tol);
  if (!f.continuous) {
    r.verdict = Verdict::precondition_rejected;
    r.detail = "function is not continuous on the whole space";
    return r;
  }
  if (theta.dimension() != f.dimension) throw Error(ErrorCode::dimension_mismatch, "set and function dimensions differ");
  const auto sample = stratified_pairs(&theta, f.box_lo, f.box_hi, pairs, seed);
  const LipschitzEstimate est = lipschitz_constant_estimate(f, euclidean_metric(), sample);
  r.pairs = est.finite_pairs;
  r.max_ratio = est.value;
  r.witness = est.witness;
  if (est.value > r.threshold) {
    r.verdict = Verdict::violated;
    r.detail = "ratio " + fmt(est.value) + " exceeds " + fmt(r.threshold);
  } else {
    r.verdict = Verdict::confirmed;
  }
  return r;
}

VerificationReport verify_equal_constants(const FixtureFunction& f, const ExceptionSet& theta0,
                                          const ExceptionSet& theta, int pairs, double tol, std::uint64_t seed,
                                          int depth) {
  VerificationReport r;
  r.claim = "equal_constants";
  r.threshold = tol;
  if (!is_closed_subset(theta0)) {
    r.verdict = Verdict::precondition_rejected;
    r.detail = "smaller set is not closed";
    return r;
  }
  require_subset(theta0, theta, f.box_lo, f.box_hi, seed);

  const ExceptionSet outer = closure(theta);
  std::vector<PointPair> sample;
  for (auto& pq : stratified_pairs(&theta, f.box_lo, f.box_hi, pairs, seed))
    if (!touches(outer, pq.first) && !touches(outer, pq.second)) sample.push_back(std::move(pq));

  const LipschitzEstimate big = lipschitz_constant_estimate(f, complement_metric(theta, depth), sample);
  const LipschitzEstimate small = lipschitz_constant_estimate(f, complement_metric(theta0, depth), sample);
  const double top = std::max(big.value, small.value);
  const double gap = top > 0.0 ? std::fabs(big.value - small.value) / top : 0.0;
  r.pairs = sample.size();
  r.max_ratio = gap;
  r.witness = big.value >= small.value ? big.witness : small.witness;
  r.verdict = gap <= tol ? Verdict::confirmed : Verdict::violated;
  r.detail = "sup ratio " + fmt(small.value) + " off the smaller set, " + fmt(big.value) + " off the larger set";
  return r;
}

VerificationReport verify_subset_permeability(const ExceptionSet& theta, const ExceptionSet& theta0,
                                              const Point& lo, const Point& hi, int pairs, double eps,
                                              std::uint64_t seed) {
  VerificationReport r;
  r.claim = "subset_permeability";
  r.threshold = eps;
  require_subset(theta0, theta, lo, hi, seed);
  Rng rng(seed);
  r.verdict = Verdict::confirmed;
  for (int i = 0; i < pairs; ++i) {
    const Point x = rng.in_box(lo, hi), y = rng.in_box(lo, hi);
    const Certificate c = permeability_certificate(theta, x, y, eps, mix_seed(seed, static_cast<std::uint64_t>(i)));
    const CrossingReport rep = path_crossings(theta0, c.path);
    const double excess = polyline_length(c.path) - distance(x, y);
    ++r.pairs;
    if (excess > r.max_ratio || !r.witness) {
      r.max_ratio = std::max(r.max_ratio, excess);
      if (!r.witness) r.witness = PointPair{x, y};
    }
    const bool ok = (rep.classification == Classification::finite ||
                     rep.classification == Classification::countable_closure) &&
                    excess < eps;
    if (!ok) {
      r.verdict = Verdict::violated;
      r.witness = PointPair{x, y};
      r.detail = "certificate re-classified as " + std::string(to_string(rep.classification)) + " with excess " +
                 fmt(excess);
      return r;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Claim suite

namespace {

using Check = std::function<VerificationReport()>;

VerificationReport single(double ratio, double threshold, bool ok, std::optional<PointPair> w, std::string detail,
                          std::size_t pairs = 1) {
  VerificationReport r;
  r.pairs = pairs;
  r.max_ratio = ratio;
  r.threshold = threshold;
  r.verdict = ok ? Verdict::confirmed : Verdict::violated;
  r.witness = std::move(w);
  r.detail = std::move(detail);
  return r;
}

ExceptionSet three_lines() {
  family::Arrangement a;
  a.flats.push_back(Flat{Point{0.0, 1.0}, 0.0, {}});
  a.flats.push_back(Flat{Point{1.0, 0.0}, 0.25, {}});
  a.flats.push_back(Flat{Point{1.0, 1.0}, 0.5, {}});
  return ExceptionSet(2, a);
}

ExceptionSet unit_circle() { return ExceptionSet(2, family::Sphere{Point{0.0, 0.0}, 1.0, {}}); }

VerificationReport check_slit_geodesic(const SuiteOptions& o) {
  const Point x{-1.0, 1.0}, y{-1.0, -1.0};
  const double oracle = 2.0 * std::numbers::sqrt2;
  const MetricEstimate m = intrinsic_distance(slit_plane(), x, y, o.depth, DistanceMethod::grid);
  const double ratio = m.upper / oracle;
  return single(ratio, 1.01, !m.infinite && ratio <= 1.01 && m.lower <= oracle + kGeomTol, PointPair{x, y},
                "grid upper " + fmt(m.upper) + " against " + fmt(oracle));
}

VerificationReport check_slit_quasi_convexity(const SuiteOptions& o) {
  std::vector<PointPair> pairs;
  for (double d : {1e-1, 1e-2, 1e-3}) pairs.emplace_back(Point{-1.0, d}, Point{-1.0, -d});
  const QuasiConvexity q = quasi_convexity_ratio(slit_plane(), pairs, kInfiniteThreshold, o.depth);
  const double oracle = std::sqrt(1.0 + 1e-6) / 1e-3;
  const bool ok = std::fabs(q.max_ratio - oracle) <= 1e-3 * oracle;
  return single(q.max_ratio, oracle, ok, q.witness, "ratio grows like 1/delta", pairs.size());
}

VerificationReport check_slit_arg_jump(const SuiteOptions&) {
  const double delta = 1e-3;
  const Point x{-1.0, delta}, y{-1.0, -delta};
  const LipschitzEstimate e = lipschitz_constant_estimate(make_slit_arg(), euclidean_metric(), {{x, y}});
  const double oracle = 2.0 * std::numbers::pi / (2.0 * delta);
  const bool ok = std::fabs(e.value - oracle) <= 1e-3 * oracle && e.value > 100.0;
  return single(e.value, 100.0, ok, e.witness, "euclidean ratio across the slit");
}

VerificationReport check_slit_arg_intrinsic(const SuiteOptions& o) {
  const FixtureFunction f = make_slit_arg();
  const ExceptionSet closed = make_slit(true);
  std::vector<PointPair> pairs;
  for (auto& pq : stratified_pairs(&*f.exception_set, f.box_lo, f.box_hi, 1000, mix_seed(o.seed, 4)))
    if (!touches(closed, pq.first) && !touches(closed, pq.second)) pairs.push_back(std::move(pq));
  const LipschitzEstimate e = lipschitz_constant_estimate(f, complement_metric(closed, o.depth), pairs);
  const double bound = std::sqrt(1.0 + std::numbers::pi * std::numbers::pi) * (1.0 + 1e-3);
  return single(e.value, bound, std::isfinite(e.value) && e.value <= bound, e.witness,
                "largest intrinsic ratio", e.finite_pairs);
}

VerificationReport check_rational_grid(const SuiteOptions& o) {
  const ExceptionSet q(2, family::RationalGrid{});
  Rng rng(mix_seed(o.seed, 5));
  VerificationReport r = single(0.0, o.eps, true, std::nullopt, "", 0);
  for (int i = 0; i < 100; ++i) {
    Point x, y;
    if (i % 2 == 0) {
      x = Point{static_cast<double>(rng.integer(-64, 64)) / 32.0, static_cast<double>(rng.integer(-64, 64)) / 32.0};
      y = Point{static_cast<double>(rng.integer(-64, 64)) / 32.0, static_cast<double>(rng.integer(-64, 64)) / 32.0};
    } else {
      x = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
      y = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    }
    if (x == y) continue;
    ThetaOptions t;
    t.eps = o.eps;
    t.seed = mix_seed(o.seed, 100 + static_cast<std::uint64_t>(i));
    const MetricEstimate m = theta_intrinsic_distance(q, x, y, t);
    ++r.pairs;
    const double excess = m.upper - distance(x, y);
    std::size_t worst = 0;
    for (std::size_t k = 0; m.witness && k < m.witness->segment_count(); ++k) {
      const CrossingReport c = segment_crossings(q, m.witness->segment(k));
      worst = std::max(worst, c.is_finite() ? c.crossings.size() : std::size_t{2});
    }
    if (excess > r.max_ratio || !r.witness) r.witness = PointPair{x, y};
    r.max_ratio = std::max(r.max_ratio, excess);
    if (!m.witness || excess > o.eps || worst > 1) {
      r.verdict = Verdict::violated;
      r.witness = PointPair{x, y};
      r.detail = "witness too long or a segment meets two rational points";
      return r;
    }
  }
  r.detail = "largest length excess over the euclidean distance";
  return r;
}

VerificationReport check_irrational_l1(const SuiteOptions& o) {
  Rng rng(mix_seed(o.seed, 6));
  auto point = [&rng] {
    const double rational = static_cast<double>(rng.integer(1, 996)) / 997.0;
    const double other = rng.uniform(0.001, 0.999);
    return rng.integer(0, 1) == 0 ? Point{rational, other} : Point{other, rational};
  };
  VerificationReport r = single(0.0, 0.02, true, std::nullopt, "largest relative gap to the l1 distance", 0);
  const int depth = std::min(o.depth, 12);
  for (int i = 0; i < 100; ++i) {
    const Point x = point(), y = point();
    const double oracle = std::fabs(x[0] - y[0]) + std::fabs(x[1] - y[1]);
    if (oracle == 0.0) continue;
    const MetricEstimate m = rational_lines_distance(x, y, depth);
    ++r.pairs;
    const double gap = m.infinite ? std::numeric_limits<double>::infinity() : std::fabs(m.upper - oracle) / oracle;
    if (gap > r.max_ratio || !r.witness) r.witness = PointPair{x, y};
    r.max_ratio = std::max(r.max_ratio, gap);
  }
  if (r.max_ratio > r.threshold) r.verdict = Verdict::violated;
  return r;
}

VerificationReport check_irrational_not_permeable(const SuiteOptions& o) {
  const ExceptionSet s(2, family::IrrationalSquare{});
  const Point x{0.25 + std::numbers::sqrt2 / 10.0, 0.5}, y{0.75, 0.2 + std::numbers::sqrt3 / 10.0};
  VerificationReport r = single(0.0, 0.0, false, PointPair{x, y}, "certificate was produced");
  try {
    (void)permeability_certificate(s, x, y, o.eps, o.seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_permeable_family) throw;
    r.verdict = Verdict::not_permeable_family;
    r.detail = e.what();
  }
  return r;
}

VerificationReport check_l1_euclidean_bound(const SuiteOptions& o) {
  // Bilinear table; its l1 constant is the largest max-norm gradient at a cell corner.
  const std::vector<double> g{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::vector<double>> v(5, std::vector<double>(5));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) v[i][j] = std::sin(1.7 * i + 0.3 * j * j) * 0.4;
  double l1_const = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          l1_const = std::max({l1_const, std::fabs(v[i + 1][j + b] - v[i][j + b]) / 0.25,
                               std::fabs(v[i + a][j + 1] - v[i + a][j]) / 0.25});

  struct Case {
    FixtureFunction f;
    double l1;
  };
  const std::vector<Case> cases{{make_linear(Point{1.0, 1.0}), 1.0},
                                {make_linear(Point{1.0, -0.5}), 1.0},
                                {make_tabulated_2d(g, g, v), l1_const}};
  const double tol = 1e-3;
  VerificationReport r = single(0.0, 1.0 + tol, true, std::nullopt, "euclidean ratio over sqrt(2) L", 0);
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto pairs = stratified_pairs(nullptr, Point{0.0, 0.0}, Point{1.0, 1.0}, std::max(o.pairs / 10, 10),
                                        mix_seed(o.seed, 70 + k));
    const LipschitzEstimate l1 = lipschitz_constant_estimate(cases[k].f, l1_square_metric(), pairs);
    const LipschitzEstimate eu = lipschitz_constant_estimate(cases[k].f, euclidean_metric(), pairs);
    r.pairs += eu.finite_pairs;
    const double scaled = eu.value / (std::numbers::sqrt2 * cases[k].l1);
    if (scaled > r.max_ratio || !r.witness) r.witness = eu.witness;
    r.max_ratio = std::max(r.max_ratio, scaled);
    if (l1.value > cases[k].l1 * (1.0 + tol)) {
      r.verdict = Verdict::violated;
      r.witness = l1.witness;
      r.detail = "declared l1 constant is too small";
      return r;
    }
  }
  if (r.max_ratio > r.threshold) r.verdict = Verdict::violated;
  return r;
}

VerificationReport check_topologist_sine(const SuiteOptions& o) {
  const ExceptionSet s(2, family::TopologistSine{false});
  const Point x{0.0, 0.0}, y{1.0, 0.0};
  const CrossingReport rep = segment_crossings(s, Segment{x, y});
  ThetaOptions t;
  t.eps = o.eps;
  t.seed = o.seed;
  const MetricEstimate countable = theta_intrinsic_distance(s, x, y, t);
  t.finite_only = true;
  bool finite_blocked = false;
  try {
    const MetricEstimate f = theta_intrinsic_distance(s, x, y, t);
    finite_blocked = f.infinite || f.upper > 1.0 + o.eps;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::no_construction_available) throw;
    finite_blocked = true;
  }
  const bool ok = rep.classification == Classification::countable_closure && !countable.infinite &&
                  countable.upper <= 1.0 + o.eps && finite_blocked;
  return single(countable.upper, 1.0 + o.eps, ok, PointPair{x, y},
                "segment " + std::string(to_string(rep.classification)) +
                    (finite_blocked ? ", no finite-crossing path near length 1" : ", finite-crossing path found"));
}

VerificationReport check_d0(const SuiteOptions& o) {
  const ExceptionSet s(1, family::IsolatedCantorD0{});
  const Point x{-1.0}, y{2.0};
  const MetricEstimate m = theta_intrinsic_distance(s, x, y, ThetaOptions{o.eps, false, o.seed});
  bool rejected = false;
  try {
    (void)permeability_certificate(s, x, y, o.eps, o.seed);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::not_permeable_family) throw;
    rejected = true;
  }
  return single(m.infinite ? std::numeric_limits<double>::infinity() : m.upper,
                std::numeric_limits<double>::infinity(), m.infinite && rejected, PointPair{x, y},
                "set with isolated points only yet not permeable");
}

VerificationReport certificates(const ExceptionSet& theta, const SuiteOptions& o, std::uint64_t salt,
                                const std::vector<Flat>& lines) {
  Rng rng(mix_seed(o.seed, salt));
  VerificationReport r = single(0.0, o.eps, true, std::nullopt, "largest length excess", 0);
  for (int i = 0; i < 100; ++i) {
    Point x = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    Point y = rng.in_box(Point{-2.0, -2.0}, Point{2.0, 2.0});
    if (!lines.empty() && i % 5 == 0) {
      // Both endpoints on one line: the straight segment runs inside the set.
      const Flat& l = lines[static_cast<std::size_t>(i / 5) % lines.size()];
      const Point n = l.normal * (1.0 / norm(l.normal));
      const Point base = n * (l.offset / norm(l.normal));
      const Point dir{-n[1], n[0]};
      x = base + dir * rng.uniform(-2.0, 0.0);
      y = base + dir * rng.uniform(0.0, 2.0);
    }
    if (x == y) continue;
    const Certificate c = permeability_certificate(theta, x, y, o.eps, mix_seed(o.seed, salt * 1000 + i));
    const CrossingReport rep = path_crossings(theta, c.path);
    const double excess = polyline_length(c.path) - distance(x, y);
    ++r.pairs;
    if (excess > r.max_ratio || !r.witness) r.witness = PointPair{x, y};
    r.max_ratio = std::max(r.max_ratio, excess);
    if (!rep.is_finite() || excess > o.eps) {
      r.verdict = Verdict::violated;
      r.witness = PointPair{x, y};
      r.detail = "certificate " + c.strategy + " is " + std::string(to_string(rep.classification));
      return r;
    }
  }
  return r;
}

VerificationReport check_cb_ranks(const SuiteOptions&) {
  int mismatches = 0;
  std::string detail;
  for (int k = 0; k <= 6; ++k) {
    const CBRank got = cb_rank(make_sk(k));
    if (got != CBRank{false, k + 1}) {
      ++mismatches;
      detail += "S_" + std::to_string(k) + " gave " + got.to_string() + "; ";
    }
  }
  if (cb_rank(make_harmonic_sequence()) != CBRank{false, 2}) {
    ++mismatches;
    detail += "harmonic sequence; ";
  }
  if (!cb_rank(make_cantor()).perfect_core) {
    ++mismatches;
    detail += "Cantor set; ";
  }
  return single(mismatches, 0.0, mismatches == 0, std::nullopt, detail.empty() ? "all ranks exact" : detail, 9);
}

VerificationReport check_staircase_ratio(const SuiteOptions&) {
  double worst = 0.0;
  int bad = 0;
  std::int64_t p3 = 1;
  for (int n = 1; n <= 20; ++n) {
    p3 *= 3;
    const double c = cantor_staircase_exact(1, p3) - cantor_staircase_exact(0, 1);
    const double ratio = c * static_cast<double>(p3);
    const double exact = std::ldexp(static_cast<double>(p3), -n);
    if (ratio != exact) ++bad;
    worst = std::max(worst, ratio);
  }
  return single(worst, 100.0, bad == 0 && worst > 100.0, PointPair{Point{0.0}, Point{std::pow(3.0, -20.0)}},
                "ratio at 3^-n equals (3/2)^n");
}

VerificationReport check_staircase_lipschitz(const SuiteOptions& o) {
  const FixtureFunction f = make_cantor_staircase_fixture();
  return verify_global_lipschitz(f, *f.exception_set, 0.0, o.pairs, 1e-3, mix_seed(o.seed, 14));
}

VerificationReport check_radial(const SuiteOptions& o) {
  const FixtureFunction f = make_radial_piecewise();
  return verify_global_lipschitz(f, *f.exception_set, 1.0, o.pairs, 1e-3, mix_seed(o.seed, 15));
}

VerificationReport check_slit_rejected(const SuiteOptions& o) {
  const FixtureFunction f = make_slit_arg();
  return verify_global_lipschitz(f, *f.exception_set, 1.0, o.pairs, 1e-3, mix_seed(o.seed, 16));
}

VerificationReport check_equal_slit_axis(const SuiteOptions& o) {
  return verify_equal_constants(make_slit_arg(), make_slit(true), make_hyperplane(Point{0.0, 1.0}, 0.0), o.pairs,
                                0.05, mix_seed(o.seed, 17), o.depth);
}

VerificationReport check_equal_linear_point(const SuiteOptions& o) {
  const ExceptionSet point(2, family::FinitePoints{{Point{0.3, 0.2}}});
  const ExceptionSet line = make_hyperplane(Point{1.0, -1.5}, 0.0);
  return verify_equal_constants(make_linear(Point{3.0, 4.0}), point, line, std::max(o.pairs / 10, 10), 0.05,
                                mix_seed(o.seed, 18), o.depth);
}

VerificationReport check_subset_lines_ray(const SuiteOptions& o) {
  family::Arrangement both;
  both.flats.push_back(Flat{Point{0.0, 1.0}, 0.0, {}});
  both.flats.push_back(Flat{Point{1.0, 0.0}, 0.0, {}});
  family::Arrangement ray;
  ray.flats.push_back(Flat{Point{0.0, 1.0}, 0.0, {HalfSpace{Point{-1.0, 0.0}, 0.0}}});
  return verify_subset_permeability(ExceptionSet(2, both), ExceptionSet(2, ray), Point{-2.0, -2.0},
                                    Point{2.0, 2.0}, 100, o.eps, mix_seed(o.seed, 19));
}

VerificationReport check_subset_semicircle(const SuiteOptions& o) {
  const ExceptionSet half(2, family::Sphere{Point{0.0, 0.0}, 1.0, {HalfSpace{Point{0.0, -1.0}, 0.0}}});
  return verify_subset_permeability(unit_circle(), half, Point{-2.0, -2.0}, Point{2.0, 2.0}, 100, o.eps,
                                    mix_seed(o.seed, 20));
}

VerificationReport check_subset_empty(const SuiteOptions& o) {
  return verify_subset_permeability(unit_circle(), make_empty_set(2), Point{-2.0, -2.0}, Point{2.0, 2.0}, 100,
                                    o.eps, mix_seed(o.seed, 21));
}

VerificationReport check_loop_erasure(const SuiteOptions& o) {
  Rng rng(mix_seed(o.seed, 22));
  int bad = 0;
  std::optional<PointPair> witness;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    std::vector<Point> v{rng.in_box(Point{0.0, 0.0}, Point{1.0, 1.0})};
    const int n = static_cast<int>(rng.integer(2, 12));
    for (int k = 0; k < n; ++k) v.push_back(rng.in_box(Point{0.0, 0.0}, Point{1.0, 1.0}));
    const Polyline p(v);
    const Polyline q = loop_erase(p);
    const double ratio = polyline_length(q) / std::max(polyline_length(p), 1e-300);
    worst = std::max(worst, ratio);
    bool ok = q.front() == p.front() && q.back() == p.back() && !has_self_intersection(q) && ratio <= 1.0 + 1e-12;
    for (const Point& w : q.vertices()) {
      double dmin = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < p.segment_count(); ++k) dmin = std::min(dmin, point_segment_distance(w, p.segment(k)));
      ok = ok && dmin <= 1e-9;
    }
    if (!ok) {
      ++bad;
      if (!witness) witness = PointPair{p.front(), p.back()};
    }
  }
  return single(worst, 1.0, bad == 0, witness, bad == 0 ? "length ratio never above 1" : "simple-arc property failed",
                1000);
}

}  // namespace

bool SuiteReport::all_expected() const {
  return std::all_of(entries.begin(), entries.end(), [](const SuiteEntry& e) { return e.matches(); });
}

std::string SuiteReport::to_json() const {
  using nlohmann::ordered_json;
  ordered_json j;
  j["seed"] = options.seed;
  j["pairs"] = options.pairs;
  j["grid_depth"] = options.depth;
  j["eps"] = options.eps;
  j["all_expected"] = all_expected();
  ordered_json list = ordered_json::array();
  for (const auto& e : entries) {
    ordered_json item;
    item["claim"] = e.report.claim;
    item["verdict"] = std::string(to_string(e.report.verdict));
    item["expected"] = std::string(to_string(e.expected));
    item["pairs"] = e.report.pairs;
    item["max_ratio"] = e.report.max_ratio;
    item["threshold"] = e.report.threshold;
    if (e.report.witness) {
      auto coords = [](const Point& p) { return std::vector<double>(p.coords().begin(), p.coords().end()); };
      item["witness"] = ordered_json::array({coords(e.report.witness->first), coords(e.report.witness->second)});
    } else {
      item["witness"] = nullptr;
    }
    item["detail"] = e.report.detail;
    list.push_back(std::move(item));
  }
  j["entries"] = std::move(list);
  return j.dump(2);
}

SuiteReport run_claim_suite(const SuiteOptions& options) {
  struct Item {
    const char* claim;
    Verdict expected;
    VerificationReport (*check)(const SuiteOptions&);
  };
  static const Item items[] = {
      {"slit_geodesic_through_tip", Verdict::confirmed, check_slit_geodesic},
      {"slit_plane_not_quasi_convex", Verdict::confirmed, check_slit_quasi_convexity},
      {"slit_arg_euclidean_jump", Verdict::confirmed, check_slit_arg_jump},
      {"slit_arg_intrinsic_lipschitz", Verdict::confirmed, check_slit_arg_intrinsic},
      {"rational_grid_straight_distance", Verdict::confirmed, check_rational_grid},
      {"irrational_square_l1_distance", Verdict::confirmed, check_irrational_l1},
      {"irrational_square_not_permeable", Verdict::not_permeable_family, check_irrational_not_permeable},
      {"l1_lipschitz_euclidean_bound", Verdict::confirmed, check_l1_euclidean_bound},
      {"topologist_sine_countable_not_finite", Verdict::confirmed, check_topologist_sine},
      {"isolated_cantor_not_permeable", Verdict::confirmed, check_d0},
      {"circle_certificates",
       Verdict::confirmed,
       [](const SuiteOptions& o) { return certificates(unit_circle(), o, 11, {}); }},
      {"arrangement_certificates",
       Verdict::confirmed,
       [](const SuiteOptions& o) { return certificates(three_lines(), o, 12, three_lines().as<family::Arrangement>()->flats); }},
      {"cantor_bendixson_ranks", Verdict::confirmed, check_cb_ranks},
      {"staircase_ratio_growth", Verdict::confirmed, check_staircase_ratio},
      {"staircase_not_lipschitz", Verdict::violated, check_staircase_lipschitz},
      {"radial_piecewise_global_lipschitz", Verdict::confirmed, check_radial},
      {"slit_arg_rejected_as_discontinuous", Verdict::precondition_rejected, check_slit_rejected},
      {"equal_constants_slit_vs_axis", Verdict::confirmed, check_equal_slit_axis},
      {"equal_constants_point_vs_line", Verdict::confirmed, check_equal_linear_point},
      {"subset_lines_to_ray", Verdict::confirmed, check_subset_lines_ray},
      {"subset_circle_to_semicircle", Verdict::confirmed, check_subset_semicircle},
      {"subset_empty", Verdict::confirmed, check_subset_empty},
      {"loop_erasure", Verdict::confirmed, check_loop_erasure},
  };
  SuiteReport out;
  out.options = options;
  for (const Item& item : items) {
    SuiteEntry e;
    e.expected = item.expected;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.report = item.check(options);
    } catch (const std::exception& err) {
      e.report = VerificationReport{};
      e.report.verdict = Verdict::violated;
      e.report.detail = std::string("check failed: ") + err.what();
    }
    e.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    e.report.claim = item.claim;
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace permeable
