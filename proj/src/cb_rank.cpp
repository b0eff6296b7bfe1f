#include "permeable/cb_rank.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "permeable/error.hpp"
#include "permeable/geometry.hpp"
#include "permeable/rational.hpp"

namespace permeable {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Affine map of the base onto child n: x -> offset + factor * x.
std::pair<double, double> child_map(const cb::Limit& l, int n) {
  if (l.law == cb::Law::harmonic) {
    const auto [lo, hi] = is_empty(*l.base) ? std::pair{0.0, 0.0} : hull(*l.base);
    const double w = std::max({1.0, std::fabs(lo), std::fabs(hi)});
    const double nn = static_cast<double>(n);
    return {l.p + l.scale / nn, l.scale / (nn * (nn + 1.0)) / (2.0 * w)};
  }
  const double rn = std::pow(l.ratio, n);
  return {l.p + rn * l.shift, rn};
}

}  // namespace

CBSet make_points(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  for (double v : values)
    if (!std::isfinite(v)) throw Error(ErrorCode::invalid_argument, "points must be finite");
  return CBSet{cb::Points{std::move(values)}};
}

CBSet make_limit(double p, CBSet base, cb::Law law, double scale_or_ratio, double shift) {
  cb::Limit l;
  l.p = p;
  l.base = std::make_shared<const CBSet>(std::move(base));
  l.law = law;
  if (law == cb::Law::harmonic) {
    l.scale = scale_or_ratio;
  } else {
    l.ratio = scale_or_ratio;
    l.shift = shift;
  }
  CBSet s{l};
  validate(s);
  return s;
}

CBSet make_union(std::vector<CBSet> parts) {
  CBSet s{cb::Union{std::move(parts)}};
  validate(s);
  return s;
}

CBSet make_cantor(double start, double end) {
  if (!(end > start)) throw Error(ErrorCode::invalid_argument, "cantor interval must have positive length");
  return CBSet{cb::PerfectCore{start, end}};
}

CBSet make_harmonic_sequence() { return make_limit(0.0, make_points({0.0}), cb::Law::harmonic, 1.0); }

CBSet make_sk(int k) {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "k must be non-negative");
  if (k >= kMaxNesting) throw Error(ErrorCode::depth_exceeded, "nesting beyond the supported bound");
  CBSet s = make_points({0.0});
  for (int j = 0; j < k; ++j) s = make_limit(0.0, std::move(s), cb::Law::geometric, 0.5, 3.0);
  return s;
}

bool is_empty(const CBSet& s) {
  return std::visit(overloaded{
                        [](const cb::Points& p) { return p.values.empty(); },
                        [](const cb::Limit&) { return false; },
                        [](const cb::Union& u) {
                          return std::all_of(u.parts.begin(), u.parts.end(), [](const CBSet& c) { return is_empty(c); });
                        },
                        [](const cb::PerfectCore&) { return false; },
                    },
                    s.node);
}

std::pair<double, double> hull(const CBSet& s) {
  return std::visit(
      overloaded{
          [](const cb::Points& p) {
            if (p.values.empty()) throw Error(ErrorCode::invalid_argument, "hull of the empty set");
            return std::pair{p.values.front(), p.values.back()};
          },
          [](const cb::Limit& l) {
            double lo = l.p, hi = l.p;
            if (!is_empty(*l.base)) {
              const auto [blo, bhi] = hull(*l.base);
              // Child 1 is the outermost copy for both laws.
              const auto [off, fac] = child_map(l, 1);
              lo = std::min({lo, off + fac * blo, off + fac * bhi});
              hi = std::max({hi, off + fac * blo, off + fac * bhi});
            }
            return std::pair{lo, hi};
          },
          [](const cb::Union& u) {
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& c : u.parts) {
              if (is_empty(c)) continue;
              const auto [a, b] = hull(c);
              lo = std::min(lo, a);
              hi = std::max(hi, b);
            }
            if (lo > hi) throw Error(ErrorCode::invalid_argument, "hull of the empty set");
            return std::pair{lo, hi};
          },
          [](const cb::PerfectCore& c) { return std::pair{c.start, c.end}; },
      },
      s.node);
}

int nesting_depth(const CBSet& s) {
  return std::visit(overloaded{
                        [](const cb::Points&) { return 0; },
                        [](const cb::Limit& l) { return 1 + nesting_depth(*l.base); },
                        [](const cb::Union& u) {
                          int d = 0;
                          for (const auto& c : u.parts) d = std::max(d, nesting_depth(c));
                          return d;
                        },
                        [](const cb::PerfectCore&) { return 0; },
                    },
                    s.node);
}

void validate(const CBSet& s) {
  if (nesting_depth(s) > kMaxNesting) throw Error(ErrorCode::depth_exceeded, "nesting beyond the supported bound");
  std::visit(
      overloaded{
          [](const cb::Points&) {},
          [](const cb::Limit& l) {
            if (!l.base) throw Error(ErrorCode::invalid_argument, "limit node without base");
            validate(*l.base);
            if (nesting_depth(*l.base) + 1 > l.declared_depth)
              throw Error(ErrorCode::depth_exceeded, "limit nesting exceeds its declared depth");
            if (l.law == cb::Law::harmonic && !(l.scale != 0.0 && std::isfinite(l.scale)))
              throw Error(ErrorCode::invalid_argument, "harmonic scale must be nonzero");
            if (l.law == cb::Law::geometric && !(l.ratio > 0.0 && l.ratio < 1.0))
              throw Error(ErrorCode::invalid_argument, "geometric ratio must lie in (0, 1)");
            if (is_empty(*l.base)) throw Error(ErrorCode::invalid_argument, "limit node needs a nonempty base");
            const auto [blo, bhi] = hull(*l.base);
            // Child hulls must be pairwise disjoint and avoid p.
            std::vector<std::pair<double, double>> hs;
            for (int n = 1; n <= kChildCutoff; ++n) {
              const auto [off, fac] = child_map(l, n);
              const double a = off + fac * blo, b = off + fac * bhi;
              const double lo = std::min(a, b), hi = std::max(a, b);
              if (lo <= l.p && l.p <= hi) throw Error(ErrorCode::invalid_argument, "child hull contains the limit point");
              hs.emplace_back(lo, hi);
            }
            std::sort(hs.begin(), hs.end());
            for (std::size_t i = 0; i + 1 < hs.size(); ++i)
              if (hs[i].second >= hs[i + 1].first) throw Error(ErrorCode::invalid_argument, "child hulls overlap");
            // Tail certificate: geometric copies beyond the cutoff sit within
            // tolerance of p; harmonic copies decrease monotonically to p.
            if (l.law == cb::Law::geometric) {
              const double reach = std::pow(l.ratio, kChildCutoff) *
                                   (std::fabs(l.shift) + std::max(std::fabs(blo), std::fabs(bhi)));
              if (reach > kGeomTol)
                throw Error(ErrorCode::invalid_argument, "geometric tail does not reach the limit point");
            }
          },
          [](const cb::Union& u) {
            std::vector<std::pair<double, double>> hs;
            for (const auto& c : u.parts) {
              validate(c);
              if (!is_empty(c)) hs.push_back(hull(c));
            }
            std::sort(hs.begin(), hs.end());
            for (std::size_t i = 0; i + 1 < hs.size(); ++i)
              if (hs[i].second >= hs[i + 1].first) throw Error(ErrorCode::invalid_argument, "union parts overlap");
          },
          [](const cb::PerfectCore& c) {
            if (!(c.end > c.start)) throw Error(ErrorCode::invalid_argument, "cantor interval must have positive length");
          },
      },
      s.node);
}

CBSet cb_derivative(const CBSet& s) {
  validate(s);
  return std::visit(overloaded{
                        [](const cb::Points&) { return CBSet{cb::Points{}}; },
                        [](const cb::Limit& l) {
                          CBSet d = cb_derivative(*l.base);
                          if (is_empty(d)) return make_points({l.p});
                          cb::Limit out = l;
                          out.base = std::make_shared<const CBSet>(std::move(d));
                          return CBSet{out};
                        },
                        [](const cb::Union& u) {
                          std::vector<CBSet> parts;
                          for (const auto& c : u.parts) {
                            CBSet d = cb_derivative(c);
                            if (!is_empty(d)) parts.push_back(std::move(d));
                          }
                          if (parts.empty()) return CBSet{cb::Points{}};
                          if (parts.size() == 1) return parts.front();
                          return CBSet{cb::Union{std::move(parts)}};
                        },
                        [](const cb::PerfectCore& c) { return CBSet{c}; },
                    },
                    s.node);
}

CBRank cb_rank(const CBSet& s) {
  validate(s);
  CBSet cur = s;
  for (int k = 0; k <= kMaxNesting + 1; ++k) {
    if (is_empty(cur)) return CBRank{false, k};
    CBSet next = cb_derivative(cur);
    // Derivation stabilizes only on a perfect core.
    if (std::holds_alternative<cb::PerfectCore>(next.node) ||
        (std::holds_alternative<cb::Union>(next.node) &&
         std::all_of(std::get<cb::Union>(next.node).parts.begin(), std::get<cb::Union>(next.node).parts.end(),
                     [](const CBSet& c) { return std::holds_alternative<cb::PerfectCore>(c.node); })))
      return CBRank{true, 0};
    cur = std::move(next);
  }
  throw Error(ErrorCode::depth_exceeded, "derivation did not terminate within the nesting bound");
}

PermeabilityDecision is_permeable_1d(const CBSet& s) {
  PermeabilityDecision d;
  d.rank = cb_rank(s);
  d.permeable = !d.rank.perfect_core;
  d.reason = d.permeable ? "countable closure: derivation empties after " + std::to_string(d.rank.rank) + " steps"
                         : "closure contains a perfect set";
  return d;
}

std::vector<double> sample_points(const CBSet& s, int children) {
  std::vector<double> out;
  std::visit(overloaded{
                 [&](const cb::Points& p) { out = p.values; },
                 [&](const cb::Limit& l) {
                   out.push_back(l.p);
                   const auto base = sample_points(*l.base, children);
                   for (int n = 1; n <= children; ++n) {
                     const auto [off, fac] = child_map(l, n);
                     for (double v : base) out.push_back(off + fac * v);
                   }
                 },
                 [&](const cb::Union& u) {
                   for (const auto& c : u.parts) {
                     const auto v = sample_points(c, children);
                     out.insert(out.end(), v.begin(), v.end());
                   }
                 },
                 [&](const cb::PerfectCore& c) {
                   // Endpoints of the construction intervals at level `children` (capped).
                   const int level = std::min(children, 12);
                   std::vector<double> ends{0.0, 1.0};
                   for (int k = 0; k < level; ++k) {
                     std::vector<double> next;
                     for (std::size_t i = 0; i + 1 < ends.size(); i += 2) {
                       const double a = ends[i], b = ends[i + 1], w = (b - a) / 3.0;
                       next.insert(next.end(), {a, a + w, b - w, b});
                     }
                     ends = std::move(next);
                   }
                   for (double u : ends) out.push_back(c.start + (c.end - c.start) * u);
                 },
             },
             s.node);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double cantor_staircase_exact(std::int64_t num, std::int64_t den, int depth) {
  if (den <= 0 || num < 0 || num > den) throw Error(ErrorCode::out_of_domain, "argument must lie in [0, 1]");
  if (depth < 0 || depth > 52) throw Error(ErrorCode::invalid_argument, "depth must lie in [0, 52]");
  if (num == den) return 1.0;
  if (den > std::numeric_limits<std::int64_t>::max() / 3) throw Error(ErrorCode::invalid_argument, "denominator too large");
  double value = 0.0;
  for (int k = 1; k <= depth; ++k) {
    num *= 3;
    const std::int64_t digit = num / den;
    num -= digit * den;
    const double bit = std::ldexp(1.0, -k);
    if (digit == 1) return value + bit;
    if (digit == 2) value += bit;
    if (num == 0) break;
  }
  return value;
}

double cantor_staircase(double x, int depth) {
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorCode::out_of_domain, "argument must lie in [0, 1]");
  if (depth < 0 || depth > 52) throw Error(ErrorCode::invalid_argument, "depth must lie in [0, 52]");
  const auto r = classify_rational(x);
  if (r.verdict == Rationality::rational) return cantor_staircase_exact(r.approximation.num, r.approximation.den, depth);
  // Floating digits lose one ternary digit of accuracy per step; stop at 30.
  double value = 0.0;
  for (int k = 1; k <= std::min(depth, 30); ++k) {
    x *= 3.0;
    const double digit = std::floor(x);
    x -= digit;
    const double bit = std::ldexp(1.0, -k);
    if (digit == 1.0) return value + bit;
    if (digit >= 2.0) value += bit;
  }
  return value;
}

}  // namespace permeable
