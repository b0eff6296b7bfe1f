#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace permeable {

struct CBSet;

namespace cb {

/// Finite list of reals.
struct Points {
  std::vector<double> values;
};

/// Child n is an affine copy of `base` accumulating at p:
///   harmonic:  p + s/n + s/(n(n+1)) * base / (2 max(1, |base|))
///   geometric: p + r^n (c + base)
enum class Law { harmonic, geometric };

struct Limit {
  double p = 0.0;
  std::shared_ptr<const CBSet> base;
  Law law = Law::harmonic;
  double scale = 1.0;   // s for harmonic
  double ratio = 0.5;   // r for geometric
  double shift = 3.0;   // c for geometric
  int declared_depth = 64;
};

/// Finite union of parts with pairwise disjoint hulls.
struct Union {
  std::vector<CBSet> parts;
};

/// Middle-thirds Cantor set on [start, end].
struct PerfectCore {
  double start = 0.0;
  double end = 1.0;
};

}  // namespace cb

struct CBSet {
  std::variant<cb::Points, cb::Limit, cb::Union, cb::PerfectCore> node;
};

/// Children generated when validating limit nodes.
inline constexpr int kChildCutoff = 64;
/// Largest accepted nesting of limit nodes.
inline constexpr int kMaxNesting = 64;

CBSet make_points(std::vector<double> values);
CBSet make_limit(double p, CBSet base, cb::Law law, double scale_or_ratio, double shift = 0.0);
CBSet make_union(std::vector<CBSet> parts);
CBSet make_cantor(double start = 0.0, double end = 1.0);
/// {0} together with 1/n for n >= 1.
CBSet make_harmonic_sequence();
/// S_0 = {0}, S_{j+1} = {0} u U_n (2^-n S_j + 3 2^-n).
CBSet make_sk(int k);

/// Checks disjoint child hulls, the tail certificate and the nesting bound.
/// Throws invalid_argument or depth_exceeded.
void validate(const CBSet& s);

bool is_empty(const CBSet& s);
/// Closed hull [lo, hi] of a nonempty set.
std::pair<double, double> hull(const CBSet& s);
int nesting_depth(const CBSet& s);

/// The set minus its isolated points.
CBSet cb_derivative(const CBSet& s);

struct CBRank {
  bool perfect_core = false;
  int rank = 0;  // meaningful when !perfect_core

  std::string to_string() const { return perfect_core ? "perfect_core" : std::to_string(rank); }
  friend bool operator==(const CBRank&, const CBRank&) = default;
};

/// Smallest k with H^k(S) empty, or the perfect-core marker.
CBRank cb_rank(const CBSet& s);

struct PermeabilityDecision {
  bool permeable = false;
  CBRank rank;
  std::string reason;
};

/// A closed subset of R is permeable exactly when its closure is countable.
PermeabilityDecision is_permeable_1d(const CBSet& s);

/// Finite sample of points of the set: `children` per limit node and
/// construction level `children` for perfect cores.
std::vector<double> sample_points(const CBSet& s, int children);

/// Devil's staircase via ternary digits, truncated at the first digit 1.
/// Rational inputs with small denominators use exact integer digits.
double cantor_staircase(double x, int depth = 52);
/// Exact digits of num/den in [0, 1].
double cantor_staircase_exact(std::int64_t num, std::int64_t den, int depth = 52);

}  // namespace permeable
