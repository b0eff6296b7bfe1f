#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "permeable/exception_set.hpp"
#include "permeable/fixtures.hpp"
#include "permeable/geometry.hpp"

namespace permeable {

enum class Verdict { confirmed, violated, precondition_rejected, not_permeable_family };

std::string_view to_string(Verdict v);

using PointPair = std::pair<Point, Point>;

struct VerificationReport {
  std::string claim;
  std::size_t pairs = 0;
  double max_ratio = 0.0;
  double threshold = 0.0;
  Verdict verdict = Verdict::confirmed;
  std::optional<PointPair> witness;
  std::string detail;
};

/// Distance oracle; nullopt stands for an infinite distance.
using MetricOracle = std::function<std::optional<double>(const Point&, const Point&)>;

MetricOracle euclidean_metric();
/// Complement of the closure of `theta`, via complement_distance (upper bound).
MetricOracle complement_metric(ExceptionSet theta, int depth = 10);
MetricOracle l1_square_metric();

/// Stratified pairs in the box [lo, hi]: 50% uniform, 30% straddling the set
/// at scales 10^-1 .. 10^-4, 20% with one endpoint on the set. Without a set,
/// or when the set has no member in the box, every pair is uniform.
std::vector<PointPair> stratified_pairs(const ExceptionSet* theta, const Point& lo, const Point& hi, int n,
                                        std::uint64_t seed);

struct LipschitzEstimate {
  double value = 0.0;
  PointPair witness;
  std::size_t finite_pairs = 0;
};

/// max |f(x) - f(y)| / metric(x, y) over the pairs; infinite distances
/// contribute 0 and pairs with x == y are skipped. Throws no_finite_pair.
LipschitzEstimate lipschitz_constant_estimate(const FixtureFunction& f, const MetricOracle& metric,
                                              const std::vector<PointPair>& pairs);

/// Checks |f(x) - f(y)| <= L |x - y| (1 + tol) on stratified pairs around the
/// set. A discontinuous fixture is rejected without sampling.
VerificationReport verify_global_lipschitz(const FixtureFunction& f, const ExceptionSet& theta, double lipschitz,
                                       int pairs, double tol, std::uint64_t seed);

/// Compares sampled sup ratios for the complements of `theta0` and `theta`.
/// Throws subset_violation if sampled members of theta0 are not in theta.
VerificationReport verify_equal_constants(const FixtureFunction& f, const ExceptionSet& theta0,
                                          const ExceptionSet& theta, int pairs, double tol, std::uint64_t seed,
                                          int depth = 10);

/// Re-classifies certificates for `theta` against the subset `theta0`.
VerificationReport verify_subset_permeability(const ExceptionSet& theta, const ExceptionSet& theta0,
                                              const Point& lo, const Point& hi, int pairs, double eps,
                                              std::uint64_t seed);

struct SuiteOptions {
  std::uint64_t seed = 0;
  int pairs = 10000;
  int depth = 10;
  double eps = 1e-6;
};

struct SuiteEntry {
  VerificationReport report;
  Verdict expected = Verdict::confirmed;
  double seconds = 0.0;  // not serialized

  bool matches() const { return report.verdict == expected; }
};

struct SuiteReport {
  SuiteOptions options;
  std::vector<SuiteEntry> entries;

  bool all_expected() const;
  /// Stable JSON text; identical options give identical bytes.
  std::string to_json() const;
};

/// Runs every built-in claim check. A check that throws is recorded as a
/// violated entry carrying the error; the suite always completes.
SuiteReport run_claim_suite(const SuiteOptions& options);

}  // namespace permeable
