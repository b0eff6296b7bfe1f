#pragma once

#include <cstdint>

namespace permeable {

/// Default denominator bound for rational reconstruction.
inline constexpr std::int64_t kRationalDenominatorBound = 1'000'000;

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

enum class Rationality { rational, irrational, undecidable };

struct RationalityDecision {
  Rationality verdict = Rationality::irrational;
  Fraction approximation;  // best convergent found with den <= bound
  double error = 0.0;      // |x - approximation|
};

/// Continued-fraction rational reconstruction of a double.
///
/// A value is `rational` when some convergent p/q with q <= bound reproduces
/// it up to representation error, `irrational` when no convergent with
/// q <= bound lies within `tol`, and `undecidable` when a convergent lies
/// within `tol` without reproducing the value. With tol = 0 the verdict is
/// never undecidable.
RationalityDecision classify_rational(double x, double tol = 0.0,
                                      std::int64_t bound = kRationalDenominatorBound);

inline bool is_rational(double x, std::int64_t bound = kRationalDenominatorBound) {
  return classify_rational(x, 0.0, bound).verdict == Rationality::rational;
}

}  // namespace permeable
