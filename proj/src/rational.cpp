#include "permeable/rational.hpp"

#include <cfloat>
#include <cmath>

namespace permeable {

RationalityDecision classify_rational(double x, double tol, std::int64_t bound) {
  const long double target = x;
  const long double rep_eps = 4.0L * DBL_EPSILON * std::fmax(1.0, std::fabs(x));

  // Convergents h_k / k_k of the continued fraction of x.
  long double h_prev = 1, h = std::floor(target);
  long double k_prev = 0, k = 1;
  long double rem = target - std::floor(target);

  RationalityDecision out;
  out.approximation = {static_cast<std::int64_t>(h), 1};
  out.error = static_cast<double>(std::fabs(target - h));
  bool within_tol = out.error <= tol;

  for (int iter = 0; iter < 64; ++iter) {
    const long double err = std::fabs(target - h / k);
    if (err <= rep_eps) {
      out.verdict = Rationality::rational;
      out.approximation = {static_cast<std::int64_t>(h), static_cast<std::int64_t>(k)};
      out.error = static_cast<double>(err);
      return out;
    }
    if (err <= tol) within_tol = true;
    if (rem <= 0.0L) break;
    const long double inv = 1.0L / rem;
    const long double a = std::floor(inv);
    rem = inv - a;
    const long double h_next = a * h + h_prev;
    const long double k_next = a * k + k_prev;
    if (k_next > static_cast<long double>(bound)) break;
    h_prev = h, h = h_next;
    k_prev = k, k = k_next;
    out.approximation = {static_cast<std::int64_t>(h), static_cast<std::int64_t>(k)};
    out.error = static_cast<double>(std::fabs(target - h / k));
  }
  out.verdict = within_tol ? Rationality::undecidable : Rationality::irrational;
  return out;
}

}  // namespace permeable
