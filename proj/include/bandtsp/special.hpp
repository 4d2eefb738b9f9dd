#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bandtsp/sampling.hpp"  // kPi

namespace bandtsp {

// Certified absolute error model for erf_eval over |x| <= 6. The actual
// error is ~1e-17 (see below); 1e-14 leaves two orders of headroom and is
// what the slack ledger in the certifier charges per evaluation.
inline constexpr double kErfErrBound = 1e-14;

struct ErfValue {
  double value = 0.0;
  double err_bound = kErfErrBound;
};

namespace detail {

// Maclaurin series in long double. Alternating with term ratio x^2/n, so for
// |x| < 2 the largest intermediate is < 3.1 and truncation is bounded by the
// first dropped term; "< 1e-22 relative" leaves total error comfortably
// below 1e-17 after the <=64 accumulation roundings at long double eps.
inline long double erf_series(long double x) {
  const long double x2 = x * x;
  long double term = x;  // (-1)^n x^(2n+1) / n!
  long double sum = x;
  for (int n = 1; n < 96; ++n) {
    term *= -x2 / n;
    const long double contrib = term / (2 * n + 1);
    sum += contrib;
    if (std::abs(contrib) < 1e-22L * std::abs(sum)) break;
  }
  return sum * 2.0L / std::sqrt(3.14159265358979323846264338328L);
}

// Lentz evaluation of the classical continued fraction
//   erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
// which converges geometrically for x >= 2.
inline long double erfc_cf(long double x) {
  const long double tiny = 1e-40L;
  long double f = x;
  long double c = 1.0L / tiny;
  long double d = 1.0L / x;
  for (int n = 1; n < 400; ++n) {
    const long double an = 0.5L * n;
    d = x + an * d;
    if (std::abs(d) < tiny) d = tiny;
    c = x + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0L / d;
    const long double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0L) < 1e-22L) break;
  }
  return std::exp(-x * x) /
         (std::sqrt(3.14159265358979323846264338328L) * f);
}

}  // namespace detail

// erf with a certified absolute error bound. Series below |x| = 2, continued
// fraction above, both accumulated in long double so the double result is
// correct to well under the reported bound; tests validate against a
// 100-digit series oracle on a dense grid.
inline ErfValue erf_eval(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("erf_eval: x not finite");
  const long double ax = std::abs(static_cast<long double>(x));
  long double v;
  if (ax < 2.0L)
    v = detail::erf_series(ax);
  else
    v = 1.0L - detail::erfc_cf(ax);
  if (x < 0) v = -v;
  return {static_cast<double>(v), kErfErrBound};
}

// F(a) = integral_0^a (a - r) pi r exp(-pi r^2/2) dr
//      = a - erf(sqrt(pi/2) a) / sqrt(2); nonnegative and increasing.
inline double F_of(double a) {
  if (a < 0.0) throw std::invalid_argument("F_of: a must be >= 0");
  return a - erf_eval(std::sqrt(kPi / 2.0) * a).value / std::sqrt(2.0);
}

// H(a) = integral_0^a F = a^2/2 - (a/sqrt(2)) erf(a sqrt(pi/2))
//        - exp(-pi a^2/2)/pi + 1/pi; H(0) = 0, H' = F >= 0.
inline double H_of(double a) {
  if (a < 0.0) throw std::invalid_argument("H_of: a must be >= 0");
  const double e = erf_eval(a * std::sqrt(kPi / 2.0)).value;
  return a * a / 2.0 - a / std::sqrt(2.0) * e -
         std::exp(-kPi / 2.0 * a * a) / kPi + 1.0 / kPi;
}

// Absolute error ledger entry for one H evaluation: the erf term enters
// scaled by a/sqrt(2) plus a cushion for the handful of double roundings in
// the expression itself.
inline double H_err_bound(double a) {
  return kErfErrBound * (a / std::sqrt(2.0) + 1.0) +
         8.0 * std::numeric_limits<double>::epsilon();
}

}  // namespace bandtsp
