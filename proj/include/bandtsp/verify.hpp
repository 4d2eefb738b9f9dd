#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "bandtsp/certifier.hpp"
#include "bandtsp/crossover.hpp"
#include "bandtsp/quadrature.hpp"
#include "bandtsp/sampling.hpp"
#include "bandtsp/special.hpp"
#include "bandtsp/tuple_geometry.hpp"

namespace bandtsp {

// Numerical verification oracles for the inequalities the bound chain rests
// on. They ship in the library (not only in tests) so the report is
// user-runnable from the CLI.

enum class CheckStatus { pass, fail, inconclusive };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string detail;
};

struct VerifyReport {
  std::uint64_t samples = 0;
  std::vector<CheckResult> checks;

  bool all_passed() const {
    return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
      return c.status == CheckStatus::fail;
    });
  }
  bool has_warnings() const {
    return std::any_of(checks.begin(), checks.end(), [](const CheckResult& c) {
      return c.status == CheckStatus::inconclusive;
    });
  }
};

namespace detail {

inline std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// CLT-based tolerances need a real sample size to mean anything.
inline constexpr std::uint64_t kMinStatisticalSamples = 10'000;

inline CheckResult statistical(const std::string& name, std::uint64_t samples,
                               bool ok, std::string detail) {
  if (samples < kMinStatisticalSamples)
    return {name, CheckStatus::inconclusive,
            "sample count too small for the stated tolerance"};
  return {name, ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

}  // namespace detail

// (a) x_k <= L <= x_k + k h2 and L <= identity path, per sample.
inline CheckResult check_sandwich(std::uint64_t samples, std::uint64_t seed,
                                  int k = 4, double h2 = 4.0) {
  const BandParams params{h2, k};
  std::vector<int> identity(static_cast<std::size_t>(k) + 1);
  for (int i = 0; i <= k; ++i) identity[static_cast<std::size_t>(i)] = i;
  std::uint64_t violations = 0;
  TupleSample s;
  PathWorkspace& ws = tls_path_workspace();
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    sample_tuple_into(stream, k, s);
    detail::fill_scaled_distances(s, params, ws);
    const double len =
        detail::min_path_length_filled(k, -1, detail::prefer_dp(k), ws);
    double span = 0.0;
    for (double z : s.gaps) span += z;
    double ident = 0.0;
    for (int i = 0; i < k; ++i) ident += ws.dist(i, i + 1);
    if (!(span <= len && len <= span + k * h2 && len <= ident + 1e-12))
      ++violations;
  }
  return {"sandwich span <= L <= span + k*h2",
          violations == 0 ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("%llu violations in %llu samples",
                      (unsigned long long)violations,
                      (unsigned long long)samples)};
}

// (b) crossover length <= within-band length, per sample.
inline CheckResult check_crossover_dominance(std::uint64_t samples,
                                             std::uint64_t seed, int k = 4,
                                             double h2 = 4.0) {
  const BandParams params{h2, k};
  std::uint64_t violations = 0;
  std::uint64_t strict = 0;
  CrossSample c;
  PathWorkspace& ws = tls_path_workspace();
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    sample_cross_into(stream, k, c);
    detail::fill_scaled_distances(c.tuple, params, ws);
    const double within =
        detail::min_path_length_filled(k, -1, detail::prefer_dp(k), ws);
    const CrossoverValue v = crossover_value(c, params);
    if (v.length > within) ++violations;
    if (v.length < within) ++strict;
  }
  const bool ok = violations == 0 && strict > 0;
  return {"crossover <= within-band per sample",
          ok ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("%llu violations, strict improvement on %llu of %llu",
                      (unsigned long long)violations, (unsigned long long)strict,
                      (unsigned long long)samples)};
}

// (c) relaxed 2-cycle cost >= exact 2-cycle cost for every theta.
inline CheckResult check_relaxed_two_cycle(std::uint64_t samples,
                                           std::uint64_t seed, int k = 4,
                                           double h2 = 4.0) {
  const BandParams params{h2, k};
  std::uint64_t violations = 0;
  CrossSample c;
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    sample_cross_into(stream, k, c);
    const double exact = two_cycle_cost(c.tuple, params, c.r, c.theta);
    const double relaxed = relaxed_two_cycle_cost(c.tuple, params, c.r);
    if (relaxed < exact - 1e-12) ++violations;
  }
  return {"relaxed >= exact 2-cycle cost",
          violations == 0 ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("%llu violations in %llu samples",
                      (unsigned long long)violations,
                      (unsigned long long)samples)};
}

namespace detail {

inline double delta_case1(double a, double b, double c, double d) {
  return std::hypot(a, c + d) + std::hypot(c, b) - std::hypot(d, a + b);
}
inline double delta_case2(double a, double b, double c, double d) {
  return std::hypot(a, c + d) + std::hypot(c, a + b) - std::hypot(d, b);
}
inline double delta_case3(double a, double b, double c, double d) {
  return std::hypot(a, c) + std::hypot(a + b, c + d) - std::hypot(d, b);
}

}  // namespace detail

// (d) triangle-patch cost gap: Case 1 is nondecreasing in D, its D=0 form
// dominates sqrt(2) C - ((sqrt(2)-1)/sqrt(2))(A+B), and (with A and B
// exchangeable) Case 1 lower-bounds Cases 2 and 3.
inline CheckResult check_delta_bounds(std::uint64_t samples,
                                      std::uint64_t seed) {
  std::uint64_t violations = 0;
  const double coef = (std::sqrt(2.0) - 1.0) / std::sqrt(2.0);
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    const double a = sample_exponential(stream);
    const double b = sample_exponential(stream);
    const double c = sample_exponential(stream);
    const double d = sample_exponential(stream);
    const double d1 = detail::delta_case1(a, b, c, d);
    const double d1_zero = detail::delta_case1(a, b, c, 0.0);
    const double bound = std::sqrt(2.0) * c - coef * (a + b);
    const double d1_exch =
        std::min(d1, detail::delta_case1(b, a, c, d));
    const bool ok = d1 >= d1_zero - 1e-12 && d1_zero >= bound - 1e-12 &&
                    d1_exch <= detail::delta_case2(a, b, c, d) + 1e-12 &&
                    d1_exch <= detail::delta_case3(a, b, c, d) + 1e-12;
    if (!ok) ++violations;
  }
  return {"patch-gap case bounds (monotone in D, D=0 lower bound, "
          "case dominance under A/B exchange)",
          violations == 0 ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("%llu violations in %llu samples",
                      (unsigned long long)violations,
                      (unsigned long long)samples)};
}

// (e) F and H closed forms against direct quadrature of their defining
// integrals, to 1e-10 on a grid. The integrands are injectable so a
// deliberately corrupted implementation is detectable.
inline CheckResult check_special_closed_forms(
    double (*f_impl)(double) = &F_of, double (*h_impl)(double) = &H_of) {
  double worst = 0.0;
  for (int i = 0; i <= 48; ++i) {
    const double a = 3.0 * i / 48.0;
    const double f_quad = adaptive_simpson(
        [&](double r) { return (a - r) * kPi * r * std::exp(-kPi / 2 * r * r); },
        0.0, a, 1e-13);
    const double h_quad =
        adaptive_simpson([&](double t) { return F_of(t); }, 0.0, a, 1e-13);
    worst = std::max(worst, std::abs(f_impl(a) - f_quad));
    worst = std::max(worst, std::abs(h_impl(a) - h_quad));
  }
  return {"F/H closed forms vs quadrature",
          worst <= 1e-10 ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("max |closed form - quadrature| = %.3g", worst)};
}

// (f) improvement density integrates to 1 (nested quadrature; Rayleigh tail
// beyond r = 12 is below 1e-90).
inline CheckResult check_density_normalization(double h = 1.0) {
  const double total = adaptive_simpson(
      [&](double z2) {
        return adaptive_simpson(
            [&](double z1) {
              return adaptive_simpson(
                  [&](double r) { return improvement_density(z1, z2, r, h); },
                  0.0, 12.0, 1e-11);
            },
            0.0, h - z2, 1e-10);
      },
      0.0, h, 1e-9);
  return {"improvement density normalization",
          std::abs(total - 1.0) <= 1e-6 ? CheckStatus::pass : CheckStatus::fail,
          detail::fmt("integral = %.9f", total)};
}

// (g) Kolmogorov-Smirnov distance between Rayleigh draws and the closed-form
// CDF 1 - exp(-pi t^2/2).
inline CheckResult check_rayleigh_ks(std::uint64_t samples,
                                     std::uint64_t seed) {
  std::vector<double> draws(samples);
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    draws[g] = sample_rayleigh(stream);
  }
  std::sort(draws.begin(), draws.end());
  double ks = 0.0;
  const double n = static_cast<double>(samples);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double cdf = 1.0 - std::exp(-kPi / 2.0 * draws[i] * draws[i]);
    ks = std::max(ks, std::abs(cdf - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - cdf));
  }
  return detail::statistical("rayleigh KS distance", samples, ks < 0.002,
                             detail::fmt("KS = %.5f (threshold 0.002)", ks));
}

// (h) mean of the sum of the three largest of four iid Exp(h) draws equals
// (4 - 1/4)/h, within 4 Monte Carlo standard errors.
inline CheckResult check_top_three_exponential(std::uint64_t samples,
                                               std::uint64_t seed,
                                               double h = 1.8027756377319946) {
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    double v[4];
    for (double& x : v) x = sample_exponential(stream) / h;
    const double total = v[0] + v[1] + v[2] + v[3];
    const double value = total - std::min(std::min(v[0], v[1]),
                                          std::min(v[2], v[3]));
    sum += value;
    sumsq += value * value;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  const double target = 3.75 / h;
  return detail::statistical(
      "E[sum of three largest of four Exp(h)] = 3.75/h", samples,
      std::abs(mean - target) <= 4.0 * se,
      detail::fmt("mean = %.6f, target = %.6f, 4se = %.6f", mean, target,
                  4.0 * se));
}

// Exchangeability: a designated interior vertex is the highest of five with
// probability exactly 1/5.
inline CheckResult check_interior_highest_probability(std::uint64_t samples,
                                                      std::uint64_t seed) {
  std::uint64_t hits = 0;
  TupleSample s;
  for (std::uint64_t g = 0; g < samples; ++g) {
    SplitStream stream(StreamKey{seed, g});
    sample_tuple_into(stream, 4, s);
    const double first_interior = s.heights[1];
    bool highest = true;
    for (int j = 0; j <= 4; ++j)
      if (j != 1 && s.heights[static_cast<std::size_t>(j)] > first_interior)
        highest = false;
    if (highest) ++hits;
  }
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double se = std::sqrt(0.2 * 0.8 / n);
  return detail::statistical(
      "P(designated interior vertex is highest of five) = 1/5", samples,
      std::abs(p - 0.2) <= 4.0 * se,
      detail::fmt("p = %.5f, 4se = %.5f", p, 4.0 * se));
}

inline VerifyReport verify_all(std::uint64_t samples,
                               std::uint64_t seed = 0x5eedbead) {
  VerifyReport report;
  report.samples = samples;
  report.checks.push_back(check_sandwich(samples, seed));
  report.checks.push_back(check_crossover_dominance(samples, seed + 1));
  report.checks.push_back(check_relaxed_two_cycle(samples, seed + 2));
  report.checks.push_back(check_delta_bounds(samples, seed + 3));
  report.checks.push_back(check_special_closed_forms());
  report.checks.push_back(check_density_normalization());
  report.checks.push_back(check_rayleigh_ks(samples, seed + 4));
  report.checks.push_back(check_top_three_exponential(samples, seed + 5));
  report.checks.push_back(check_interior_highest_probability(samples, seed + 6));
  return report;
}

}  // namespace bandtsp
