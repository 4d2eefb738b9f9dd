#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "bandtsp/quadrature.hpp"
#include "bandtsp/special.hpp"

namespace bandtsp {

// Parameters of the rigorous improvement certificate. The derivation fixes
// k = 4 (its constants hardcode five-point tuples); the baseline bound is an
// external input recorded as an assumption.
struct CertParams {
  double h2 = 3.25;
  int k = 4;
  double base_bound = 0.90380;
  std::uint64_t grid_n = 1'000'000;

  void validate() const {
    if (!(h2 > 0.0)) throw std::invalid_argument("CertParams: h2 must be > 0");
    if (k != 4)
      throw std::invalid_argument("CertParams: the certificate requires k = 4");
    if (grid_n < 2)
      throw std::invalid_argument("CertParams: grid_n must be >= 2");
  }
};

// Closed-form constants of the improvement integral. A(u) is affine
// decreasing and hits zero exactly at u1_star.
struct CertConstants {
  double alpha = 0.0;    // (1 - sqrt(2))/sqrt(2) * 3.75/h; negative
  double slope_b = 0.0;  // h (sqrt(2) + 2) / 2
  double u1_star = 0.0;  // 1 + alpha / (sqrt(2) h)

  double h = 0.0;

  double A(double u) const {
    return (std::sqrt(2.0) * h * (1.0 - u) + alpha) / 2.0;
  }
};

inline CertConstants cert_constants(const CertParams& params) {
  params.validate();
  CertConstants c;
  c.h = std::sqrt(params.h2);
  c.alpha = (1.0 - std::sqrt(2.0)) / std::sqrt(2.0) * 3.75 / c.h;
  c.slope_b = c.h * (std::sqrt(2.0) + 2.0) / 2.0;
  c.u1_star = 1.0 + c.alpha / (std::sqrt(2.0) * c.h);
  return c;
}

// Slack-accounted record of the whole bound chain.
struct Certificate {
  double h2 = 0.0;
  int k = 0;
  double base_bound = 0.0;
  double alpha = 0.0;
  double slope_b = 0.0;
  double u1_star = 0.0;
  std::uint64_t grid_n = 0;
  double eta_lower = 0.0;        // certified lower bound on the improvement
  double improvement_term = 0.0; // eta_lower / (k h)
  double slack_budget = 0.0;     // total conservatism charged, added back
  double final_bound = 0.0;      // base - improvement + slack
  std::string erf_err_model;
};

namespace detail {

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

}  // namespace detail

// Lower Riemann sum for eta = (24/B) * int_0^{u*} u^3 H(A(u)) du over a
// uniform grid. The integrand is a product of an increasing factor (u^3,
// taken at left endpoints) and a decreasing one (H(A(u)), taken at right
// endpoints), so the cell-wise product of the two underestimates the cell
// integral. Every H evaluation is reduced by its certified error bound,
// summation is compensated with its rounding charged, and all factor
// roundings are pushed in the conservative direction, so eta_lower is a
// mathematically valid lower bound under the documented error model. The
// grid is split into a fixed number of index chunks merged in order, which
// keeps the result bit-identical for any worker count.
inline Certificate eta_lower_bound(const CertParams& params,
                                   unsigned threads = 0) {
  params.validate();
  const CertConstants c = cert_constants(params);
  const std::uint64_t n = params.grid_n;
  const double ustar = c.u1_star;
  constexpr double eps = std::numeric_limits<double>::epsilon();

  const std::uint64_t chunks = std::min<std::uint64_t>(256, n);
  const std::uint64_t per = n / chunks;
  const std::uint64_t rem = n % chunks;

  struct Partial {
    double sum = 0.0;
    double slack_units = 0.0;  // total H decrement, in summand units
  };
  std::vector<Partial> partial(chunks);

  const auto grid_u = [&](std::uint64_t i) {
    return ustar * (static_cast<double>(i) / static_cast<double>(n));
  };

  std::atomic<std::uint64_t> next{0};
  const auto worker = [&] {
    for (std::uint64_t ci = next.fetch_add(1); ci < chunks;
         ci = next.fetch_add(1)) {
      const std::uint64_t lo = 1 + ci * per + std::min<std::uint64_t>(ci, rem);
      const std::uint64_t hi = lo + per + (ci < rem ? 1 : 0);
      detail::KahanSum s;
      detail::KahanSum slack;
      for (std::uint64_t i = lo; i < hi; ++i) {
        const double u_left = grid_u(i - 1);
        const double u_right = grid_u(i);
        const double a = std::max(0.0, c.A(u_right));
        const double h_err = H_err_bound(a);
        const double h_low = std::max(0.0, H_of(a) - h_err);
        const double w = (u_right - u_left) * u_left * u_left * u_left;
        s.add(w * h_low);
        slack.add(w * h_err);
      }
      partial[ci] = {s.sum, slack.sum};
    }
  };

  unsigned t = threads != 0 ? threads : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  t = static_cast<unsigned>(std::min<std::uint64_t>(t, chunks));
  if (t <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  detail::KahanSum total;
  detail::KahanSum slack_units;
  for (const auto& p : partial) {
    total.add(p.sum);
    slack_units.add(p.slack_units);
  }

  // Summation + per-term rounding allowance: all terms are nonnegative, so
  // the accumulated sum bounds the sum of magnitudes.
  const double sum_allow = 16.0 * eps * total.sum;
  const double sum_lower = std::max(0.0, total.sum - sum_allow);

  // Divide by B rounded up, then shave the multiplicative roundings.
  const double b_hi = c.slope_b * (1.0 + 4.0 * eps);
  const double eta_lower =
      std::max(0.0, 24.0 * sum_lower / b_hi * (1.0 - 4.0 * eps));

  const double kh = static_cast<double>(params.k) * c.h;
  const double improvement =
      std::max(0.0, eta_lower / kh * (1.0 - 4.0 * eps));

  // Ledger: everything deliberately given away above, plus an allowance for
  // the final base - improvement subtraction. Added back onto the bound.
  const double factor = 24.0 / c.slope_b;
  const double slack = factor * (slack_units.sum + sum_allow) +
                       16.0 * eps * (24.0 * total.sum / c.slope_b) / kh +
                       4.0 * eps * params.base_bound;

  Certificate cert;
  cert.h2 = params.h2;
  cert.k = params.k;
  cert.base_bound = params.base_bound;
  cert.alpha = c.alpha;
  cert.slope_b = c.slope_b;
  cert.u1_star = c.u1_star;
  cert.grid_n = n;
  cert.eta_lower = eta_lower;
  cert.improvement_term = improvement;
  cert.slack_budget = slack;
  cert.final_bound = params.base_bound - improvement + slack;
  cert.erf_err_model =
      "erf abs err <= 1e-14 per eval (long-double series/continued fraction), "
      "subtracted from every H; compensated summation charged 16 eps of the "
      "accumulated sum; factor roundings charged multiplicatively";
  return cert;
}

// Baseline single-band integral: an upper bound on the scaled expected step
// length
//   (1/(3 h^5)) int_0^inf e^{-z} ( 3 h^2 z^2 log((h^2 + sqrt(h^4+z^2))/z)
//                                  + 2 z^3 + (h^4 - 2 z^2) sqrt(h^4+z^2) ) dz,
// evaluated by adaptive quadrature on (0, z_max] plus an analytic tail bound
// beyond z_max added as upper slack. The integrand's z -> 0 limit is h^6.
inline double bhh_bound(double h) {
  if (!(h > 0.0)) throw std::invalid_argument("bhh_bound: h must be > 0");
  const double h2 = h * h;
  const double h4 = h2 * h2;
  const auto f = [&](double z) {
    if (z == 0.0) return h4 * h2;
    const double root = std::sqrt(h4 + z * z);
    const double logterm = std::log(h2 + root) - std::log(z);
    return std::exp(-z) *
           (3.0 * h2 * z * z * logterm + 2.0 * z * z * z +
            (h4 - 2.0 * z * z) * root);
  };
  // Tail: log((h^2+sqrt(h^4+z^2))/z) <= 2 h^2/z and the third term is
  // negative past z = h^2/sqrt(2), so for z >= z_max >= h^2 the integrand is
  // at most e^{-z} (6 h^4 z + 2 z^3).
  const double zmax = std::max(50.0, h2);
  const double tail =
      std::exp(-zmax) * (6.0 * h4 * (zmax + 1.0) +
                         2.0 * (zmax * zmax * zmax + 3.0 * zmax * zmax +
                                6.0 * zmax + 6.0));
  const double tol = 1e-11;
  const double quad = adaptive_simpson(f, 0.0, zmax, tol);
  return (quad + tol + tail) / (3.0 * h4 * h);
}

// Joint density of (Z1, Z2, R): Z1 the second-highest of five uniform
// heights measured from the band bottom, Z2 the highest measured from the
// top, R an independent Rayleigh(1/sqrt(pi)) neighbor distance.
inline double improvement_density(double z1, double z2, double r, double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("improvement_density: h must be > 0");
  if (z1 < 0.0 || z2 < 0.0 || r < 0.0 || z1 + z2 > h) return 0.0;
  const double h5 = h * h * h * h * h;
  return 20.0 / h5 * z1 * z1 * z1 * kPi * r * std::exp(-kPi / 2.0 * r * r);
}

inline nlohmann::json to_json(const Certificate& c) {
  return {{"h2", c.h2},
          {"k", c.k},
          {"base_bound", c.base_bound},
          {"alpha", c.alpha},
          {"slopeB", c.slope_b},
          {"u1_star", c.u1_star},
          {"grid_N", c.grid_n},
          {"eta_lower", c.eta_lower},
          {"improvement_term", c.improvement_term},
          {"slack_budget", c.slack_budget},
          {"final_bound", c.final_bound},
          {"erf_err_model", c.erf_err_model}};
}

// Step-by-step audit text for the certificate.
inline std::string certificate_text(const Certificate& c) {
  char buf[2048];
  std::snprintf(
      buf, sizeof(buf),
      "band-crossover improvement certificate\n"
      "  band parameter    h2 = %.6g  (h = %.12g)\n"
      "  tuple size        k  = %d\n"
      "  baseline bound    %.6g  (external assumption)\n"
      "constants\n"
      "  alpha = (1-sqrt(2))/sqrt(2) * 3.75/h          = %.12g\n"
      "  B     = h (sqrt(2)+2)/2                       = %.12g\n"
      "  u*    = 1 + alpha/(sqrt(2) h)                 = %.12g\n"
      "  A(u)  = (sqrt(2) h (1-u) + alpha)/2,  A(u*) = 0\n"
      "improvement integral\n"
      "  eta  = (24/B) * int_0^{u*} u^3 H(A(u)) du\n"
      "  H(a) = a^2/2 - (a/sqrt(2)) erf(a sqrt(pi/2)) - exp(-pi a^2/2)/pi "
      "+ 1/pi\n"
      "lower Riemann sum, N = %llu uniform cells\n"
      "  (increasing factor u^3 at left endpoints, decreasing factor\n"
      "   H(A(u)) at right endpoints; every H evaluation reduced by its\n"
      "   certified error bound; compensated summation, roundings charged)\n"
      "  eta               >= %.12g\n"
      "  improvement term  eta/(k h) = %.12g\n"
      "  slack budget      %.3g  (error-model total, added back)\n"
      "final bound\n"
      "  %.6g - %.12g + %.3g = %.12g\n",
      c.h2, std::sqrt(c.h2), c.k, c.base_bound, c.alpha, c.slope_b, c.u1_star,
      static_cast<unsigned long long>(c.grid_n), c.eta_lower,
      c.improvement_term, c.slack_budget, c.base_bound, c.improvement_term,
      c.slack_budget, c.final_bound);
  return buf;
}

}  // namespace bandtsp
