#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include <nlohmann/json.hpp>

#include "bandtsp/estimator.hpp"

namespace bandtsp {

// Closed-form high-probability deviation radius for the band estimators.
// The per-replicate length splits into the horizontal span (Gamma(k,1),
// sub-gamma tail) plus a remainder bounded by k*h2 (Hoeffding tail); the
// union of the two two-sided tails at t = log(4/delta) costs exactly delta.
struct ConcentrationResult {
  int k = 0;
  std::uint64_t m = 0;
  double h2 = 0.0;
  double delta = 0.0;
  double t = 0.0;          // log(4/delta)
  double a_gamma = 0.0;    // sqrt(2kt/M) + t/M
  double a_bounded = 0.0;  // k h2 sqrt(t/(2M))
  double epsilon = 0.0;    // (a_gamma + a_bounded) / (k h)
};

inline ConcentrationResult deviation_radius(int k, std::uint64_t m, double h2,
                                            double delta) {
  if (k < 1) throw std::invalid_argument("deviation_radius: k must be >= 1");
  if (m < 1) throw std::invalid_argument("deviation_radius: M must be >= 1");
  if (!(h2 > 0.0))
    throw std::invalid_argument("deviation_radius: h2 must be > 0");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("deviation_radius: delta must be in (0,1)");

  ConcentrationResult r;
  r.k = k;
  r.m = m;
  r.h2 = h2;
  r.delta = delta;
  r.t = std::log(4.0 / delta);
  const double kd = static_cast<double>(k);
  const double md = static_cast<double>(m);
  r.a_gamma = std::sqrt(2.0 * kd * r.t / md) + r.t / md;
  r.a_bounded = kd * h2 * std::sqrt(r.t / (2.0 * md));
  r.epsilon = (r.a_gamma + r.a_bounded) / (kd * std::sqrt(h2));
  return r;
}

// Two-sided interval around an estimate at confidence 1 - delta.
inline std::pair<double, double> interval(const EstimateResult& est,
                                          double delta) {
  const ConcentrationResult r = deviation_radius(
      est.config.k, est.config.replicates, est.config.h2, delta);
  return {est.mean - r.epsilon, est.mean + r.epsilon};
}

inline nlohmann::json to_json(const ConcentrationResult& r) {
  return {{"k", r.k},     {"M", r.m},         {"h2", r.h2},
          {"delta", r.delta}, {"t", r.t},     {"epsilon", r.epsilon},
          {"lo", nullptr},    {"hi", nullptr}};
}

inline nlohmann::json to_json(const ConcentrationResult& r, double mean) {
  nlohmann::json j = to_json(r);
  j["lo"] = mean - r.epsilon;
  j["hi"] = mean + r.epsilon;
  return j;
}

}  // namespace bandtsp
