#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bandtsp/rng.hpp"

namespace bandtsp {

inline constexpr double kPi = 3.14159265358979323846;

// One (k+1)-vertex band tuple in scaled coordinates: consecutive horizontal
// gaps are Exp(1), heights are Uniform[0,1]. Positions x_i are the gap
// prefix sums with x_0 = 0.
struct TupleSample {
  int k = 0;
  std::vector<double> gaps;     // z[0..k-1]; gap i sits between vertex i and i+1
  std::vector<double> heights;  // u[0..k]

  double position(int i) const {
    double x = 0.0;
    for (int j = 0; j < i; ++j) x += gaps[static_cast<std::size_t>(j)];
    return x;
  }

  // x[0..k], reusing the buffer's capacity.
  void positions_into(std::vector<double>& x) const {
    x.resize(static_cast<std::size_t>(k) + 1);
    x[0] = 0.0;
    for (int i = 0; i < k; ++i)
      x[static_cast<std::size_t>(i) + 1] =
          x[static_cast<std::size_t>(i)] + gaps[static_cast<std::size_t>(i)];
  }
};

// Tuple plus the adjacent-band neighbor geometry: r is the distance of the
// nearest vertex in the band above (point-density units), theta its angle
// relative to the boundary.
struct CrossSample {
  TupleSample tuple;
  double r = 0.0;
  double theta = 0.0;
};

// Exp(1) by inverse transform; -log1p(-u) is exact at u=0 and finite for
// every reachable u (1.0 excluded by the generator).
inline double sample_exponential(SplitStream& stream) {
  return -std::log1p(-stream.next_unit());
}

// Rayleigh with scale 1/sqrt(pi): survival P(R >= t) = exp(-pi t^2 / 2).
inline double sample_rayleigh(SplitStream& stream) {
  return std::sqrt(-(2.0 / kPi) * std::log1p(-stream.next_unit()));
}

inline double sample_theta(SplitStream& stream) {
  return (stream.next_unit() - 0.5) * kPi;
}

// k gaps first, then k+1 heights; fixed draw order keeps replay exact.
inline void sample_tuple_into(SplitStream& stream, int k, TupleSample& out) {
  if (k < 2) throw std::invalid_argument("sample_tuple: k must be >= 2");
  out.k = k;
  out.gaps.resize(static_cast<std::size_t>(k));
  out.heights.resize(static_cast<std::size_t>(k) + 1);
  for (auto& z : out.gaps) z = sample_exponential(stream);
  for (auto& u : out.heights) u = stream.next_unit();
}

inline TupleSample sample_tuple(SplitStream& stream, int k) {
  TupleSample s;
  sample_tuple_into(stream, k, s);
  return s;
}

// Tuple draws first so a tuple-only consumer of the same stream sees the
// identical tuple; r and theta follow.
inline void sample_cross_into(SplitStream& stream, int k, CrossSample& out) {
  sample_tuple_into(stream, k, out.tuple);
  out.r = sample_rayleigh(stream);
  out.theta = sample_theta(stream);
}

inline CrossSample sample_cross(SplitStream& stream, int k) {
  CrossSample c;
  sample_cross_into(stream, k, c);
  return c;
}

}  // namespace bandtsp
