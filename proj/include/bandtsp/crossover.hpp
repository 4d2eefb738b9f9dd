#pragma once

#include <cmath>

#include "bandtsp/tuple_geometry.hpp"

namespace bandtsp {

// Outcome of the band-crossover decision for one sample. The crossover can
// only shave length off the within-band optimum, never add to it.
struct CrossoverValue {
  double length = 0.0;
  bool chose_crossover = false;
  int j_star = 0;
};

// Interior vertex with maximal height; ties go to the smallest index.
inline int highest_interior(const TupleSample& s) {
  int best = 1;
  for (int j = 2; j <= s.k - 1; ++j)
    if (s.heights[static_cast<std::size_t>(j)] >
        s.heights[static_cast<std::size_t>(best)])
      best = j;
  return best;
}

// Length of the 2-cycle to the nearest neighbor in the band above:
// 2h * ||(r cos(theta), h (1 - u_top) + r sin(theta))||.
inline double two_cycle_cost(const TupleSample& s, const BandParams& p,
                             double r, double theta) {
  const double h = p.h();
  const double u_top = s.heights[static_cast<std::size_t>(highest_interior(s))];
  return 2.0 * h * std::hypot(r * std::cos(theta),
                              h * (1.0 - u_top) + r * std::sin(theta));
}

// Triangle-inequality relaxation 2h (r + h (1 - u_top)); an upper bound on
// two_cycle_cost for every theta.
inline double relaxed_two_cycle_cost(const TupleSample& s, const BandParams& p,
                                     double r) {
  if (r < 0.0)
    throw std::invalid_argument("relaxed_two_cycle_cost: r must be >= 0");
  const double h = p.h();
  const double u_top = s.heights[static_cast<std::size_t>(highest_interior(s))];
  return 2.0 * h * (r + h * (1.0 - u_top));
}

// min( best within-band path,
//      2-cycle to the band above + best path skipping the crossover vertex ).
// Ties keep the within-band branch.
inline CrossoverValue crossover_value(const CrossSample& c,
                                      const BandParams& p) {
  PathWorkspace& ws = tls_path_workspace();
  detail::fill_scaled_distances(c.tuple, p, ws);
  const bool use_dp = detail::prefer_dp(c.tuple.k);

  CrossoverValue out;
  out.j_star = highest_interior(c.tuple);

  const double within =
      detail::min_path_length_filled(c.tuple.k, -1, use_dp, ws);
  const double cross =
      two_cycle_cost(c.tuple, p, c.r, c.theta) +
      detail::min_path_length_filled(c.tuple.k, out.j_star, use_dp, ws);

  out.chose_crossover = cross < within;
  out.length = out.chose_crossover ? cross : within;
  return out;
}

}  // namespace bandtsp
