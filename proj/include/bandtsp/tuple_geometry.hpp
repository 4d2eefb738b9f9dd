#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "bandtsp/path_opt.hpp"
#include "bandtsp/sampling.hpp"

namespace bandtsp {

// Band geometry in scaled coordinates: h2 is the squared band height, so a
// vertical gap u contributes h2*u to a segment's second coordinate.
struct BandParams {
  double h2 = 3.75;
  int k = 4;

  double h() const { return std::sqrt(h2); }

  void validate() const {
    if (!(h2 > 0.0)) throw std::invalid_argument("BandParams: h2 must be > 0");
    if (k < 2 || k > kMaxPathVertices - 1)
      throw std::invalid_argument("BandParams: k out of range");
  }
};

struct PathValue {
  double length = 0.0;
  std::vector<int> ordering;
};

// Scaled distance between tuple vertices i and j:
// sqrt((x_j - x_i)^2 + h^4 (u_j - u_i)^2).
inline double segment_length(const TupleSample& s, const BandParams& p, int i,
                             int j) {
  if (i < 0 || j < 0 || i > s.k || j > s.k)
    throw std::out_of_range("segment_length: index out of range");
  const double dx = s.position(j) - s.position(i);
  const double du = p.h2 * (s.heights[static_cast<std::size_t>(j)] -
                            s.heights[static_cast<std::size_t>(i)]);
  return std::hypot(dx, du);
}

namespace detail {

// Pairwise scaled distances for all tuple vertices; one shared fill serves
// both the full and the skip-one path searches.
inline void fill_scaled_distances(const TupleSample& s, const BandParams& p,
                                  PathWorkspace& ws) {
  const int n = s.k + 1;
  ws.dist.reset(n);
  s.positions_into(ws.x);
  for (int i = 0; i < n; ++i) {
    ws.dist(i, i) = 0.0;
    for (int j = i + 1; j < n; ++j) {
      const double dx = ws.x[static_cast<std::size_t>(j)] -
                        ws.x[static_cast<std::size_t>(i)];
      const double du = p.h2 * (s.heights[static_cast<std::size_t>(j)] -
                                s.heights[static_cast<std::size_t>(i)]);
      const double len = std::hypot(dx, du);
      ws.dist(i, j) = len;
      ws.dist(j, i) = len;
    }
  }
}

inline void fill_vertex_list(int k, int skip, std::vector<int>& out) {
  out.clear();
  for (int v = 0; v <= k; ++v)
    if (v != skip) out.push_back(v);
}

// Full (k-1)! enumeration stays ahead of the DP up to k=7; from k=8 on the
// subset DP wins.
inline bool prefer_dp(int k) { return k >= 8; }

// Length-only minimum path with optional skipped interior vertex (-1: none).
// Expects ws.dist already filled.
inline double min_path_length_filled(int k, int skip, bool use_dp,
                                     PathWorkspace& ws,
                                     std::vector<int>* order = nullptr) {
  thread_local std::vector<int> vertices;
  fill_vertex_list(k, skip, vertices);
  return use_dp ? shortest_path_dp(ws.dist, vertices, order, ws)
                : shortest_path_brute(ws.dist, vertices, order);
}

inline double min_path_length(const TupleSample& s, const BandParams& p,
                              int skip, PathWorkspace& ws) {
  fill_scaled_distances(s, p, ws);
  return min_path_length_filled(s.k, skip, prefer_dp(s.k), ws);
}

inline void check_skip(const TupleSample& s, std::optional<int> skip) {
  if (skip && (*skip < 1 || *skip > s.k - 1))
    throw std::invalid_argument("min_path: skip must be an interior index");
}

}  // namespace detail

// Total scaled length of `ordering`, which must start at 0, end at k, and
// visit any subset of the interior without repeats.
inline double path_length(const TupleSample& s, const BandParams& p,
                          std::span<const int> ordering) {
  if (ordering.size() < 2 || ordering.front() != 0 || ordering.back() != s.k)
    throw std::invalid_argument("path_length: ordering must run 0 -> k");
  std::vector<bool> seen(static_cast<std::size_t>(s.k) + 1, false);
  for (int v : ordering) {
    if (v < 0 || v > s.k)
      throw std::invalid_argument("path_length: vertex out of range");
    if (seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("path_length: repeated vertex");
    seen[static_cast<std::size_t>(v)] = true;
  }
  PathWorkspace& ws = tls_path_workspace();
  detail::fill_scaled_distances(s, p, ws);
  double len = 0.0;
  for (std::size_t i = 0; i + 1 < ordering.size(); ++i)
    len += ws.dist(ordering[i], ordering[i + 1]);
  return len;
}

// Minimum over all fixed-endpoint orderings (all of them, or all that skip
// the given interior vertex). Exhaustive enumeration; ties resolve to the
// lexicographically smallest ordering.
inline PathValue min_path(const TupleSample& s, const BandParams& p,
                          std::optional<int> skip = std::nullopt) {
  detail::check_skip(s, skip);
  PathWorkspace& ws = tls_path_workspace();
  detail::fill_scaled_distances(s, p, ws);
  PathValue out;
  out.length = detail::min_path_length_filled(s.k, skip.value_or(-1),
                                              /*use_dp=*/false, ws,
                                              &out.ordering);
  return out;
}

// Same minimum via Held-Karp subset DP; cross-check oracle for the
// enumeration and the fast path for k >= 8.
inline PathValue min_path_dp(const TupleSample& s, const BandParams& p,
                             std::optional<int> skip = std::nullopt) {
  detail::check_skip(s, skip);
  PathWorkspace& ws = tls_path_workspace();
  detail::fill_scaled_distances(s, p, ws);
  PathValue out;
  out.length = detail::min_path_length_filled(s.k, skip.value_or(-1),
                                              /*use_dp=*/true, ws,
                                              &out.ordering);
  return out;
}

}  // namespace bandtsp
