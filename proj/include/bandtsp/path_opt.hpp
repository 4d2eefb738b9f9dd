#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace bandtsp {

// Subset-DP mask width cap: paths over at most 21 vertices (k <= 20).
inline constexpr int kMaxPathVertices = 21;
// (k-1)! table cap for exhaustive enumeration; beyond this use the DP.
inline constexpr int kMaxBruteForceVertices = 11;

// Dense distance matrix over at most kMaxPathVertices points. Fixed storage
// keeps it allocation-free in the Monte Carlo inner loop.
class DistMatrix {
 public:
  explicit DistMatrix(int n = 0) { reset(n); }

  void reset(int n) {
    if (n < 0 || n > kMaxPathVertices)
      throw std::invalid_argument("DistMatrix: bad size");
    n_ = n;
  }

  int size() const { return n_; }
  double& operator()(int i, int j) { return d_[idx(i, j)]; }
  double operator()(int i, int j) const { return d_[idx(i, j)]; }

 private:
  static std::size_t idx(int i, int j) {
    return static_cast<std::size_t>(i) * kMaxPathVertices +
           static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::array<double, kMaxPathVertices * kMaxPathVertices> d_{};
};

// All visiting orders of {0..k} that start at 0 and end at k, stored flat in
// lexicographic order; exactly (k-1)! of them. Built once per k, then shared
// read-only.
class PermTable {
 public:
  static const PermTable& get(int k) {
    static std::mutex mu;
    static std::map<int, PermTable> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k);
    if (it == cache.end()) it = cache.emplace(k, PermTable(k)).first;
    return it->second;
  }

  int k() const { return k_; }
  std::size_t count() const { return count_; }

  std::span<const std::uint8_t> ordering(std::size_t i) const {
    return {flat_.data() + i * stride(), stride()};
  }

 private:
  explicit PermTable(int k) : k_(k) {
    if (k < 2 || k >= kMaxBruteForceVertices)
      throw std::invalid_argument("PermTable: k out of range");
    std::vector<std::uint8_t> interior(static_cast<std::size_t>(k) - 1);
    std::iota(interior.begin(), interior.end(), std::uint8_t{1});
    do {
      flat_.push_back(0);
      flat_.insert(flat_.end(), interior.begin(), interior.end());
      flat_.push_back(static_cast<std::uint8_t>(k));
      ++count_;
    } while (std::next_permutation(interior.begin(), interior.end()));
  }

  std::size_t stride() const { return static_cast<std::size_t>(k_) + 1; }

  int k_ = 0;
  std::size_t count_ = 0;
  std::vector<std::uint8_t> flat_;
};

// Scratch space shared by the path optimizers; reuse across calls avoids
// per-sample allocation.
struct PathWorkspace {
  DistMatrix dist;
  std::vector<double> x;         // position scratch
  std::vector<double> dp;        // Held-Karp table
  std::vector<std::int32_t> parent;
  std::vector<int> order;        // winning ordering scratch
};

inline PathWorkspace& tls_path_workspace() {
  thread_local PathWorkspace ws;
  return ws;
}

namespace detail {

inline void check_vertices(const DistMatrix& d, std::span<const int> vertices) {
  if (vertices.size() < 2)
    throw std::invalid_argument("path: need at least two vertices");
  for (int v : vertices)
    if (v < 0 || v >= d.size())
      throw std::out_of_range("path: vertex id out of range");
}

}  // namespace detail

// Shortest path visiting every vertex in `vertices`, starting at
// vertices.front() and ending at vertices.back(). Exhaustive search over the
// cached permutation table; ties go to the lexicographically smallest
// ordering. If `order` is non-null the winning sequence (actual vertex ids)
// is written there.
inline double shortest_path_brute(const DistMatrix& d,
                                  std::span<const int> vertices,
                                  std::vector<int>* order = nullptr) {
  detail::check_vertices(d, vertices);
  const int m = static_cast<int>(vertices.size()) - 1;
  if (m == 1) {
    if (order) order->assign(vertices.begin(), vertices.end());
    return d(vertices[0], vertices[1]);
  }
  const PermTable& table = PermTable::get(m);
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < table.count(); ++i) {
    const auto ord = table.ordering(i);
    double len = 0.0;
    for (int e = 0; e < m; ++e)
      len += d(vertices[ord[static_cast<std::size_t>(e)]],
               vertices[ord[static_cast<std::size_t>(e) + 1]]);
    if (len < best) {
      best = len;
      best_i = i;
    }
  }
  if (order) {
    const auto ord = table.ordering(best_i);
    order->resize(ord.size());
    for (std::size_t i = 0; i < ord.size(); ++i)
      (*order)[i] = vertices[ord[i]];
  }
  return best;
}

// Same contract via Held-Karp over the interior vertices; handles up to
// kMaxPathVertices points. Tie resolution is deterministic (first minimum in
// mask/vertex scan order) but may differ from the brute-force lexicographic
// rule on exact ties.
inline double shortest_path_dp(const DistMatrix& d,
                               std::span<const int> vertices,
                               std::vector<int>* order, PathWorkspace& ws) {
  detail::check_vertices(d, vertices);
  const int m = static_cast<int>(vertices.size()) - 1;
  const int ni = m - 1;  // interior count
  if (ni <= 0) {
    if (order) order->assign(vertices.begin(), vertices.end());
    return d(vertices[0], vertices[1]);
  }
  if (ni > kMaxPathVertices - 2)
    throw std::invalid_argument("shortest_path_dp: too many vertices");

  const std::uint32_t full = (1u << ni) - 1u;
  const std::size_t cells = static_cast<std::size_t>(full + 1) * ni;
  constexpr double kInf = std::numeric_limits<double>::infinity();
  ws.dp.assign(cells, kInf);
  if (order) ws.parent.assign(cells, -1);

  const auto at = [&](std::uint32_t mask, int v) -> std::size_t {
    return static_cast<std::size_t>(mask) * ni + static_cast<std::size_t>(v);
  };

  for (int v = 0; v < ni; ++v)
    ws.dp[at(1u << v, v)] = d(vertices[0], vertices[v + 1]);

  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    for (int v = 0; v < ni; ++v) {
      if (!(mask & (1u << v))) continue;
      const double base = ws.dp[at(mask, v)];
      if (base == kInf) continue;
      for (int w = 0; w < ni; ++w) {
        if (mask & (1u << w)) continue;
        const std::uint32_t next = mask | (1u << w);
        const double cand = base + d(vertices[v + 1], vertices[w + 1]);
        if (cand < ws.dp[at(next, w)]) {
          ws.dp[at(next, w)] = cand;
          if (order) ws.parent[at(next, w)] = v;
        }
      }
    }
  }

  double best = kInf;
  int best_v = -1;
  for (int v = 0; v < ni; ++v) {
    const double cand = ws.dp[at(full, v)] + d(vertices[v + 1], vertices[m]);
    if (cand < best) {
      best = cand;
      best_v = v;
    }
  }

  if (order) {
    order->clear();
    order->push_back(vertices[m]);
    std::uint32_t mask = full;
    int v = best_v;
    while (v >= 0) {
      order->push_back(vertices[v + 1]);
      const int prev = ws.parent[at(mask, v)];
      mask &= ~(1u << v);
      v = prev;
    }
    order->push_back(vertices[0]);
    std::reverse(order->begin(), order->end());
  }
  return best;
}

inline double shortest_path_dp(const DistMatrix& d,
                               std::span<const int> vertices,
                               std::vector<int>* order = nullptr) {
  return shortest_path_dp(d, vertices, order, tls_path_workspace());
}

}  // namespace bandtsp
