#pragma once
#include <algorithm>
#include <map>
#include <vector>

#include "hamexp/graph.hpp"
#include "hamexp/rng.hpp"

namespace hamexp::testing {

// Erdos-Renyi-ish random graph with a retry until connected (small n only).
inline Graph random_connected_graph(int n, double p, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<std::pair<int, int>> edges;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (rng.bernoulli(p)) edges.emplace_back(u, v);
    Graph g = Graph::from_edges(n, edges);
    if (g.connected() && g.d_min >= 1) return g;
  }
  // fall back to a path plus whatever came last
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

// Independent brute-force enumerator for the expansion certificate: plain
// recursive subset enumeration, cut counted from scratch.
struct BruteExpander {
  double rho = 0.0;
  std::vector<int> worst;
};

inline BruteExpander brute_force_expansion(const Graph& g) {
  BruteExpander best;
  best.rho = 1e100;
  const int limit = 2 * g.n / 3;
  std::vector<int> subset;
  auto cut_of = [&]() {
    std::vector<uint8_t> in(g.n, 0);
    for (int v : subset) in[v] = 1;
    long long cut = 0;
    for (int v : subset)
      for (int u : g.neighbors_of(v))
        if (!in[u]) ++cut;
    return cut;
  };
  auto rec = [&](auto&& self, int next) -> void {
    if (!subset.empty() && static_cast<int>(subset.size()) <= limit) {
      double ratio = static_cast<double>(cut_of()) /
                     (g.d_avg * static_cast<double>(subset.size()));
      if (ratio < best.rho) {
        best.rho = ratio;
        best.worst = subset;
      }
    }
    if (next == g.n || static_cast<int>(subset.size()) >= limit) return;
    for (int v = next; v < g.n; ++v) {
      subset.push_back(v);
      self(self, v + 1);
      subset.pop_back();
    }
  };
  rec(rec, 0);
  return best;
}

// Exhaustive maxcut by direct bipartition enumeration.
inline long long brute_force_maxcut(const Graph& g) {
  long long best = 0;
  for (uint32_t mask = 0; mask < (1u << (g.n - 1)); ++mask) {
    long long cut = 0;
    for (int v = 0; v < g.n; ++v) {
      bool sv = v < g.n - 1 && (mask >> v & 1u);
      for (int u : g.neighbors_of(v)) {
        if (u < v) continue;
        bool su = u < g.n - 1 && (mask >> u & 1u);
        if (sv != su) ++cut;
      }
    }
    best = std::max(best, cut);
  }
  return best;
}

// All simple paths of length <= depth from any vertex of U staying inside V
// (internals), used as the independent oracle for ball().
inline std::vector<int> brute_force_ball(const Graph& g, const std::vector<int>& U,
                                         const std::vector<int>& V, int depth,
                                         const std::vector<std::pair<int, int>>& F) {
  std::vector<uint8_t> in_v(g.n, 0);
  for (int v : V) in_v[v] = 1;
  auto banned = [&](int a, int b) {
    for (auto [x, y] : F)
      if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
  };
  std::vector<uint8_t> out(g.n, 0);
  std::vector<uint8_t> on_path(g.n, 0);
  auto rec = [&](auto&& self, int cur, int left) -> void {
    if (left == 0) return;
    for (int u : g.neighbors_of(cur)) {
      if (on_path[u] || banned(cur, u) || !in_v[u]) continue;
      out[u] = 1;
      on_path[u] = 1;
      self(self, u, left - 1);
      on_path[u] = 0;
    }
  };
  for (int u : U) {
    if (in_v[u]) out[u] = 1;
    on_path[u] = 1;
    rec(rec, u, depth);
    on_path[u] = 0;
  }
  std::vector<int> result;
  for (int v = 0; v < g.n; ++v)
    if (out[v]) result.push_back(v);
  return result;
}

}  // namespace hamexp::testing
