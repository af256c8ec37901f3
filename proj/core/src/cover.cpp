#include "hamexp/cover.hpp"

#include <algorithm>
#include <numeric>

#include "hamexp/error.hpp"
#include "hamexp/matching.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

std::vector<int> LinearForest::covered() const {
  std::vector<int> out;
  for (const auto& p : paths) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<int, int>> LinearForest::endpoints() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(paths.size());
  for (const auto& p : paths) out.emplace_back(p.front(), p.back());
  return out;
}

LinearForest linear_forest(const Graph& g, const std::vector<int>& V, int t, uint64_t seed,
                           ForestReport* report) {
  if (t < 2) throw InputError("linear_forest: t must be >= 2");
  for (int v : V)
    if (v < 0 || v >= g.n) throw InputError("linear_forest: vertex out of range");

  Rng rng(seed);
  std::vector<int> shuffled(V);
  rng.shuffle(shuffled);

  // equal-size parts (±1)
  std::vector<int> part_of(g.n, -1);
  std::vector<std::vector<int>> parts(t);
  for (size_t i = 0; i < shuffled.size(); ++i) {
    int p = static_cast<int>(i % t);
    parts[p].push_back(shuffled[i]);
    part_of[shuffled[i]] = p;
  }

  // forest adjacency: at most one matching edge to the previous and next part
  std::vector<int> up(g.n, -1), down(g.n, -1);
  for (int j = 0; j + 1 < t; ++j) {
    const auto& L = parts[j];
    const auto& R = parts[j + 1];
    std::vector<int> rindex(g.n, -1);
    for (size_t i = 0; i < R.size(); ++i) rindex[R[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> adj(L.size());
    for (size_t i = 0; i < L.size(); ++i)
      for (int u : g.neighbors_of(L[i]))
        if (rindex[u] >= 0) adj[i].push_back(rindex[u]);
    BipartiteMatching m = hopcroft_karp(static_cast<int>(L.size()), static_cast<int>(R.size()), adj);
    for (size_t i = 0; i < L.size(); ++i)
      if (m.match_left[i] >= 0) {
        up[L[i]] = R[m.match_left[i]];
        down[R[m.match_left[i]]] = L[i];
      }
  }

  LinearForest forest;
  std::vector<uint8_t> used(g.n, 0);
  for (int v : V) {
    if (used[v]) continue;
    if (up[v] == -1 && down[v] == -1) {
      used[v] = 1;
      forest.paths.push_back({v});
      continue;
    }
    if (down[v] != -1) continue;  // not a low end
    std::vector<int> path;
    for (int cur = v; cur != -1; cur = up[cur]) {
      path.push_back(cur);
      used[cur] = 1;
    }
    forest.paths.push_back(std::move(path));
  }

  if (report) {
    report->parts = t;
    std::vector<uint8_t> low(g.n, 0);
    for (const auto& p : forest.paths) {
      low[p.front()] = 1;
      low[p.back()] = 1;
    }
    report->low_degree_count = 0;
    for (int v : V)
      if (low[v]) ++report->low_degree_count;
    int worst = 0;
    for (int v = 0; v < g.n; ++v) {
      int c = 0;
      for (int u : g.neighbors_of(v))
        if (low[u]) ++c;
      worst = std::max(worst, c);
    }
    report->max_neighbourhood_leftover = worst;
  }
  return forest;
}

LinearForest large_linear_forest(const Graph& g, int Delta) {
  if (Delta < 1) throw InputError("large_linear_forest: Delta must be >= 1");
  if (g.d_max > Delta) throw InputError("large_linear_forest: graph exceeds the declared Delta");
  LinearForest forest;
  std::vector<uint8_t> dead(g.n, 0);
  std::vector<uint8_t> on_path(g.n, 0);

  auto live_neighbor = [&](int v) {
    for (int u : g.neighbors_of(v))
      if (!dead[u] && !on_path[u]) return u;
    return -1;
  };

  for (int start = 0; start < g.n; ++start) {
    if (dead[start]) continue;
    bool has_live_edge = false;
    for (int u : g.neighbors_of(start))
      if (!dead[u]) {
        has_live_edge = true;
        break;
      }
    if (!has_live_edge) continue;

    std::vector<int> path = {start};
    on_path[start] = 1;
    // extend the head, then the tail, to a maximal path
    for (;;) {
      int nxt = live_neighbor(path.back());
      if (nxt == -1) break;
      path.push_back(nxt);
      on_path[nxt] = 1;
    }
    std::reverse(path.begin(), path.end());
    for (;;) {
      int nxt = live_neighbor(path.back());
      if (nxt == -1) break;
      path.push_back(nxt);
      on_path[nxt] = 1;
    }
    for (int v : path) {
      on_path[v] = 0;
      dead[v] = 1;
    }
    forest.paths.push_back(std::move(path));
  }
  return forest;
}

MaxCutResult max_cut_local_search(const Graph& g, uint64_t seed) {
  Rng rng(seed);
  std::vector<uint8_t> s(g.n, 0);
  if (g.bipartite) {
    for (int v = 0; v < g.n; ++v) s[v] = g.side[v];
  } else {
    for (int v = 0; v < g.n; ++v) s[v] = static_cast<uint8_t>(rng.uniform(2));
  }
  std::vector<int> cross(g.n, 0);
  for (int v = 0; v < g.n; ++v)
    for (int u : g.neighbors_of(v))
      if (s[u] != s[v]) ++cross[v];

  long long flips = 0;
  const long long cap = 50LL * std::max(1, g.n);
  std::vector<int> best_list;
  while (flips < cap) {
    int best_gain = 0;
    best_list.clear();
    for (int v = 0; v < g.n; ++v) {
      int gain = (g.degree(v) - cross[v]) - cross[v];  // inside - cross
      if (gain > best_gain) {
        best_gain = gain;
        best_list.assign(1, v);
      } else if (gain == best_gain && gain > 0) {
        best_list.push_back(v);
      }
    }
    if (best_gain <= 0) break;
    int v = best_list[rng.uniform(best_list.size())];
    s[v] ^= 1;
    ++flips;
    cross[v] = g.degree(v) - cross[v];
    for (int u : g.neighbors_of(v)) cross[u] += (s[u] != s[v]) ? 1 : -1;
  }

  MaxCutResult res;
  long long cut = 0;
  for (int v = 0; v < g.n; ++v) {
    cut += cross[v];
    (s[v] == 0 ? res.a_side : res.b_side).push_back(v);
  }
  res.cut_edges = cut / 2;
  return res;
}

LinearForest clean_up_forest(const Graph& g, const std::vector<int>& A, const std::vector<int>& B,
                             const std::vector<int>& X, uint64_t seed) {
  if (g.d_min != g.d_max) throw InputError("clean_up_forest: host must be regular");
  const int d = g.d_max;
  if (A.size() > B.size()) throw InputError("clean_up_forest: |A| <= |B| required");
  if (A.size() + B.size() != static_cast<size_t>(g.n))
    throw InputError("clean_up_forest: (A, B) must partition the vertices");

  std::vector<int> side_of(g.n, -1);
  for (int v : A) side_of[v] = 0;
  for (int v : B) {
    if (side_of[v] != -1) throw InputError("clean_up_forest: A and B overlap");
    side_of[v] = 1;
  }
  for (int v = 0; v < g.n; ++v) {
    int inside = 0;
    for (int u : g.neighbors_of(v))
      if (side_of[u] == side_of[v]) ++inside;
    if (2 * inside > d) throw InputError("clean_up_forest: inside-degree above d/2");
  }
  const long long imbalance = static_cast<long long>(B.size()) - static_cast<long long>(A.size());
  if (static_cast<long long>(X.size()) + imbalance > d / 10)
    throw InputError("clean_up_forest: |X| + |B| - |A| exceeds d/10");

  Rng rng(seed);
  std::vector<uint8_t> in_f(g.n, 0);

  // linear forest inside B with exactly |B| - |A| edges
  LinearForest fb;
  if (imbalance > 0) {
    auto [gb, to_host] = induced_subgraph(g, B);
    LinearForest raw = large_linear_forest(gb, std::max(1, d / 2));
    long long need = imbalance;
    for (const auto& p : raw.paths) {
      if (need <= 0) break;
      long long take = std::min<long long>(need, static_cast<long long>(p.size()) - 1);
      std::vector<int> hostp;
      for (long long i = 0; i <= take; ++i) hostp.push_back(to_host[p[i]]);
      need -= take;
      fb.paths.push_back(std::move(hostp));
    }
    if (need > 0) throw ComputeError("clean_up_forest: not enough B-side forest edges");
  }

  LinearForest forest;
  for (auto& p : fb.paths) {
    // extend by one fresh A-vertex at the back
    int back = p.back();
    std::vector<int> candidates;
    for (int u : g.neighbors_of(back))
      if (side_of[u] == 0 && !in_f[u]) candidates.push_back(u);
    // mark current path first so candidates exclude it
    for (int v : p) in_f[v] = 1;
    candidates.erase(std::remove_if(candidates.begin(), candidates.end(),
                                    [&](int u) { return in_f[u]; }),
                     candidates.end());
    if (candidates.empty()) throw ComputeError("clean_up_forest: no free A-extension");
    int a = candidates[rng.uniform(candidates.size())];
    p.push_back(a);
    in_f[a] = 1;
    forest.paths.push_back(std::move(p));
  }

  auto path_index_of = [&](int v) -> std::pair<int, bool> {
    for (size_t i = 0; i < forest.paths.size(); ++i) {
      const auto& p = forest.paths[i];
      if (p.front() == v) return {static_cast<int>(i), true};
      if (p.back() == v) return {static_cast<int>(i), true};
      if (std::find(p.begin(), p.end(), v) != p.end()) return {static_cast<int>(i), false};
    }
    return {-1, false};
  };

  auto fresh_neighbors = [&](int v, int want_side) {
    std::vector<int> out;
    for (int u : g.neighbors_of(v))
      if (side_of[u] == want_side && !in_f[u]) out.push_back(u);
    return out;
  };

  for (int v : X) {
    if (side_of[v] == -1) throw InputError("clean_up_forest: X vertex outside A and B");
    auto [idx, is_endpoint] = path_index_of(v);
    if (idx >= 0 && !is_endpoint) continue;  // already interior
    if (idx >= 0 && is_endpoint) {
      auto& p = forest.paths[idx];
      if (p.front() == v) std::reverse(p.begin(), p.end());
      auto us = fresh_neighbors(v, 1 - side_of[v]);
      if (us.empty()) throw ComputeError("clean_up_forest: X-extension blocked");
      int u = us[rng.uniform(us.size())];
      auto vs = fresh_neighbors(u, side_of[v]);
      vs.erase(std::remove(vs.begin(), vs.end(), v), vs.end());
      if (vs.empty()) throw ComputeError("clean_up_forest: X-extension blocked");
      int v2 = vs[rng.uniform(vs.size())];
      p.push_back(u);
      p.push_back(v2);
      in_f[u] = in_f[v2] = 1;
    } else {
      // fresh path v1, v, v3, v4 alternating sides
      auto v1s = fresh_neighbors(v, 1 - side_of[v]);
      if (v1s.empty()) throw ComputeError("clean_up_forest: X-path blocked");
      int v1 = v1s[rng.uniform(v1s.size())];
      auto v3s = fresh_neighbors(v, 1 - side_of[v]);
      v3s.erase(std::remove(v3s.begin(), v3s.end(), v1), v3s.end());
      if (v3s.empty()) throw ComputeError("clean_up_forest: X-path blocked");
      int v3 = v3s[rng.uniform(v3s.size())];
      in_f[v] = in_f[v1] = in_f[v3] = 1;
      auto v4s = fresh_neighbors(v3, side_of[v]);
      if (v4s.empty()) throw ComputeError("clean_up_forest: X-path blocked");
      int v4 = v4s[rng.uniform(v4s.size())];
      in_f[v4] = 1;
      forest.paths.push_back({v1, v, v3, v4});
    }
  }

  // hard postconditions
  std::vector<uint8_t> interior(g.n, 0), in_forest(g.n, 0);
  long long fsize = 0;
  for (const auto& p : forest.paths) {
    if ((side_of[p.front()] == side_of[p.back()]))
      throw InvariantError("clean_up_forest: path endpoints on the same side");
    fsize += static_cast<long long>(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
      in_forest[p[i]] = 1;
      if (i > 0 && i + 1 < p.size()) interior[p[i]] = 1;
    }
  }
  if (fsize > 4 * (static_cast<long long>(X.size()) + imbalance))
    throw InvariantError("clean_up_forest: size bound violated");
  for (int v : X)
    if (!interior[v]) throw InvariantError("clean_up_forest: X vertex not interior");
  long long a_free = 0, b_free = 0;
  for (int v : A)
    if (!interior[v]) ++a_free;
  for (int v : B)
    if (!interior[v]) ++b_free;
  if (a_free != b_free) throw InvariantError("clean_up_forest: uncovered sides differ");

  return forest;
}

}  // namespace hamexp
