#include "hamexp/generators.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "hamexp/error.hpp"
#include "hamexp/matching.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

namespace {

long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

long long colex_rank(const std::vector<int>& subset) {
  long long r = 0;
  for (size_t i = 0; i < subset.size(); ++i) r += binom(subset[i], static_cast<int>(i) + 1);
  return r;
}

}  // namespace

std::vector<int> kneser_unrank(int n, int k, long long rank) {
  std::vector<int> out(k);
  long long r = rank;
  for (int i = k; i >= 1; --i) {
    int c = i - 1;
    while (c + 1 < n && binom(c + 1, i) <= r) ++c;
    out[i - 1] = c;
    r -= binom(c, i);
  }
  return out;
}

Graph kneser(int n, int k) {
  if (k < 1 || n <= 2 * k) throw InputError("kneser: need n > 2k >= 2");
  long long N = binom(n, k);
  if (N > 1000000) throw InputError("kneser: vertex count cap (1e6) exceeded");

  std::vector<std::pair<int, int>> edges;
  std::vector<int> comp;
  std::vector<int> pickbuf(k);
  for (long long r = 0; r < N; ++r) {
    std::vector<int> S = kneser_unrank(n, k, r);
    std::vector<uint8_t> in_s(n, 0);
    for (int e : S) in_s[e] = 1;
    comp.clear();
    for (int e = 0; e < n; ++e)
      if (!in_s[e]) comp.push_back(e);
    // all k-subsets of the complement
    auto rec = [&](auto&& self, int start, int depth) -> void {
      if (depth == k) {
        long long r2 = colex_rank(pickbuf);
        if (r2 > r) edges.emplace_back(static_cast<int>(r), static_cast<int>(r2));
        return;
      }
      for (int i = start; i < static_cast<int>(comp.size()); ++i) {
        pickbuf[depth] = comp[i];
        self(self, i + 1, depth + 1);
      }
    };
    rec(rec, 0, 0);
  }
  return Graph::from_edges(static_cast<int>(N), edges);
}

Graph cayley_abelian(const std::vector<int>& orders, const std::vector<std::vector<int>>& gens) {
  if (orders.empty()) throw InputError("cayley_abelian: no cyclic factors");
  long long size = 1;
  for (int o : orders) {
    if (o < 1) throw InputError("cayley_abelian: orders must be >= 1");
    size *= o;
    if (size > 1000000) throw InputError("cayley_abelian: group size cap (1e6) exceeded");
  }
  const int r = static_cast<int>(orders.size());
  auto normalize = [&](std::vector<int> t) {
    for (int i = 0; i < r; ++i) t[i] = ((t[i] % orders[i]) + orders[i]) % orders[i];
    return t;
  };
  auto is_identity = [&](const std::vector<int>& t) {
    return std::all_of(t.begin(), t.end(), [](int x) { return x == 0; });
  };

  std::vector<std::vector<int>> S;
  for (auto raw : gens) {
    if (static_cast<int>(raw.size()) != r)
      throw InputError("cayley_abelian: generator arity mismatch");
    S.push_back(normalize(std::move(raw)));
  }
  std::sort(S.begin(), S.end());
  if (std::adjacent_find(S.begin(), S.end()) != S.end())
    throw InputError("cayley_abelian: duplicate generator");
  for (const auto& s : S) {
    if (is_identity(s)) throw InputError("cayley_abelian: identity in the generator set");
    std::vector<int> inv(r);
    for (int i = 0; i < r; ++i) inv[i] = (orders[i] - s[i]) % orders[i];
    if (!std::binary_search(S.begin(), S.end(), inv))
      throw InputError("cayley_abelian: generator set not symmetric");
  }

  auto index_of = [&](const std::vector<int>& t) {
    long long idx = 0;
    for (int i = 0; i < r; ++i) idx = idx * orders[i] + t[i];
    return static_cast<int>(idx);
  };
  std::vector<std::pair<int, int>> edges;
  std::vector<int> elem(r, 0);
  for (long long g = 0; g < size; ++g) {
    for (const auto& s : S) {
      std::vector<int> h(r);
      for (int i = 0; i < r; ++i) h[i] = (elem[i] + s[i]) % orders[i];
      int hv = index_of(h);
      if (static_cast<int>(g) < hv) edges.emplace_back(static_cast<int>(g), hv);
    }
    // increment mixed-radix counter
    for (int i = r - 1; i >= 0; --i) {
      if (++elem[i] < orders[i]) break;
      elem[i] = 0;
    }
  }
  return Graph::from_edges(static_cast<int>(size), edges);
}

Graph percolate(const Graph& g, double p, uint64_t seed) {
  if (p < 0.0 || p > 1.0) throw InputError("percolate: p in [0, 1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> kept;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.neighbors_of(u))
      if (u < v && rng.bernoulli(p)) kept.emplace_back(u, v);
  return Graph::from_edges(g.n, kept);
}

namespace {

Graph stubs_to_simple(int n, std::vector<int> stubs, bool bipartite_right_half, uint64_t seed) {
  // pair consecutive stubs, then repair loops/duplicates by random switches
  Rng rng(seed);
  const int restarts = 32;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng round = rng.child(attempt);
    std::vector<int> s(stubs);
    if (bipartite_right_half) {
      // stubs = left stubs followed by right stubs of equal count
      size_t half = s.size() / 2;
      std::vector<int> right(s.begin() + half, s.end());
      round.shuffle(right);
      std::copy(right.begin(), right.end(), s.begin() + half);
      // interleave: edge i = (left[i], right[i])
      std::vector<int> paired;
      paired.reserve(s.size());
      for (size_t i = 0; i < half; ++i) {
        paired.push_back(s[i]);
        paired.push_back(s[half + i]);
      }
      s = std::move(paired);
    } else {
      round.shuffle(s);
    }
    const size_t m = s.size() / 2;
    auto key = [n](int a, int b) {
      if (a > b) std::swap(a, b);
      return static_cast<long long>(a) * n + b;
    };
    std::unordered_multiset<long long> edge_set;
    edge_set.reserve(2 * m);
    for (size_t i = 0; i < m; ++i) edge_set.insert(key(s[2 * i], s[2 * i + 1]));
    auto is_bad = [&](size_t i) {
      int a = s[2 * i], b = s[2 * i + 1];
      return a == b || edge_set.count(key(a, b)) > 1;
    };
    // passes: rescan for bad pairs, then repair each with random switches.
    // A switch never creates a new loop or duplicate, so passes shrink.
    bool clean = false;
    for (int pass = 0; pass < 64 && !clean; ++pass) {
      std::vector<size_t> bad;
      for (size_t i = 0; i < m; ++i)
        if (is_bad(i)) bad.push_back(i);
      if (bad.empty()) {
        clean = true;
        break;
      }
      for (size_t i : bad) {
        if (!is_bad(i)) continue;  // an earlier repair may have fixed it
        for (int tries = 0; tries < 200; ++tries) {
          size_t j = round.uniform(m);
          if (i == j) continue;
          // switch second endpoints of pairs i and j (respects sides in the
          // bipartite layout where odd positions hold right stubs)
          int a = s[2 * i], b = s[2 * i + 1];
          int c = s[2 * j], d = s[2 * j + 1];
          if (a == d || c == b) continue;
          long long kab = key(a, b), kcd = key(c, d), kad = key(a, d), kcb = key(c, b);
          if (kad == kcb || edge_set.count(kad) >= 1 || edge_set.count(kcb) >= 1) continue;
          edge_set.erase(edge_set.find(kab));
          edge_set.erase(edge_set.find(kcd));
          edge_set.insert(kad);
          edge_set.insert(kcb);
          std::swap(s[2 * i + 1], s[2 * j + 1]);
          break;
        }
      }
    }
    {
      std::vector<size_t> bad;
      for (size_t i = 0; i < m; ++i)
        if (is_bad(i)) bad.push_back(i);
      clean = bad.empty();
    }
    if (clean) {
      std::vector<std::pair<int, int>> edges;
      edges.reserve(m);
      for (size_t i = 0; i < m; ++i) edges.emplace_back(s[2 * i], s[2 * i + 1]);
      return Graph::from_edges(n, edges);
    }
  }
  throw ComputeError("random_regular: switch repair exhausted its budget");
}

}  // namespace

Graph random_regular(int n, int d, uint64_t seed) {
  if (n < 1 || d < 0 || d >= n) throw InputError("random_regular: need 0 <= d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw InputError("random_regular: n*d must be even");
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  return stubs_to_simple(n, std::move(stubs), false, seed);
}

Graph random_regular_bipartite(int n, int d, uint64_t seed) {
  if (n < 2 || n % 2 != 0) throw InputError("random_regular_bipartite: n must be even");
  if (d < 0 || d > n / 2) throw InputError("random_regular_bipartite: need 0 <= d <= n/2");
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n / 2; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  for (int v = n / 2; v < n; ++v)
    for (int i = 0; i < d; ++i) stubs.push_back(v);
  return stubs_to_simple(n, std::move(stubs), true, seed);
}

Graph cycle_graph(int n) {
  if (n < 3) throw InputError("cycle_graph: n >= 3");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v < n; ++v) edges.emplace_back(std::min(v, (v + 1) % n), std::max(v, (v + 1) % n));
  return Graph::from_edges(n, edges);
}

Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  return Graph::from_edges(n, edges);
}

Graph path_graph(int n) {
  if (n < 1) throw InputError("path_graph: n >= 1");
  std::vector<std::pair<int, int>> edges;
  for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph::from_edges(n, edges);
}

Graph petersen() { return kneser(5, 2); }

namespace {

// Euler tour of a connected multigraph with all degrees even (Hierholzer).
// Nodes are ids in [0, k); edges given explicitly; returns the node sequence.
std::vector<int> euler_tour(int k, const std::vector<std::pair<int, int>>& medges) {
  std::vector<std::vector<std::pair<int, int>>> adj(k);  // (neighbor, edge id)
  for (size_t e = 0; e < medges.size(); ++e) {
    auto [u, v] = medges[e];
    adj[u].emplace_back(v, static_cast<int>(e));
    adj[v].emplace_back(u, static_cast<int>(e));
  }
  std::vector<uint8_t> used(medges.size(), 0);
  std::vector<size_t> it(k, 0);
  std::vector<int> stack = {medges.empty() ? 0 : medges[0].first};
  std::vector<int> tour;
  while (!stack.empty()) {
    int v = stack.back();
    while (it[v] < adj[v].size() && used[adj[v][it[v]].second]) ++it[v];
    if (it[v] == adj[v].size()) {
      tour.push_back(v);
      stack.pop_back();
    } else {
      auto [u, e] = adj[v][it[v]];
      used[e] = 1;
      stack.push_back(u);
    }
  }
  std::reverse(tour.begin(), tour.end());
  return tour;
}

}  // namespace

CosetGlueResult coset_euler_glue(const Graph& g, const std::vector<int>& coset_of,
                                 double s_threshold, uint64_t seed) {
  if (static_cast<int>(coset_of.size()) != g.n)
    throw InputError("coset_euler_glue: coset_of size mismatch");
  const int k = coset_of.empty() ? 0 : *std::max_element(coset_of.begin(), coset_of.end()) + 1;
  if (k < 1) throw InputError("coset_euler_glue: no cosets");
  std::vector<std::vector<int>> cosets(k);
  for (int v = 0; v < g.n; ++v) {
    if (coset_of[v] < 0) throw InputError("coset_euler_glue: negative coset id");
    cosets[coset_of[v]].push_back(v);
  }

  CosetGlueResult out;
  out.per_coset_pairs.resize(k);

  if (k == 1) {
    // single coset: the caller runs the m=1 edge case directly
    return out;
  }

  // auxiliary graph F: matchings between coset pairs
  std::vector<std::vector<std::pair<int, int>>> pool(k * k);  // matched host edges per (i, j)
  std::vector<std::pair<int, int>> f_edges;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      std::vector<int> rid(g.n, -1);
      for (size_t t = 0; t < cosets[j].size(); ++t) rid[cosets[j][t]] = static_cast<int>(t);
      std::vector<std::vector<int>> adj(cosets[i].size());
      bool any = false;
      for (size_t a = 0; a < cosets[i].size(); ++a)
        for (int u : g.neighbors_of(cosets[i][a]))
          if (rid[u] >= 0) {
            adj[a].push_back(rid[u]);
            any = true;
          }
      if (!any) continue;
      BipartiteMatching m =
          hopcroft_karp(static_cast<int>(cosets[i].size()), static_cast<int>(cosets[j].size()), adj);
      if (m.size >= s_threshold && m.size >= 1) {
        f_edges.emplace_back(i, j);
        auto& edges_ij = pool[i * k + j];
        for (size_t a = 0; a < cosets[i].size(); ++a)
          if (m.match_left[a] >= 0)
            edges_ij.emplace_back(cosets[i][a], cosets[j][m.match_left[a]]);
      }
    }
  }

  // connectivity of F
  {
    std::vector<std::vector<int>> fadj(k);
    for (auto [i, j] : f_edges) {
      fadj[i].push_back(j);
      fadj[j].push_back(i);
    }
    std::vector<uint8_t> seen(k, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : fadj[v])
        if (!seen[u]) {
          seen[u] = 1;
          ++cnt;
          stack.push_back(u);
        }
    }
    if (cnt != k) {
      std::string witness = "coset_euler_glue: auxiliary graph disconnected; component {";
      for (int i = 0; i < k; ++i)
        if (seen[i]) witness += " " + std::to_string(i);
      witness += " } has no heavy matching to the rest";
      throw ComputeError(witness);
    }
  }

  // spanning tree of F, doubled
  std::vector<std::vector<int>> fadj(k);
  for (auto [i, j] : f_edges) {
    fadj[i].push_back(j);
    fadj[j].push_back(i);
  }
  std::vector<int> parent(k, -1);
  std::vector<uint8_t> seen(k, 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (int u : fadj[v])
      if (!seen[u]) {
        seen[u] = 1;
        parent[u] = v;
        out.tree_edges.emplace_back(v, u);
        stack.push_back(u);
      }
  }
  std::vector<std::pair<int, int>> doubled;
  for (auto e : out.tree_edges) {
    doubled.push_back(e);
    doubled.push_back(e);
  }
  out.tour = euler_tour(k, doubled);

  // greedy matching selection along the tour
  Rng rng(seed);
  const int ell = static_cast<int>(out.tour.size()) - 1;
  std::vector<uint8_t> used(g.n, 0);
  out.matching.resize(ell);
  for (int t = 1; t <= ell; ++t) {
    int i = out.tour[t - 1], j = out.tour[t];
    auto& edges_ij = pool[std::min(i, j) * k + std::max(i, j)];
    bool oriented = i <= j;
    int found = -1;
    std::vector<int> idx(edges_ij.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    for (int c : idx) {
      auto [u, v] = edges_ij[c];
      if (!used[u] && !used[v]) {
        found = c;
        break;
      }
    }
    if (found < 0) throw ComputeError("coset_euler_glue: matching selection failed on tour step " +
                                      std::to_string(t));
    auto [u, v] = edges_ij[found];
    used[u] = used[v] = 1;
    out.matching[t - 1] = oriented ? std::make_pair(u, v) : std::make_pair(v, u);
  }

  // per-coset endpoint pairs: incoming phi(e_t), outgoing phi(e_{t+1})
  auto coset_end = [&](int t, int coset) {
    // matching edge of tour step t (1-based), endpoint inside `coset`
    auto [u, v] = out.matching[t - 1];
    return coset_of[u] == coset ? u : v;
  };
  for (int t = 1; t <= ell; ++t) {
    int i = out.tour[t];
    int t_next = (t == ell) ? 1 : t + 1;
    int a = coset_end(t, i);
    int b = coset_end(t_next, i);
    out.per_coset_pairs[i].emplace_back(a, b);
  }
  return out;
}

CosetGlueResult coset_euler_glue_bipartite(const Graph& g, const std::vector<int>& coset_of,
                                           const std::vector<int>& side_of, double s_threshold,
                                           uint64_t seed) {
  if (static_cast<int>(coset_of.size()) != g.n || static_cast<int>(side_of.size()) != g.n)
    throw InputError("coset_euler_glue_bipartite: vector size mismatch");
  const int k = *std::max_element(coset_of.begin(), coset_of.end()) + 1;
  // F nodes: 2i = A_i, 2i+1 = B_i
  std::vector<int> node_of(g.n);
  for (int v = 0; v < g.n; ++v) {
    if (side_of[v] != 0 && side_of[v] != 1)
      throw InputError("coset_euler_glue_bipartite: side_of entries must be 0/1");
    node_of[v] = 2 * coset_of[v] + side_of[v];
  }
  const int nodes = 2 * k;
  std::vector<std::vector<int>> members(nodes);
  for (int v = 0; v < g.n; ++v) members[node_of[v]].push_back(v);

  CosetGlueResult out;
  out.per_coset_pairs.resize(k);

  std::vector<std::vector<std::pair<int, int>>> pool(nodes * nodes);
  std::vector<std::pair<int, int>> f_edges;
  for (int i = 0; i < nodes; ++i) {
    for (int j = i + 1; j < nodes; ++j) {
      std::vector<int> rid(g.n, -1);
      for (size_t t = 0; t < members[j].size(); ++t) rid[members[j][t]] = static_cast<int>(t);
      std::vector<std::vector<int>> adj(members[i].size());
      bool any = false;
      for (size_t a = 0; a < members[i].size(); ++a)
        for (int u : g.neighbors_of(members[i][a]))
          if (rid[u] >= 0) {
            adj[a].push_back(rid[u]);
            any = true;
          }
      if (!any) continue;
      BipartiteMatching m =
          hopcroft_karp(static_cast<int>(members[i].size()), static_cast<int>(members[j].size()), adj);
      if (m.size >= s_threshold && m.size >= 1) {
        f_edges.emplace_back(i, j);
        auto& edges_ij = pool[i * nodes + j];
        for (size_t a = 0; a < members[i].size(); ++a)
          if (m.match_left[a] >= 0) edges_ij.emplace_back(members[i][a], members[j][m.match_left[a]]);
      }
    }
  }

  {
    std::vector<std::vector<int>> fadj(nodes);
    for (auto [i, j] : f_edges) {
      fadj[i].push_back(j);
      fadj[j].push_back(i);
    }
    std::vector<uint8_t> seen(nodes, 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    int cnt = 1;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : fadj[v])
        if (!seen[u]) {
          seen[u] = 1;
          ++cnt;
          stack.push_back(u);
        }
    }
    if (cnt != nodes)
      throw ComputeError("coset_euler_glue_bipartite: auxiliary graph disconnected");
  }

  out.tree_edges = f_edges;  // case 2 doubles all of F, not a spanning tree
  std::vector<std::pair<int, int>> doubled;
  for (auto e : f_edges) {
    doubled.push_back(e);
    doubled.push_back(e);
  }
  out.tour = euler_tour(nodes, doubled);

  Rng rng(seed);
  const int ell = static_cast<int>(out.tour.size()) - 1;
  std::vector<uint8_t> used(g.n, 0);
  out.matching.resize(ell);
  for (int t = 1; t <= ell; ++t) {
    int i = out.tour[t - 1], j = out.tour[t];
    auto& edges_ij = pool[std::min(i, j) * nodes + std::max(i, j)];
    int found = -1;
    std::vector<int> idx(edges_ij.size());
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    for (int c : idx) {
      auto [u, v] = edges_ij[c];
      if (!used[u] && !used[v]) {
        found = c;
        break;
      }
    }
    if (found < 0)
      throw ComputeError("coset_euler_glue_bipartite: matching selection failed");
    auto [u, v] = edges_ij[found];
    used[u] = used[v] = 1;
    out.matching[t - 1] = (i <= j) ? std::make_pair(u, v) : std::make_pair(v, u);
  }

  // four pairs per visit, mediated by fresh vertices on the opposite side
  auto node_end = [&](int t, int node) {
    auto [u, v] = out.matching[t - 1];
    return node_of[u] == node ? u : v;
  };
  for (int t = 1; t <= ell; ++t) {
    int node = out.tour[t];
    int coset = node / 2;
    int t_next = (t == ell) ? 1 : t + 1;
    int v = node_end(t, node);
    int w = node_end(t_next, node);
    // mediator on the opposite side of the same coset, unused by M or earlier mediators
    int other = node ^ 1;
    int z = -1;
    for (int cand : members[other])
      if (!used[cand]) {
        z = cand;
        break;
      }
    if (z < 0) throw ComputeError("coset_euler_glue_bipartite: no free mediator vertex");
    used[z] = 1;
    // orient pairs (A-side, B-side)
    auto orient = [&](int a, int b) {
      return side_of[a] == 0 ? std::make_pair(a, b) : std::make_pair(b, a);
    };
    out.per_coset_pairs[coset].push_back(orient(v, z));
    out.per_coset_pairs[coset].push_back(orient(w, z));
  }
  return out;
}

}  // namespace hamexp
