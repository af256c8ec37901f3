#include "hamexp/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>

#include "hamexp/error.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

Reservoir sample_reservoir(const Graph& g, double p, const std::vector<int>& avoid, uint64_t seed,
                           double rho) {
  if (p < 0.0 || p > 1.0) throw InputError("sample_reservoir: p in [0, 1]");
  Reservoir res;
  res.p = p;
  std::vector<uint8_t> blocked(g.n, 0);
  for (int v : avoid) blocked[v] = 1;
  Rng rng(seed);
  for (int v = 0; v < g.n; ++v)
    if (!blocked[v] && rng.bernoulli(p)) res.vertices.push_back(v);
  const double logn = std::log(std::max(2, g.n));
  res.declared_ell = 2.5 / rho * std::pow(logn, 4);
  res.declared_D =
      std::pow(p, 9) * std::pow(rho, 13) * g.d_avg / std::pow(logn, 51);
  return res;
}

ConnectThroughResult connect_through(const Graph& g, const Reservoir& res,
                                     const std::vector<std::pair<int, int>>& pairs, int D, int ell,
                                     uint64_t seed, int restarts, bool waive_spread) {
  std::vector<uint8_t> in_r(g.n, 0);
  for (int v : res.vertices) in_r[v] = 1;
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= g.n || y < 0 || y >= g.n)
      throw InputError("connect_through: endpoint out of range");
    if (x == y) throw InputError("connect_through: pair with equal endpoints");
    if (in_r[x] || in_r[y]) throw InputError("connect_through: endpoints must be outside R");
  }
  ConnectThroughResult result;
  // spread condition: every reservoir vertex has at most D endpoint neighbours
  {
    std::vector<int> load(g.n, 0);
    for (auto [x, y] : pairs) {
      for (int u : g.neighbors_of(x))
        if (in_r[u]) ++load[u];
      for (int u : g.neighbors_of(y))
        if (in_r[u]) ++load[u];
    }
    for (int v : res.vertices) result.max_endpoint_load = std::max(result.max_endpoint_load, load[v]);
    result.spread_ok = result.max_endpoint_load <= D;
    if (!result.spread_ok && !waive_spread)
      throw InputError("connect_through: spread condition violated (max load " +
                       std::to_string(result.max_endpoint_load) + " > D)");
  }

  Rng rng(seed);
  const int m = static_cast<int>(pairs.size());
  for (int attempt = 0; attempt <= restarts; ++attempt) {
    std::vector<int> order(m);
    for (int i = 0; i < m; ++i) order[i] = i;
    Rng round_rng = rng.child(attempt);
    round_rng.shuffle(order);

    std::vector<uint8_t> used(g.n, 0);
    std::vector<std::vector<int>> paths(m);
    std::vector<int> failed;

    std::vector<int> parent(g.n);
    std::vector<int> dist(g.n);

    auto bfs_path = [&](int x, int y, int max_len, std::optional<int> via) -> std::vector<int> {
      // BFS from x to y where all internal vertices lie in the free reservoir;
      // `via` forces the first internal vertex.
      if (!via && g.has_edge(x, y)) return {x, y};
      std::fill(dist.begin(), dist.end(), -1);
      std::queue<int> q;
      auto push_internal = [&](int u, int from) {
        if (dist[u] != -1) return;
        dist[u] = dist[from] + 1;
        parent[u] = from;
        q.push(u);
      };
      dist[x] = 0;
      if (via) {
        push_internal(*via, x);
      } else {
        for (int u : g.neighbors_of(x))
          if (in_r[u] && !used[u]) push_internal(u, x);
      }
      int found = -1;
      while (!q.empty() && found < 0) {
        int v = q.front();
        q.pop();
        if (dist[v] + 1 > max_len) break;
        for (int u : g.neighbors_of(v)) {
          if (u == y) {
            found = v;
            break;
          }
          if (in_r[u] && !used[u] && dist[u] == -1 && dist[v] + 1 < max_len)
            push_internal(u, v);
        }
      }
      if (found < 0) return {};
      std::vector<int> path = {y};
      for (int v = found; v != x; v = parent[v]) path.push_back(v);
      path.push_back(x);
      std::reverse(path.begin(), path.end());
      return path;
    };

    for (int idx : order) {
      auto [x, y] = pairs[idx];
      std::vector<int> path = bfs_path(x, y, ell, std::nullopt);
      if (path.empty()) {
        // per-pair retry through a random free intermediate
        std::vector<int> firsts;
        for (int u : g.neighbors_of(x))
          if (in_r[u] && !used[u]) firsts.push_back(u);
        if (!firsts.empty())
          path = bfs_path(x, y, ell, firsts[round_rng.uniform(firsts.size())]);
      }
      if (path.empty()) {
        failed.push_back(idx);
        continue;
      }
      for (size_t i = 1; i + 1 < path.size(); ++i) used[path[i]] = 1;
      paths[idx] = std::move(path);
    }

    if (failed.empty()) {
      result.paths = std::move(paths);
      return result;
    }
    if (attempt == restarts) throw ConnectThroughFailure(failed);
  }
  throw ConnectThroughFailure({});
}

std::vector<int> ball(const Graph& g, const std::vector<int>& U, const std::vector<int>& V, int i,
                      const std::vector<std::pair<int, int>>& F) {
  if (i < 0) throw InputError("ball: radius must be nonnegative");
  std::vector<uint8_t> in_v(g.n, 0);
  for (int v : V) in_v[v] = 1;
  std::set<std::pair<int, int>> banned;
  for (auto [u, v] : F) banned.insert(std::minmax(u, v));
  auto edge_ok = [&](int u, int v) {
    return F.empty() || !banned.count(std::minmax(u, v));
  };

  std::vector<uint8_t> out(g.n, 0);
  std::vector<uint8_t> frontier_seen(g.n, 0);
  std::vector<int> frontier;
  for (int u : U) {
    if (in_v[u]) out[u] = 1;
    if (!frontier_seen[u]) {
      frontier_seen[u] = 1;
      frontier.push_back(u);
    }
  }
  // level t: vertices of V reachable by a length-t path with internals in V
  for (int t = 1; t <= i && !frontier.empty(); ++t) {
    std::vector<int> next;
    for (int v : frontier) {
      for (int u : g.neighbors_of(v)) {
        if (!in_v[u] || !edge_ok(v, u)) continue;
        out[u] = 1;
        if (!frontier_seen[u]) {
          frontier_seen[u] = 1;
          next.push_back(u);
        }
      }
    }
    frontier = std::move(next);
  }
  std::vector<int> result;
  for (int v = 0; v < g.n; ++v)
    if (out[v]) result.push_back(v);
  return result;
}

ProbeReport reachable_probe(const Graph& g, const std::vector<int>& V, double mu, int ell,
                            int trials, uint64_t seed) {
  if (trials < 1) throw InputError("reachable_probe: trials >= 1");
  ProbeReport rep;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  // host edge list for F sampling
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < g.n; ++u)
    for (int v : g.neighbors_of(u))
      if (u < v) edges.emplace_back(u, v);

  for (int t = 0; t < trials; ++t) {
    Rng trial = rng.child(t);
    int usz = 1 + trial.uniform_int(std::max(1, g.n / 4));
    std::vector<int> U = trial.sample_indices(g.n, usz);
    int fmax = static_cast<int>(mu * usz);
    int fsz = fmax > 0 ? trial.uniform_int(fmax + 1) : 0;
    fsz = std::min<int>(fsz, static_cast<int>(edges.size()));
    std::vector<std::pair<int, int>> F;
    for (int idx : trial.sample_indices(static_cast<int>(edges.size()), fsz))
      F.push_back(edges[idx]);
    auto b = ball(g, U, V, ell, F);
    double margin = static_cast<double>(b.size()) - static_cast<double>(V.size()) / 2.0;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      if (margin <= 0) {
        rep.pass = false;
        rep.witness = ProbeWitness{U, F, static_cast<double>(b.size())};
      }
    }
  }
  return rep;
}

ProbeReport robust_vertex_expansion_probe(const Graph& g, double gamma, double s, int trials,
                                          uint64_t seed) {
  if (trials < 1) throw InputError("robust_vertex_expansion_probe: trials >= 1");
  ProbeReport rep;
  rep.trials = trials;
  rep.worst_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Rng trial = rng.child(t);
    int usz = 1 + trial.uniform_int(std::max(1, 2 * g.n / 3));
    std::vector<int> U = trial.sample_indices(g.n, usz);
    std::vector<uint8_t> in_u(g.n, 0);
    for (int v : U) in_u[v] = 1;
    // F drawn from edges incident to U (others cannot change N(U))
    std::vector<std::pair<int, int>> boundary;
    for (int v : U)
      for (int u : g.neighbors_of(v))
        if (!in_u[u]) boundary.emplace_back(v, u);
    long long fmax = static_cast<long long>(s * usz);
    int fsz = static_cast<int>(std::min<long long>(fmax, static_cast<long long>(boundary.size())));
    if (fsz > 0) fsz = trial.uniform_int(fsz + 1);
    std::set<std::pair<int, int>> banned;
    if (fsz > 0)
      for (int idx : trial.sample_indices(static_cast<int>(boundary.size()), fsz))
        banned.insert(std::minmax(boundary[idx].first, boundary[idx].second));
    std::vector<uint8_t> hit(g.n, 0);
    for (int v : U)
      for (int u : g.neighbors_of(v)) {
        if (in_u[u] || hit[u]) continue;
        if (!banned.empty() && banned.count(std::minmax(v, u))) continue;
        hit[u] = 1;
      }
    long long nbr = std::count(hit.begin(), hit.end(), uint8_t{1});
    double margin = static_cast<double>(nbr) - gamma * usz;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      if (margin < 0) {
        rep.pass = false;
        std::vector<std::pair<int, int>> F(banned.begin(), banned.end());
        rep.witness = ProbeWitness{U, F, static_cast<double>(nbr)};
      }
    }
  }
  return rep;
}

std::pair<double, double> robust_expansion_params(double rho, double d) {
  if (rho <= 0 || d <= 0) throw InputError("robust_expansion_params: rho, d > 0");
  return {2.0 * rho / 5.0, rho * d / 4.0};
}

}  // namespace hamexp
