#include "hamexp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>

#include "hamexp/absorber.hpp"
#include "hamexp/certify.hpp"
#include "hamexp/connector.hpp"
#include "hamexp/cover.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/matching.hpp"
#include "hamexp/reservoir.hpp"
#include "hamexp/rng.hpp"
#include "hamexp/spectral.hpp"
#include "hamexp/walks.hpp"

namespace hamexp {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

bool verify_hamilton_cycle(const Graph& g, const std::vector<int>& cycle) {
  if (static_cast<int>(cycle.size()) != g.n || g.n < 3) return false;
  std::vector<uint8_t> seen(g.n, 0);
  for (int v : cycle) {
    if (v < 0 || v >= g.n || seen[v]) return false;
    seen[v] = 1;
  }
  for (size_t i = 0; i < cycle.size(); ++i)
    if (!g.has_edge(cycle[i], cycle[(i + 1) % cycle.size()])) return false;
  return true;
}

OracleResult exact_oracle(const Graph& g) {
  if (g.n > 22) throw InputError("exact_oracle: capped at n <= 22");
  OracleResult res;
  if (g.n < 3) return res;
  if (!g.connected()) return res;
  const int n = g.n;
  std::vector<uint32_t> adj(n, 0);
  for (int v = 0; v < n; ++v)
    for (int u : g.neighbors_of(v)) adj[v] |= 1u << u;

  // dp[mask] = bitmask of vertices v such that a path from 0 covering exactly
  // mask ends at v; only masks containing vertex 0 are populated
  const uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1);
  std::vector<uint32_t> dp(static_cast<size_t>(1) << n, 0);
  dp[1] = 1;
  for (uint32_t mask = 1; mask <= full; mask += 2) {
    uint32_t ends = dp[mask];
    while (ends) {
      int v = __builtin_ctz(ends);
      ends &= ends - 1;
      uint32_t nexts = adj[v] & ~mask;
      while (nexts) {
        int u = __builtin_ctz(nexts);
        nexts &= nexts - 1;
        dp[mask | (1u << u)] |= 1u << u;
      }
    }
  }
  uint32_t closers = dp[full] & adj[0];
  if (full == 1 || closers == 0) return res;

  // witness: walk the DP backwards
  res.hamiltonian = true;
  std::vector<int> path;
  int cur = __builtin_ctz(closers);
  uint32_t mask = full;
  while (cur != 0) {
    path.push_back(cur);
    uint32_t prev_mask = mask & ~(1u << cur);
    uint32_t cands = dp[prev_mask] & adj[cur];
    cur = __builtin_ctz(cands);
    mask = prev_mask;
  }
  path.push_back(0);
  std::reverse(path.begin(), path.end());
  res.witness = std::move(path);
  if (!verify_hamilton_cycle(g, res.witness))
    throw InvariantError("exact_oracle: witness failed verification");
  return res;
}

BacktrackResult backtracking_hamilton(const Graph& g, uint64_t seed, long long node_budget) {
  BacktrackResult res;
  if (g.n < 3 || !g.connected()) {
    res.exhausted = true;
    return res;
  }
  Rng rng(seed);
  const int n = g.n;
  std::vector<uint8_t> visited(n, 0);
  std::vector<int> live_deg(n);
  for (int v = 0; v < n; ++v) live_deg[v] = g.degree(v);
  std::vector<int> path = {0};
  visited[0] = 1;
  for (int u : g.neighbors_of(0)) --live_deg[u];
  long long nodes = 0;
  bool out_of_budget = false;

  auto dfs = [&](auto&& self, int v) -> bool {
    if (++nodes > node_budget) {
      out_of_budget = true;
      return false;
    }
    if (static_cast<int>(path.size()) == n) return g.has_edge(v, 0);
    // visit unvisited neighbours, fewest live options first
    std::vector<std::pair<int, int>> order;
    for (int u : g.neighbors_of(v))
      if (!visited[u]) order.emplace_back(live_deg[u], u);
    std::sort(order.begin(), order.end());
    for (auto [unused_key, u] : order) {
      (void)unused_key;
      visited[u] = 1;
      path.push_back(u);
      for (int w : g.neighbors_of(u)) --live_deg[w];
      bool dead = false;
      if (static_cast<int>(path.size()) < n) {
        for (int w : g.neighbors_of(u))
          if (!visited[w] && live_deg[w] == 0 && !g.has_edge(w, u)) {
            dead = true;
            break;
          }
      }
      if (!dead && self(self, u)) return true;
      for (int w : g.neighbors_of(u)) ++live_deg[w];
      path.pop_back();
      visited[u] = 0;
      if (out_of_budget) return false;
    }
    return false;
  };

  if (dfs(dfs, 0)) {
    res.cycle = path;
    if (!verify_hamilton_cycle(g, *res.cycle))
      throw InvariantError("backtracking_hamilton: cycle failed verification");
    return res;
  }
  res.exhausted = !out_of_budget;
  return res;
}

std::optional<std::vector<int>> posa_extension(const Graph& g, uint64_t seed, int restarts,
                                               long long step_budget) {
  if (g.n < 3 || !g.connected()) return std::nullopt;
  const int n = g.n;
  Rng rng(seed);
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng r = rng.child(attempt);
    std::vector<int> path = {r.uniform_int(n)};
    std::vector<int> pos(n, -1);
    pos[path[0]] = 0;
    long long steps = 0;
    while (steps++ < step_budget) {
      int head = path.back();
      // extend if possible
      std::vector<int> fresh;
      for (int u : g.neighbors_of(head))
        if (pos[u] < 0) fresh.push_back(u);
      if (!fresh.empty()) {
        int u = fresh[r.uniform(fresh.size())];
        pos[u] = static_cast<int>(path.size());
        path.push_back(u);
        continue;
      }
      if (static_cast<int>(path.size()) == n) {
        if (g.has_edge(head, path.front())) return path;  // spanning and closable
      }
      // rotate: neighbour v = path[i] of head, reverse the suffix after i
      auto nb = g.neighbors_of(head);
      int v = nb[r.uniform(nb.size())];
      int i = pos[v];
      if (i == static_cast<int>(path.size()) - 2) {
        // trivial rotation; occasionally reverse the whole path instead
        std::reverse(path.begin(), path.end());
        for (size_t k = 0; k < path.size(); ++k) pos[path[k]] = static_cast<int>(k);
        continue;
      }
      std::reverse(path.begin() + i + 1, path.end());
      for (size_t k = i + 1; k < path.size(); ++k) pos[path[k]] = static_cast<int>(k);
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::vector<int>>> exact_spanning_paths(
    const Graph& g, const std::vector<std::pair<int, int>>& pairs, long long node_budget) {
  if (pairs.empty()) return std::nullopt;
  std::vector<uint8_t> endpoint(g.n, 0);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b) return std::nullopt;
    endpoint[a] = endpoint[b] = 1;
  }
  std::vector<uint8_t> used(g.n, 0);
  int internals_total = 0;
  for (int v = 0; v < g.n; ++v)
    if (!endpoint[v]) ++internals_total;
  int internals_used = 0;
  long long nodes = 0;
  std::vector<std::vector<int>> result(pairs.size());
  std::vector<int> cur_path;

  auto solve = [&](auto&& self, size_t pair_idx, int cur) -> bool {
    if (++nodes > node_budget) return false;
    auto [a, b] = pairs[pair_idx];
    // close this pair?
    if (g.has_edge(cur, b)) {
      bool last = pair_idx + 1 == pairs.size();
      if (!last || internals_used == internals_total) {
        std::vector<int> full = cur_path;
        full.push_back(b);
        result[pair_idx] = full;
        if (last) return true;
        std::vector<int> saved = std::move(cur_path);
        cur_path = {pairs[pair_idx + 1].first};
        if (self(self, pair_idx + 1, pairs[pair_idx + 1].first)) return true;
        cur_path = std::move(saved);
      }
    }
    for (int u : g.neighbors_of(cur)) {
      if (endpoint[u] || used[u]) continue;
      used[u] = 1;
      ++internals_used;
      cur_path.push_back(u);
      if (self(self, pair_idx, u)) return true;
      cur_path.pop_back();
      --internals_used;
      used[u] = 0;
    }
    return false;
  };

  cur_path = {pairs[0].first};
  if (solve(solve, 0, pairs[0].first)) return result;
  return std::nullopt;
}

namespace {

struct SegmentAssembler {
  // joins path segments whose shared endpoints have degree exactly two
  std::vector<std::vector<int>> segments;

  void add(std::vector<int> seg) {
    if (seg.size() >= 2) segments.push_back(std::move(seg));
  }

  // walk from `from` to `to` consuming every segment exactly once
  std::vector<int> assemble(int from, int to) const {
    std::map<int, std::vector<int>> at;  // endpoint -> segment ids
    for (size_t i = 0; i < segments.size(); ++i) {
      at[segments[i].front()].push_back(static_cast<int>(i));
      at[segments[i].back()].push_back(static_cast<int>(i));
    }
    std::vector<uint8_t> done(segments.size(), 0);
    std::vector<int> out = {from};
    int cur = from;
    for (size_t step = 0; step < segments.size(); ++step) {
      int next_seg = -1;
      for (int sid : at[cur])
        if (!done[sid]) {
          next_seg = sid;
          break;
        }
      if (next_seg < 0) throw InvariantError("assemble: no segment continues the chain");
      done[next_seg] = 1;
      const auto& seg = segments[next_seg];
      if (seg.front() == cur) {
        out.insert(out.end(), seg.begin() + 1, seg.end());
      } else if (seg.back() == cur) {
        out.insert(out.end(), seg.rbegin() + 1, seg.rend());
      } else {
        throw InvariantError("assemble: segment does not touch the chain head");
      }
      cur = out.back();
    }
    if (cur != to) throw InvariantError("assemble: chain ended at the wrong vertex");
    return out;
  }
};

void check_path_system(const Graph& g, const std::vector<std::pair<int, int>>& pairs,
                       const std::vector<std::vector<int>>& paths) {
  std::vector<uint8_t> endpoint(g.n, 0);
  for (auto [a, b] : pairs) endpoint[a] = endpoint[b] = 1;
  std::vector<int> internal_count(g.n, 0);
  for (size_t i = 0; i < paths.size(); ++i) {
    const auto& p = paths[i];
    if (p.front() != pairs[i].first || p.back() != pairs[i].second)
      throw InvariantError("path system: endpoints wrong");
    if (!is_path_in(g, p)) throw InvariantError("path system: not a path");
    for (size_t t = 1; t + 1 < p.size(); ++t) {
      if (endpoint[p[t]]) throw InvariantError("path system: endpoint used internally");
      ++internal_count[p[t]];
    }
  }
  for (int v = 0; v < g.n; ++v) {
    if (endpoint[v]) continue;
    if (internal_count[v] != 1)
      throw InvariantError("path system: vertex covered " + std::to_string(internal_count[v]) +
                           " times");
  }
}

}  // namespace

HamiltonResult robust_spanning_paths(const Graph& g, const std::vector<std::pair<int, int>>& pairs,
                                     Regime regime, const PipelineConfig& config, uint64_t seed) {
  HamiltonResult res;
  auto t_start = Clock::now();
  if (pairs.empty()) {
    res.failure_reason = "no pairs";
    return res;
  }
  for (auto [a, b] : pairs)
    if (a < 0 || b < 0 || a >= g.n || b >= g.n || a == b) {
      res.failure_reason = "bad pair";
      return res;
    }

  // tiny hosts: the probabilistic machinery cannot possibly run; search
  if (g.n <= config.tiny_n) {
    auto t0 = Clock::now();
    auto sol = exact_spanning_paths(g, pairs, config.backtrack_budget);
    res.diagnostics.push_back({"tiny_exact", seconds_since(t0), 0, ""});
    if (sol) {
      res.outcome = HamiltonResult::Outcome::Paths;
      res.paths = *sol;
      res.route = "tiny_exact";
      check_path_system(g, pairs, res.paths);
    } else {
      res.failure_reason = "tiny exact search found no spanning path system";
    }
    return res;
  }

  const bool bip = regime == Regime::Bipartite;
  if (bip) {
    if (!g.bipartite || !g.balanced_bipartition) {
      res.failure_reason = "bipartite regime needs a balanced bipartite host";
      return res;
    }
    for (auto [a, b] : pairs)
      if (g.side[a] != 0 || g.side[b] != 1) {
        res.failure_reason = "bipartite regime: pairs must run V0 -> V1";
        return res;
      }
  }

  std::vector<int> endpoint_set;
  for (auto [a, b] : pairs) {
    endpoint_set.push_back(a);
    endpoint_set.push_back(b);
  }
  std::sort(endpoint_set.begin(), endpoint_set.end());
  endpoint_set.erase(std::unique(endpoint_set.begin(), endpoint_set.end()), endpoint_set.end());

  {
    std::vector<int> multiset;
    for (auto [a, b] : pairs) {
      multiset.push_back(a);
      multiset.push_back(b);
    }
    UniformityReport u = uniformity(g, multiset, UniformitySide::Whole);
    res.diagnostics.push_back(
        {"endpoint_uniformity", 0.0, 0,
         "alpha_observed=" + std::to_string(u.alpha_observed)});
  }

  // absorber sizing and feasibility
  AbsorberParams aparams;
  aparams.ell = config.absorber_ell;
  aparams.connector.last_step_threshold = config.last_step_threshold;
  aparams.connector.copies_r = config.copies_r;
  aparams.connector.retry_budget = config.retry_connector;
  aparams.connector.rounds_max = config.rounds_max;
  aparams.connector.chunk_load = config.chunk_load;
  aparams.template_regularity = config.template_regularity;

  long long vh_estimate = 0;
  long long reservoir_capacity = 0;
  if (!bip) {
    aparams.kind = AbsorberKind::General;
    // reservoir as requested, capped so |V(H)| stays within ~60% of the host
    const long long per_gadget = static_cast<long long>(aparams.ell) * aparams.ell + 1;
    long long m_max = (6 * (g.n - static_cast<long long>(endpoint_set.size())) / 10 - 1) /
                      per_gadget;
    int m_res = std::max(4, static_cast<int>(std::lround(config.p_reservoir * g.n)));
    m_res = static_cast<int>(std::min<long long>(m_res, std::max<long long>(m_max, 4)));
    aparams.reservoir_size = m_res;
    vh_estimate = m_res * per_gadget + 1;
    reservoir_capacity = m_res;
  } else {
    aparams.kind = AbsorberKind::Bipartite;
    aparams.m0 = config.bipartite_m0;
    const long long m1 = 7LL * aparams.m0 * aparams.template_regularity;
    const long long per = static_cast<long long>(aparams.ell - 1) * (aparams.ell + 2);
    vh_estimate = 14LL * aparams.m0 + (m1 + 1) + m1 * per;
    reservoir_capacity = 4LL * aparams.m0;
  }

  const long long free_after = g.n - static_cast<long long>(endpoint_set.size()) - vh_estimate;
  int t_parts = config.forest_parts;
  const double deg_into_v =
      g.d_min * std::max(0.0, static_cast<double>(free_after)) / std::max(1, g.n);
  if (t_parts <= 0) {
    // few paths wanted: |V|/t <= capacity/3, but keep layer degrees >= ~6
    long long want = std::max<long long>(2, 3 * std::max<long long>(free_after, 1) /
                                                std::max<long long>(reservoir_capacity, 1));
    long long dcap = std::max<long long>(2, static_cast<long long>(deg_into_v / 6.0));
    t_parts = static_cast<int>(std::min(want, dcap));
  }
  // forest paths ~ boundary layers plus matching defects (thin layers leak)
  const double layer_deg = deg_into_v / std::max(1, t_parts);
  const double est_paths = static_cast<double>(free_after) / std::max(1, t_parts) +
                           static_cast<double>(free_after) * std::exp(-layer_deg) + 4.0;
  const bool fits = free_after > g.n / 8 && vh_estimate < (3 * g.n) / 4 &&
                    2.0 * (est_paths + static_cast<double>(pairs.size()) + 2.0) <=
                        static_cast<double>(reservoir_capacity);
  if (!fits && !config.force_faithful) {
    res.failure_reason = "absorber machinery does not fit at this size (estimated |V(H)| " +
                         std::to_string(vh_estimate) + ", reservoir capacity " +
                         std::to_string(reservoir_capacity) + ")";
    return res;
  }

  Rng rng(seed);
  try {
    // stage 1: absorber for the endpoint set
    auto t0 = Clock::now();
    Absorber abs;
    int attempts = 0;
    for (;;) {
      try {
        abs = build_absorber(g, aparams, endpoint_set, rng.child(100 + attempts).next_u64());
        break;
      } catch (const ComputeError&) {
        if (++attempts >= config.retry_absorber) throw;
      }
    }
    res.diagnostics.push_back({"absorber", seconds_since(t0), attempts,
                               "|V(H)|=" + std::to_string(abs.vertex_set.size()) +
                                   " |R|=" + std::to_string(abs.reservoir.size())});
    if (seconds_since(t_start) > config.wall_clock_cap_s)
      throw ComputeError("wall clock cap exceeded after absorber");

    // stage 2: linear forest on the remainder
    t0 = Clock::now();
    std::vector<uint8_t> consumed(g.n, 0);
    for (int v : abs.vertex_set) consumed[v] = 1;
    for (int v : endpoint_set) consumed[v] = 1;
    std::vector<int> V;
    for (int v = 0; v < g.n; ++v)
      if (!consumed[v]) V.push_back(v);
    ForestReport freport;
    LinearForest forest = linear_forest(g, V, t_parts, rng.child(200).next_u64(), &freport);
    auto fends = forest.endpoints();
    const int t = static_cast<int>(fends.size());
    res.diagnostics.push_back({"forest", seconds_since(t0), 0,
                               "paths=" + std::to_string(t) +
                                   " parts=" + std::to_string(t_parts)});

    // stage 3: hookups through the reservoir
    t0 = Clock::now();
    std::vector<std::pair<int, int>> hookups;
    const int m = static_cast<int>(pairs.size());
    for (int j = 0; j + 1 < t; ++j) hookups.emplace_back(fends[j].second, fends[j + 1].first);
    if (t > 0) {
      if (!bip) {
        hookups.emplace_back(pairs[0].first, abs.y_endpoint);
        hookups.emplace_back(abs.x_endpoint, fends[t - 1].second);
        hookups.emplace_back(fends[0].first, pairs[0].second);
      } else {
        hookups.emplace_back(pairs[0].second, fends[0].first);
        hookups.emplace_back(fends[t - 1].second, abs.x_endpoint);
        hookups.emplace_back(abs.y_endpoint, pairs[0].first);
      }
    } else {
      hookups.emplace_back(pairs[0].first, abs.y_endpoint);
      hookups.emplace_back(abs.x_endpoint, pairs[0].second);
    }
    const int chain_hooks = static_cast<int>(hookups.size());
    for (int i = 1; i < m; ++i) hookups.push_back(pairs[i]);

    Reservoir res_set;
    res_set.vertices = abs.reservoir;
    std::sort(res_set.vertices.begin(), res_set.vertices.end());
    int ell_res = config.reservoir_ell;
    if (ell_res <= 0) ell_res = 12;

    ConnectThroughResult hooked;
    attempts = 0;
    for (;;) {
      try {
        hooked = connect_through(g, res_set, hookups, g.d_max, ell_res,
                                 rng.child(300 + attempts).next_u64(), config.retry_reservoir,
                                 /*waive_spread=*/true);
        if (bip) {
          // balanced R' needed for the bipartite absorber
          long long c0 = 0, c1 = 0;
          for (const auto& p : hooked.paths)
            for (size_t i = 1; i + 1 < p.size(); ++i) (g.side[p[i]] == 0 ? c0 : c1)++;
          if (c0 != c1) throw ComputeError("unbalanced reservoir usage");
        }
        break;
      } catch (const ComputeError&) {
        if (++attempts >= config.retry_reservoir) throw;
      }
    }
    res.diagnostics.push_back({"reservoir_hookup", seconds_since(t0), attempts,
                               "pairs=" + std::to_string(hookups.size())});
    if (seconds_since(t_start) > config.wall_clock_cap_s)
      throw ComputeError("wall clock cap exceeded after hookup");

    // stage 4: absorb the unused reservoir
    t0 = Clock::now();
    std::vector<int> r_used;
    for (const auto& p : hooked.paths)
      for (size_t i = 1; i + 1 < p.size(); ++i) r_used.push_back(p[i]);
    std::sort(r_used.begin(), r_used.end());
    std::vector<int> q_path = absorb(abs, r_used);
    res.diagnostics.push_back({"absorb", seconds_since(t0), 0,
                               "r_used=" + std::to_string(r_used.size())});

    // stage 5: assemble
    t0 = Clock::now();
    SegmentAssembler chain;
    for (const auto& p : forest.paths) chain.add(p);  // singletons skipped
    for (int i = 0; i < chain_hooks; ++i) chain.add(hooked.paths[i]);
    chain.add(q_path);
    std::vector<std::vector<int>> out_paths(m);
    out_paths[0] = chain.assemble(pairs[0].first, pairs[0].second);
    for (int i = 1; i < m; ++i) out_paths[i] = hooked.paths[chain_hooks + i - 1];
    check_path_system(g, pairs, out_paths);
    res.diagnostics.push_back({"assemble", seconds_since(t0), 0, ""});

    res.outcome = HamiltonResult::Outcome::Paths;
    res.paths = std::move(out_paths);
    res.route = "faithful";
    return res;
  } catch (const ComputeError& e) {
    res.failure_reason = e.what();
    return res;
  }
}

namespace {

HamiltonResult cycle_result(const Graph& g, std::vector<int> cycle, std::string route,
                            std::vector<StageDiag> diags) {
  HamiltonResult res;
  if (!verify_hamilton_cycle(g, cycle))
    throw InvariantError("pipeline: produced cycle failed verification");
  res.outcome = HamiltonResult::Outcome::Cycle;
  res.cycle = std::move(cycle);
  res.route = std::move(route);
  res.diagnostics = std::move(diags);
  return res;
}

}  // namespace

HamiltonResult hamilton_cycle(const Graph& g, const PipelineConfig& config, uint64_t seed) {
  HamiltonResult res;
  std::vector<StageDiag> diags;
  auto t_start = Clock::now();

  if (g.n < 3) {
    res.failure_reason = "fewer than three vertices";
    res.certain_non_hamiltonian = true;
    return res;
  }
  if (!g.connected()) {
    res.failure_reason = "disconnected";
    res.certain_non_hamiltonian = true;
    return res;
  }
  if (g.bipartite && !g.balanced_bipartition) {
    res.failure_reason = "bipartite with unequal parts";
    res.certain_non_hamiltonian = true;
    return res;
  }

  // 2-regular connected: the graph is its own cycle
  if (g.d_min == 2 && g.d_max == 2) {
    std::vector<int> cycle = {0};
    int prev = -1, cur = 0;
    while (static_cast<int>(cycle.size()) < g.n) {
      auto nb = g.neighbors_of(cur);
      int next = (nb[0] == prev) ? nb[1] : nb[0];
      cycle.push_back(next);
      prev = cur;
      cur = next;
    }
    return cycle_result(g, std::move(cycle), "two_regular", std::move(diags));
  }

  if (g.n <= config.tiny_n) {
    auto t0 = Clock::now();
    OracleResult oracle = exact_oracle(g);
    diags.push_back({"oracle", seconds_since(t0), 0, ""});
    if (oracle.hamiltonian) return cycle_result(g, oracle.witness, "oracle", std::move(diags));
    res.failure_reason = "exact oracle: not hamiltonian";
    res.certain_non_hamiltonian = true;
    res.diagnostics = std::move(diags);
    return res;
  }

  if (g.n <= config.backtrack_n) {
    auto t0 = Clock::now();
    BacktrackResult bt = backtracking_hamilton(g, seed, config.backtrack_budget);
    diags.push_back({"backtracking", seconds_since(t0), 0, bt.exhausted ? "exhausted" : ""});
    if (bt.cycle) return cycle_result(g, *bt.cycle, "backtracking", std::move(diags));
    if (bt.exhausted) {
      res.failure_reason = "exact search: not hamiltonian";
      res.certain_non_hamiltonian = true;
      res.diagnostics = std::move(diags);
      return res;
    }
  }

  // regime decision
  auto t0 = Clock::now();
  FarFromBipartiteReport far =
      far_from_bipartite(g, FarMode::Auto, seed ^ 0xfa3, /*with_spectral=*/g.n <= 2000);
  diags.push_back({"regime", seconds_since(t0), 0,
                   "eps=" + std::to_string(far.eps) +
                       " eps_spectral=" + std::to_string(far.eps_spectral)});
  const bool far_regime = !g.bipartite && far.eps >= config.regime_epsilon;

  if (far_regime) {
    // m = 1 with an arbitrary edge
    int a1 = -1, b1 = -1;
    for (int v = 0; v < g.n && a1 < 0; ++v)
      if (g.degree(v) > 0) {
        a1 = v;
        b1 = g.neighbors_of(v)[0];
      }
    HamiltonResult run = robust_spanning_paths(g, {{a1, b1}}, Regime::FarFromBipartite, config,
                                               seed ^ 0xfeedULL);
    diags.insert(diags.end(), run.diagnostics.begin(), run.diagnostics.end());
    if (run.outcome == HamiltonResult::Outcome::Paths) {
      // the spanning a1-b1 path plus the edge b1-a1 is the cycle
      return cycle_result(g, run.paths[0], "faithful", std::move(diags));
    }
    diags.push_back({"faithful_far", 0.0, 0, run.failure_reason});
  } else {
    // close-to-bipartite branch: maxcut, clean-up forest, bipartite run
    HamiltonResult closed = [&]() -> HamiltonResult {
      HamiltonResult sub;
      try {
        if (g.d_min != g.d_max) throw ComputeError("close branch needs a regular host");
        const int d = g.d_max;
        t0 = Clock::now();
        MaxCutResult cut = max_cut_local_search(g, seed ^ 0xc07);
        std::vector<int> A = cut.a_side, B = cut.b_side;
        if (A.size() > B.size()) std::swap(A, B);
        std::vector<int> side_of(g.n, 0);
        for (int v : B) side_of[v] = 1;
        // vertices with too many neighbours inside their own part
        const int tau = std::max(1, static_cast<int>(std::ceil(0.5 * std::pow(d, 0.8))));
        std::vector<int> X;
        for (int v = 0; v < g.n; ++v) {
          int inside = 0;
          for (int u : g.neighbors_of(v))
            if (side_of[u] == side_of[v]) ++inside;
          if (inside >= tau) X.push_back(v);
        }
        diags.push_back({"maxcut", seconds_since(t0), 0,
                         "imbalance=" + std::to_string(B.size() - A.size()) +
                             " |X|=" + std::to_string(X.size())});
        LinearForest cleanup = clean_up_forest(g, A, B, X, seed ^ 0xcafe);
        if (cleanup.paths.empty()) {
          // single-edge fallback: one A-B edge as a degenerate forest
          for (int v : A) {
            for (int u : g.neighbors_of(v))
              if (side_of[u] == 1) {
                cleanup.paths.push_back({v, u});
                break;
              }
            if (!cleanup.paths.empty()) break;
          }
        }
        // interior of the cleanup forest leaves the working graph
        std::vector<uint8_t> interior(g.n, 0);
        for (const auto& p : cleanup.paths)
          for (size_t i = 1; i + 1 < p.size(); ++i) interior[p[i]] = 1;
        // bipartite working graph G[A, B] minus interior
        std::vector<std::pair<int, int>> cross_edges;
        for (int v = 0; v < g.n; ++v) {
          if (interior[v]) continue;
          for (int u : g.neighbors_of(v))
            if (v < u && !interior[u] && side_of[v] != side_of[u]) cross_edges.emplace_back(v, u);
        }
        std::vector<int> keep;
        for (int v = 0; v < g.n; ++v)
          if (!interior[v]) keep.push_back(v);
        std::vector<int> to_new(g.n, -1);
        for (size_t i = 0; i < keep.size(); ++i) to_new[keep[i]] = static_cast<int>(i);
        std::vector<std::pair<int, int>> renamed;
        for (auto [u, v] : cross_edges) renamed.emplace_back(to_new[u], to_new[v]);
        Graph gp = Graph::from_edges(static_cast<int>(keep.size()), renamed);
        if (!gp.bipartite || !gp.balanced_bipartition)
          throw ComputeError("close branch: working graph not balanced bipartite");

        // chained pairs (x_i, y_{i+1}) over the cleanup paths
        const int k = static_cast<int>(cleanup.paths.size());
        std::vector<std::pair<int, int>> chained;
        for (int i = 0; i < k; ++i) {
          const auto& pi = cleanup.paths[i];
          const auto& pn = cleanup.paths[(i + 1) % k];
          int xi = side_of[pi.front()] == 0 ? pi.front() : pi.back();
          int yn = side_of[pn.front()] == 1 ? pn.front() : pn.back();
          int a = to_new[xi], b = to_new[yn];
          if (a < 0 || b < 0) throw ComputeError("close branch: forest endpoint lost");
          if (gp.side[a] != 0) std::swap(a, b);
          if (gp.side[a] != 0 || gp.side[b] != 1)
            throw ComputeError("close branch: pair parity broken");
          chained.emplace_back(a, b);
        }
        HamiltonResult run =
            robust_spanning_paths(gp, chained, Regime::Bipartite, config, seed ^ 0xb1b);
        diags.insert(diags.end(), run.diagnostics.begin(), run.diagnostics.end());
        if (run.outcome != HamiltonResult::Outcome::Paths)
          throw ComputeError("close branch: " + run.failure_reason);
        // assemble: cleanup forest + spanning paths close into one cycle
        SegmentAssembler chain;
        for (const auto& p : cleanup.paths) chain.add(p);
        for (size_t i = 0; i < run.paths.size(); ++i) {
          std::vector<int> host;
          host.reserve(run.paths[i].size());
          for (int v : run.paths[i]) host.push_back(keep[v]);
          chain.add(host);
        }
        // the chain closes into a cycle; cut it open at a forest endpoint
        int start = cleanup.paths[0].front();
        std::vector<int> cyc = chain.assemble(start, start);
        cyc.pop_back();
        sub = cycle_result(g, std::move(cyc), "faithful", {});
        return sub;
      } catch (const ComputeError& e) {
        sub.failure_reason = e.what();
        return sub;
      } catch (const InputError& e) {
        sub.failure_reason = e.what();
        return sub;
      }
    }();
    if (closed.outcome == HamiltonResult::Outcome::Cycle) {
      closed.diagnostics = std::move(diags);
      return closed;
    }
    diags.push_back({"faithful_close", 0.0, 0, closed.failure_reason});
  }

  if (config.extension_fallback) {
    auto t1 = Clock::now();
    double remaining = config.wall_clock_cap_s - seconds_since(t_start);
    long long budget = std::max<long long>(50LL * g.n, 1000);
    int restarts = remaining > 10 ? 24 : 8;
    auto cyc = posa_extension(g, seed ^ 0x9057, restarts, budget);
    diags.push_back({"extension", seconds_since(t1), 0, cyc ? "found" : "no cycle"});
    if (cyc) return cycle_result(g, *cyc, "extension", std::move(diags));
  }

  res.failure_reason = "all stages failed or abstained";
  res.diagnostics = std::move(diags);
  return res;
}

}  // namespace hamexp
