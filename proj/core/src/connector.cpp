#include "hamexp/connector.hpp"

#include <algorithm>
#include <list>
#include <map>

#include "hamexp/error.hpp"

namespace hamexp {

namespace {

void validate_batch(const Graph& g, const PairBatch& batch) {
  std::vector<uint8_t> in_u(g.n, 0);
  for (int v : batch.forbidden) {
    if (v < 0 || v >= g.n) throw InputError("connect: forbidden vertex out of range");
    in_u[v] = 1;
  }
  for (auto [a, b] : batch.pairs) {
    if (a < 0 || a >= g.n || b < 0 || b >= g.n) throw InputError("connect: endpoint out of range");
    if (a == b) throw InputError("connect: pair with equal endpoints");
    if (!in_u[a] || !in_u[b]) throw InputError("connect: endpoints must lie inside the forbidden set");
    if (batch.bipartite_mode) {
      if (!g.bipartite) throw InputError("connect: bipartite mode on a non-bipartite graph");
      if (g.side[a] != 0 || g.side[b] != 1)
        throw InputError("connect: bipartite mode requires a in V0, b in V1");
    }
  }
  if (batch.length < 3) throw InputError("connect: length must be >= 3");
}

// Small LRU cache of conditioned tables keyed by target vertex. Entries are
// invalidated wholesale whenever the mask changes (generation counter).
class TableCache {
 public:
  explicit TableCache(size_t cap) : cap_(cap) {}

  void set_generation(uint64_t gen) {
    if (gen != generation_) {
      map_.clear();
      order_.clear();
      generation_ = gen;
    }
  }

  const ConditionedSampler* find(int b) {
    auto it = map_.find(b);
    if (it == map_.end()) return nullptr;
    order_.splice(order_.begin(), order_, it->second.second);
    return &it->second.first;
  }

  const ConditionedSampler* insert(int b, ConditionedSampler s) {
    order_.push_front(b);
    auto [it, fresh] = map_.try_emplace(b, std::move(s), order_.begin());
    if (!fresh) {
      order_.pop_front();
      return &it->second.first;
    }
    if (map_.size() > cap_) {
      int victim = order_.back();
      order_.pop_back();
      map_.erase(victim);
    }
    return &it->second.first;
  }

 private:
  size_t cap_;
  uint64_t generation_ = ~0ull;
  std::map<int, std::pair<ConditionedSampler, std::list<int>::iterator>> map_;
  std::list<int> order_;
};

struct Sampler {
  const Graph& g;
  std::shared_ptr<VertexMask> mask;
  TableCache cache;
  uint64_t generation = 0;
  int endpoint_retries;

  Sampler(const Graph& g_, std::shared_ptr<VertexMask> mask_, int cache_size, int ep_retries)
      : g(g_), mask(std::move(mask_)), cache(cache_size), endpoint_retries(ep_retries) {}

  void bump_generation() { ++generation; }

  // Samples a full a_i..b_i walk of length `len`: first/last steps uniform
  // into the live neighbourhoods, conditioned walk of length len-2 between.
  // Empty result = could not sample (no live neighbour mass / no walk).
  std::vector<int> sample_pair(int a, int b, int len, Rng& rng) {
    std::vector<int> live_a, live_b;
    for (int u : g.neighbors_of(a))
      if (mask->live(u)) live_a.push_back(u);
    for (int u : g.neighbors_of(b))
      if (mask->live(u)) live_b.push_back(u);
    if (live_a.empty())
      throw ComputeError("connect: endpoint " + std::to_string(a) +
                         " has no neighbour outside the forbidden set");
    if (live_b.empty())
      throw ComputeError("connect: endpoint " + std::to_string(b) +
                         " has no neighbour outside the forbidden set");
    const int inner = len - 2;
    for (int attempt = 0; attempt < endpoint_retries; ++attempt) {
      int ap = live_a[rng.uniform(live_a.size())];
      int bp = live_b[rng.uniform(live_b.size())];
      Walk w;
      if (inner == 1) {
        w = sample_conditioned_len1(g, mask.get(), ap, bp);
      } else if (inner == 3) {
        w = sample_conditioned_len3(g, mask.get(), ap, bp, rng);
      } else {
        cache.set_generation(generation);
        const ConditionedSampler* s = cache.find(bp);
        if (!s) s = cache.insert(bp, build_conditioned_masked(g, mask, bp, inner));
        if (!s->admissible(ap)) continue;
        w = sample_conditioned(*s, ap, rng);
      }
      if (w.vertices.empty()) continue;
      std::vector<int> path;
      path.reserve(len + 1);
      path.push_back(a);
      path.insert(path.end(), w.vertices.begin(), w.vertices.end());
      path.push_back(b);
      return path;
    }
    return {};
  }
};

// Disjointness filter: a walk survives iff every one of its vertices is
// touched exactly once across all sampled walks (covers self-repeats too).
std::vector<uint8_t> survivors(const Graph& g, const std::vector<std::vector<int>>& walks) {
  std::vector<int> count(g.n, 0);
  for (const auto& w : walks)
    for (size_t i = 1; i + 1 < w.size(); ++i) ++count[w[i]];
  std::vector<uint8_t> alive(walks.size(), 0);
  for (size_t i = 0; i < walks.size(); ++i) {
    if (walks[i].empty()) continue;
    bool ok = true;
    for (size_t j = 1; j + 1 < walks[i].size(); ++j)
      if (count[walks[i][j]] != 1) {
        ok = false;
        break;
      }
    alive[i] = ok ? 1 : 0;
  }
  return alive;
}

// Relaxed filter for multi-copy sampling: copies of one pair may overlap each
// other (only one will be chosen), but a survivor must be self-simple and
// disjoint from every walk belonging to any other pair.
std::vector<uint8_t> survivors_by_owner(const Graph& g, const std::vector<std::vector<int>>& walks,
                                        const std::vector<int>& owner) {
  std::vector<int> total(g.n, 0);
  for (const auto& w : walks)
    for (size_t i = 1; i + 1 < w.size(); ++i) ++total[w[i]];
  std::vector<int> mine(g.n, 0);
  std::vector<uint8_t> alive(walks.size(), 0);
  size_t lo = 0;
  while (lo < walks.size()) {
    size_t hi = lo;
    while (hi < walks.size() && owner[hi] == owner[lo]) ++hi;
    for (size_t k = lo; k < hi; ++k)
      for (size_t i = 1; i + 1 < walks[k].size(); ++i) ++mine[walks[k][i]];
    for (size_t k = lo; k < hi; ++k) {
      const auto& w = walks[k];
      if (w.empty()) continue;
      bool ok = true;
      std::vector<int> sorted(w.begin() + 1, w.end() - 1);
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) ok = false;
      for (size_t i = 1; ok && i + 1 < w.size(); ++i)
        if (total[w[i]] - mine[w[i]] != 0) ok = false;
      alive[k] = ok ? 1 : 0;
    }
    for (size_t k = lo; k < hi; ++k)
      for (size_t i = 1; i + 1 < walks[k].size(); ++i) --mine[walks[k][i]];
    lo = hi;
  }
  return alive;
}

OneBiteOutcome one_bite_impl(Sampler& sampler, const std::vector<std::pair<int, int>>& pairs,
                             const std::vector<int>& indices, int len, Rng& rng) {
  OneBiteOutcome out;
  std::vector<std::vector<int>> walks(indices.size());
  for (size_t k = 0; k < indices.size(); ++k) {
    Rng pair_rng = rng.child(static_cast<uint64_t>(indices[k]) * 2 + 1);
    auto [a, b] = pairs[indices[k]];
    walks[k] = sampler.sample_pair(a, b, len, pair_rng);
    if (!walks[k].empty()) ++out.sampled;
  }
  auto alive = survivors(sampler.g, walks);
  for (size_t k = 0; k < indices.size(); ++k) {
    if (alive[k]) {
      out.kept_indices.push_back(indices[k]);
      out.kept_paths.push_back(std::move(walks[k]));
    } else {
      out.leftover_indices.push_back(indices[k]);
    }
  }
  return out;
}

int auto_threshold(int m, int configured) {
  if (configured > 0) return configured;
  return std::max(8, (m + 19) / 20);
}

}  // namespace

OneBiteOutcome one_bite(const Graph& g, const PairBatch& batch, uint64_t seed) {
  validate_batch(g, batch);
  if (batch.length % 2 == 0) throw InputError("one_bite: length must be odd");
  auto mask = std::make_shared<VertexMask>(g);
  for (int v : batch.forbidden) mask->block(g, v);
  Sampler sampler(g, mask, 64, 8);
  std::vector<int> indices(batch.pairs.size());
  for (size_t i = 0; i < indices.size(); ++i) indices[i] = static_cast<int>(i);
  Rng rng = Rng(seed).child(0xb17e);
  return one_bite_impl(sampler, batch.pairs, indices, batch.length, rng);
}

LastStepOutcome last_step(const Graph& g, const PairBatch& batch, int copies, uint64_t seed) {
  validate_batch(g, batch);
  if (batch.length % 2 == 0) throw InputError("last_step: length must be odd");
  if (copies < 1) throw InputError("last_step: copies must be >= 1");
  auto mask = std::make_shared<VertexMask>(g);
  for (int v : batch.forbidden) mask->block(g, v);
  Sampler sampler(g, mask, 64, 8);
  Rng rng = Rng(seed).child(0x1a57);

  const int m = static_cast<int>(batch.pairs.size());
  std::vector<std::vector<int>> walks;
  std::vector<int> owner;
  walks.reserve(static_cast<size_t>(m) * copies);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < copies; ++j) {
      Rng copy_rng = rng.child(static_cast<uint64_t>(i) * 131071 + j);
      auto [a, b] = batch.pairs[i];
      walks.push_back(sampler.sample_pair(a, b, batch.length, copy_rng));
      owner.push_back(i);
    }
  }
  auto alive = survivors(g, walks);
  LastStepOutcome out;
  out.paths.assign(m, {});
  for (size_t k = 0; k < walks.size(); ++k)
    if (alive[k] && out.paths[owner[k]].empty()) out.paths[owner[k]] = std::move(walks[k]);
  for (int i = 0; i < m; ++i)
    if (out.paths[i].empty()) throw NoSurvivingCopy(i);
  return out;
}

ConnectResult connect(const Graph& g, const PairBatch& batch, const ConnectorConfig& cfg,
                      uint64_t seed) {
  PairBatch work = batch;
  ConnectResult result;
  if (work.length % 2 == 0) {
    ++work.length;
    result.length_adjusted = true;
  }
  validate_batch(g, work);
  result.length = work.length;
  const int m = static_cast<int>(work.pairs.size());
  result.paths.assign(m, {});
  result.kept_rounds.assign(m, -1);
  if (m == 0) return result;

  auto mask = std::make_shared<VertexMask>(g);
  for (int v : work.forbidden) mask->block(g, v);
  Sampler sampler(g, mask, cfg.table_cache_size, cfg.endpoint_retries);
  Rng rng(seed);

  const int threshold = auto_threshold(m, cfg.last_step_threshold);
  const int lensq = (work.length + 1) * (work.length + 1);

  std::vector<int> remaining(m);
  for (int i = 0; i < m; ++i) remaining[i] = i;

  // per-chunk cap on how often one endpoint vertex may appear: shared
  // anchors (many pairs on one vertex) would otherwise collide at the first
  // step and starve the iteration
  std::vector<int> ep_load(g.n, 0);

  int round = 0;
  while (static_cast<int>(remaining.size()) > threshold) {
    if (++round > cfg.rounds_max)
      throw RetryBudgetExhausted(round, static_cast<int>(remaining.size()));
    // keep the per-round collision load near chunk_load walks' worth of vertices
    int cap = std::max(threshold, static_cast<int>(mask->live_count * cfg.chunk_load / lensq));
    cap = std::min<int>(cap, static_cast<int>(remaining.size()));
    // pairs whose endpoints are running out of live neighbours go first
    std::stable_sort(remaining.begin(), remaining.end(), [&](int lhs, int rhs) {
      auto scarcity = [&](int idx) {
        auto [a, b] = work.pairs[idx];
        return std::min(mask->live_deg[a], mask->live_deg[b]);
      };
      return scarcity(lhs) < scarcity(rhs);
    });
    std::vector<int> chunk, deferred;
    std::fill(ep_load.begin(), ep_load.end(), 0);
    const int per_vertex = 2;
    for (int idx : remaining) {
      auto [a, b] = work.pairs[idx];
      if (static_cast<int>(chunk.size()) < cap && ep_load[a] < per_vertex &&
          ep_load[b] < per_vertex) {
        ++ep_load[a];
        ++ep_load[b];
        chunk.push_back(idx);
      } else {
        deferred.push_back(idx);
      }
    }
    Rng round_rng = rng.child(0xc0ffee00ull + round);
    OneBiteOutcome bite = one_bite_impl(sampler, work.pairs, chunk, work.length, round_rng);
    for (size_t k = 0; k < bite.kept_indices.size(); ++k) {
      int idx = bite.kept_indices[k];
      result.kept_rounds[idx] = round;
      auto& path = bite.kept_paths[k];
      for (size_t t = 1; t + 1 < path.size(); ++t) mask->block(g, path[t]);
      result.paths[idx] = std::move(path);
    }
    sampler.bump_generation();
    // leftover pairs rotate to the back so later pairs also get sampled
    std::vector<int> next(std::move(deferred));
    next.insert(next.end(), bite.leftover_indices.begin(), bite.leftover_indices.end());
    remaining = std::move(next);
  }

  // endgame: r copies per pair, anchor-disjoint sub-batches so that pairs
  // sharing an endpoint never compete for the same neighbourhood at once
  int ls_attempts = 0;
  while (!remaining.empty()) {
    ++round;
    std::vector<int> sub, rest;
    std::fill(ep_load.begin(), ep_load.end(), 0);
    for (int idx : remaining) {
      auto [a, b] = work.pairs[idx];
      if (ep_load[a] == 0 && ep_load[b] == 0 && a != b) {
        ep_load[a] = ep_load[b] = 1;
        sub.push_back(idx);
      } else {
        rest.push_back(idx);
      }
    }
    std::vector<std::vector<int>> walks;
    std::vector<int> owner;
    Rng ls_rng = rng.child(0x1a570000ull + round);
    for (int idx : sub) {
      auto [a, b] = work.pairs[idx];
      for (int j = 0; j < cfg.copies_r; ++j) {
        Rng copy_rng = ls_rng.child(static_cast<uint64_t>(idx) * 131071 + j);
        walks.push_back(sampler.sample_pair(a, b, work.length, copy_rng));
        owner.push_back(idx);
      }
    }
    auto alive = survivors_by_owner(g, walks, owner);
    std::vector<std::vector<int>> chosen(m);
    for (size_t k = 0; k < walks.size(); ++k)
      if (alive[k] && chosen[owner[k]].empty()) chosen[owner[k]] = std::move(walks[k]);
    bool all_placed = true;
    for (int idx : sub) {
      if (chosen[idx].empty()) {
        all_placed = false;
        rest.push_back(idx);
        continue;
      }
      result.kept_rounds[idx] = round;
      for (size_t t = 1; t + 1 < chosen[idx].size(); ++t) mask->block(g, chosen[idx][t]);
      result.paths[idx] = std::move(chosen[idx]);
    }
    sampler.bump_generation();
    if (!all_placed || sub.empty()) {
      if (++ls_attempts >= cfg.retry_budget + cfg.rounds_max / 8)
        throw RetryBudgetExhausted(round, static_cast<int>(rest.size()));
    }
    remaining = std::move(rest);
  }

  result.rounds_used = round;

  // layer uniformity of W_t = { P_i(t) }
  for (int t = 1; t <= work.length - 1; ++t) {
    std::vector<int> layer;
    layer.reserve(m);
    for (const auto& p : result.paths) layer.push_back(p[t]);
    UniformitySide side = UniformitySide::Whole;
    if (work.bipartite_mode) side = (t % 2 == 0) ? UniformitySide::V0toV1 : UniformitySide::V1toV0;
    result.layer_reports.push_back(uniformity(g, layer, side));
  }
  return result;
}

std::vector<DummyPair> dummy_pairs(const Graph& g, int set_size, const PairBatch& existing,
                                   int target_count) {
  if (target_count < 0) throw InputError("dummy_pairs: target_count must be >= 0");
  if (set_size < 1) throw InputError("dummy_pairs: set_size must be >= 1");
  std::vector<uint8_t> in_u(g.n, 0);
  for (int v : existing.forbidden) in_u[v] = 1;

  // endpoint load: how often each live vertex appears in the batch's live
  // endpoint neighbourhoods (A_i = N(a_i) \ U on the b-side and vice versa)
  std::vector<long long> load_a(g.n, 0), load_b(g.n, 0);
  for (auto [a, b] : existing.pairs) {
    for (int u : g.neighbors_of(a))
      if (!in_u[u]) ++load_a[u];
    for (int u : g.neighbors_of(b))
      if (!in_u[u]) ++load_b[u];
  }

  auto side_vertices = [&](int s) {
    std::vector<int> out;
    for (int v = 0; v < g.n; ++v)
      if (!in_u[v] && (!existing.bipartite_mode || g.side[v] == s)) out.push_back(v);
    return out;
  };
  // a-sets live where the a-neighbourhoods live: V1 in bipartite mode
  std::vector<int> a_dom = side_vertices(existing.bipartite_mode ? 1 : 0);
  std::vector<int> b_dom = side_vertices(existing.bipartite_mode ? 0 : 0);

  auto take_least_loaded = [&](std::vector<long long>& load, const std::vector<int>& domain) {
    std::vector<int> dom(domain);
    std::stable_sort(dom.begin(), dom.end(),
                     [&](int x, int y) { return load[x] != load[y] ? load[x] < load[y] : x < y; });
    int take = std::min<int>(set_size, static_cast<int>(dom.size()));
    std::vector<int> out(dom.begin(), dom.begin() + take);
    for (int v : out) ++load[v];
    std::sort(out.begin(), out.end());
    return out;
  };

  std::vector<DummyPair> result;
  result.reserve(target_count);
  for (int i = 0; i < target_count; ++i) {
    DummyPair dp;
    dp.a_set = take_least_loaded(load_a, a_dom);
    dp.b_set = take_least_loaded(load_b, b_dom);
    result.push_back(std::move(dp));
  }
  return result;
}

}  // namespace hamexp
