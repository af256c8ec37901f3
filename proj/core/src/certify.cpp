#include "hamexp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "hamexp/error.hpp"
#include "hamexp/rng.hpp"
#include "hamexp/spectral.hpp"

namespace hamexp {

namespace {

std::vector<int> mask_to_set(uint32_t mask, int n) {
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (mask >> v & 1u) out.push_back(v);
  return out;
}

long long cut_of_set(const Graph& g, const std::vector<int>& S) {
  std::vector<uint8_t> in(g.n, 0);
  for (int v : S) in[v] = 1;
  long long cut = 0;
  for (int v : S)
    for (int u : g.neighbors_of(v))
      if (!in[u]) ++cut;
  return cut;
}

double spectral_rho_lower(const Graph& g) {
  try {
    SpectralSummary s = spectral_summary(g, 1e-9);
    double rho = (1.0 - s.lambda2) / 3.0;
    return rho > 0 ? rho : 0.0;
  } catch (const ComputeError&) {
    return 0.0;
  }
}

}  // namespace

ExpansionCertificate expansion_certificate(const Graph& g, long long samples, uint64_t seed) {
  if (g.n < 2) throw InputError("expansion_certificate needs n >= 2");
  ExpansionCertificate cert;
  cert.connected = g.connected();
  if (!cert.connected) {
    // empty cut witnessed by the smallest component
    auto comp = components(g);
    int worst = *std::max_element(comp.begin(), comp.end());
    std::vector<long long> sizes(worst + 1, 0);
    for (int v = 0; v < g.n; ++v) ++sizes[comp[v]];
    int smallest = static_cast<int>(std::min_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (int v = 0; v < g.n; ++v)
      if (comp[v] == smallest) cert.worst_cut.push_back(v);
    cert.rho_upper = 0.0;
    cert.rho_lower = 0.0;
    cert.cuts_tested = 1;
    return cert;
  }

  const double dbar = g.d_avg;
  const int limit = 2 * g.n / 3;
  double best = std::numeric_limits<double>::infinity();
  uint32_t best_mask = 0;
  std::vector<int> best_set;

  if (g.n <= 20) {
    cert.exhaustive = true;
    // Gray-code walk over all subsets, cut updated incrementally.
    std::vector<uint32_t> adj_mask(g.n, 0);
    for (int v = 0; v < g.n; ++v)
      for (int u : g.neighbors_of(v)) adj_mask[v] |= 1u << u;
    uint32_t mask = 0;
    long long cut = 0;
    int size = 0;
    const uint32_t total = 1u << g.n;
    for (uint32_t i = 1; i < total; ++i) {
      int bit = __builtin_ctz(i);
      uint32_t vbit = 1u << bit;
      int inside = __builtin_popcount(adj_mask[bit] & mask);
      if (mask & vbit) {
        mask ^= vbit;
        --size;
        // v leaves S: it had (deg - inside') outside... recompute via symmetry
        inside = __builtin_popcount(adj_mask[bit] & mask);
        cut -= g.degree(bit) - 2 * inside;
      } else {
        mask ^= vbit;
        ++size;
        cut += g.degree(bit) - 2 * inside;
      }
      if (size >= 1 && size <= limit) {
        ++cert.cuts_tested;
        double ratio = static_cast<double>(cut) / (dbar * size);
        if (ratio < best) {
          best = ratio;
          best_mask = mask;
        }
      }
    }
    best_set = mask_to_set(best_mask, g.n);
  } else {
    cert.exhaustive = false;
    Rng rng(seed);
    auto consider = [&](const std::vector<int>& S) {
      if (S.empty() || static_cast<int>(S.size()) > limit) return;
      ++cert.cuts_tested;
      double ratio = static_cast<double>(cut_of_set(g, S)) / (dbar * static_cast<double>(S.size()));
      if (ratio < best) {
        best = ratio;
        best_set = S;
      }
    };
    for (int v = 0; v < g.n; ++v) consider({v});
    // BFS balls from a few seeded roots
    int roots = std::min(g.n, 32);
    for (int i = 0; i < roots; ++i) {
      int root = rng.uniform_int(g.n);
      std::vector<int> order;
      std::vector<uint8_t> seen(g.n, 0);
      std::queue<int> q;
      q.push(root);
      seen[root] = 1;
      while (!q.empty()) {
        int v = q.front();
        q.pop();
        order.push_back(v);
        for (int u : g.neighbors_of(v))
          if (!seen[u]) {
            seen[u] = 1;
            q.push(u);
          }
      }
      for (int sz = 2; sz <= limit; sz *= 2)
        if (sz <= static_cast<int>(order.size()))
          consider(std::vector<int>(order.begin(), order.begin() + sz));
    }
    for (long long i = 0; i < samples; ++i) {
      int sz = 1 + rng.uniform_int(limit);
      consider(rng.sample_indices(g.n, sz));
    }
  }

  cert.rho_upper = best;
  cert.worst_cut = std::move(best_set);
  cert.rho_lower = std::min(spectral_rho_lower(g), cert.rho_upper);
  return cert;
}

FarFromBipartiteReport far_from_bipartite(const Graph& g, FarMode mode, uint64_t seed,
                                          bool with_spectral) {
  if (g.edge_count() < 1) throw InputError("far_from_bipartite needs at least one edge");
  FarFromBipartiteReport rep;
  const long long e = g.edge_count();
  bool exhaustive = (mode == FarMode::Exhaustive) || (mode == FarMode::Auto && g.n <= 20);
  if (exhaustive && g.n > 24) throw InputError("exhaustive far_from_bipartite capped at n <= 24");

  long long best_cut = 0;
  if (exhaustive) {
    rep.exhaustive = true;
    // fix vertex n-1 on one side; Gray-code over the rest
    std::vector<uint32_t> adj_mask(g.n, 0);
    for (int v = 0; v < g.n; ++v)
      for (int u : g.neighbors_of(v)) adj_mask[v] |= 1u << u;
    uint32_t mask = 0;
    long long cut = 0;
    const uint32_t total = g.n == 1 ? 1 : 1u << (g.n - 1);
    for (uint32_t i = 1; i < total; ++i) {
      int bit = __builtin_ctz(i);
      uint32_t vbit = 1u << bit;
      if (mask & vbit) {
        mask ^= vbit;
        int inside = __builtin_popcount(adj_mask[bit] & mask);
        cut += 2 * inside - g.degree(bit);
      } else {
        mask ^= vbit;
        int inside = __builtin_popcount(adj_mask[bit] & (mask ^ vbit));
        cut += g.degree(bit) - 2 * inside;
      }
      best_cut = std::max(best_cut, cut);
    }
    // mask = 0 cut = 0 also a (trivial) bipartition
  } else {
    rep.exhaustive = false;
    if (g.bipartite) {
      best_cut = e;
    } else {
      // local-search lower bound on maxcut (definition lives in cover.cpp,
      // re-implemented here minimally to avoid a dependency loop)
      Rng rng(seed);
      std::vector<uint8_t> s(g.n);
      for (int v = 0; v < g.n; ++v) s[v] = static_cast<uint8_t>(rng.uniform(2));
      std::vector<int> cross(g.n, 0);
      for (int v = 0; v < g.n; ++v)
        for (int u : g.neighbors_of(v))
          if (s[u] != s[v]) ++cross[v];
      long long flips = 0, cap = 50LL * g.n;
      bool improved = true;
      while (improved && flips < cap) {
        improved = false;
        for (int v = 0; v < g.n && flips < cap; ++v) {
          int inside = g.degree(v) - cross[v];
          if (inside > cross[v]) {
            s[v] ^= 1;
            ++flips;
            improved = true;
            cross[v] = inside;
            for (int u : g.neighbors_of(v))
              cross[u] += (s[u] != s[v]) ? 1 : -1;
          }
        }
      }
      long long cut = 0;
      for (int v = 0; v < g.n; ++v) cut += cross[v];
      best_cut = cut / 2;
    }
  }
  rep.best_cut = best_cut;
  rep.eps = 1.0 - static_cast<double>(best_cut) / static_cast<double>(e);
  if (with_spectral) {
    try {
      SpectralSummary s = spectral_summary(g, 1e-9);
      rep.eps_spectral = std::max(0.0, (1.0 + s.lambda_n) / 2.0);
    } catch (const ComputeError&) {
      rep.eps_spectral = 0.0;
    }
  }
  return rep;
}

UniformityReport uniformity(const Graph& g, const std::vector<int>& S, UniformitySide side) {
  if ((side == UniformitySide::V0toV1 || side == UniformitySide::V1toV0) && !g.bipartite)
    throw InputError("uniformity: bipartite side requested on a non-bipartite graph");
  UniformityReport rep;
  rep.size = static_cast<long long>(S.size());

  int src_side = side == UniformitySide::V1toV0 ? 1 : 0;
  std::vector<int> count(g.n, 0);
  long long source_size = g.n;
  if (side != UniformitySide::Whole) {
    source_size = 0;
    for (int v = 0; v < g.n; ++v)
      if (g.side[v] == src_side) ++source_size;
  }
  for (int v : S) {
    if (v < 0 || v >= g.n) throw InputError("uniformity: vertex out of range");
    if (side != UniformitySide::Whole && g.side[v] != src_side)
      throw InputError("uniformity: multiset vertex outside the declared source part");
  }
  std::vector<int> hits(g.n, 0);
  for (int v : S)
    for (int u : g.neighbors_of(v)) ++hits[u];

  const double dbar = g.d_avg;
  const double expected = static_cast<double>(S.size()) * dbar / static_cast<double>(source_size);
  double worst = 0.0;
  int tgt_side = 1 - src_side;
  for (int v = 0; v < g.n; ++v) {
    if (side != UniformitySide::Whole && g.side[v] != tgt_side) continue;
    worst = std::max(worst, std::abs(hits[v] - expected));
  }
  rep.alpha_observed = dbar > 0 ? worst / dbar : 0.0;

  if (g.bipartite) {
    long long c0 = 0, c1 = 0;
    for (int v : S) (g.side[v] == 0 ? c0 : c1)++;
    rep.balanced = (c0 == c1);
  } else {
    rep.balanced = true;  // V0 = V1 = V(G)
  }
  return rep;
}

RemoveSetParams remove_set_params(double d, double d_prime, double n, double size_S, double alpha) {
  if (d <= 0) throw InputError("remove_set_params: d must be positive");
  if (d_prime < 0 || n <= 0 || size_S < 0 || alpha < 0 || size_S > n)
    throw InputError("remove_set_params: arguments out of range");
  RemoveSetParams p;
  const double frac = size_S / n;
  p.d2 = d * (1.0 - frac);
  p.d2_prime = d_prime * (1.0 + frac) + alpha * (d + d_prime);
  // removing nothing loses nothing; the closed form's d'/d term only enters
  // once an actual removal perturbs the neighbourhoods
  p.rho2_delta = (size_S == 0 && alpha == 0) ? 0.0 : 4.0 * (frac + alpha + d_prime / d);
  return p;
}

}  // namespace hamexp
