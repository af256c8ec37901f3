#include "hamexp/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "hamexp/error.hpp"

namespace hamexp {

namespace {

bool has_repeat(const std::vector<int>& seq) {
  std::vector<int> tmp(seq);
  std::sort(tmp.begin(), tmp.end());
  return std::adjacent_find(tmp.begin(), tmp.end()) != tmp.end();
}

}  // namespace

Walk random_walk(const Graph& g, int v, int ell, Rng& rng) {
  if (ell < 0) throw InputError("random_walk: ell must be nonnegative");
  if (v < 0 || v >= g.n) throw InputError("random_walk: start out of range");
  Walk w;
  w.vertices.reserve(ell + 1);
  w.vertices.push_back(v);
  int cur = v;
  for (int i = 0; i < ell; ++i) {
    auto nb = g.neighbors_of(cur);
    if (nb.empty()) throw InputError("random_walk: isolated vertex " + std::to_string(cur));
    cur = nb[rng.uniform(nb.size())];
    w.vertices.push_back(cur);
  }
  w.degenerate = has_repeat(w.vertices);
  return w;
}

Walk random_walk(const Graph& g, int v, int ell, uint64_t seed) {
  Rng rng(seed);
  return random_walk(g, v, ell, rng);
}

VertexMask::VertexMask(const Graph& g) : blocked(g.n, 0), live_deg(g.n), live_count(g.n) {
  for (int v = 0; v < g.n; ++v) live_deg[v] = g.degree(v);
}

void VertexMask::block(const Graph& g, int v) {
  if (blocked[v]) return;
  blocked[v] = 1;
  --live_count;
  for (int u : g.neighbors_of(v)) --live_deg[u];
}

namespace {

ConditionedSampler build_tables(const Graph& g, std::shared_ptr<VertexMask> mask, int b, int ell) {
  if (ell < 1) throw InputError("build_conditioned: ell must be >= 1");
  if (b < 0 || b >= g.n) throw InputError("build_conditioned: target out of range");
  if (mask && mask->blocked[b]) throw InputError("build_conditioned: target is blocked");
  ConditionedSampler s;
  s.host = &g;
  s.target = b;
  s.length = ell;
  s.mask = mask;
  s.f.assign(ell + 1, std::vector<double>(g.n, 0.0));
  s.log_norm.assign(ell + 1, 0.0);
  s.f[0][b] = 1.0;
  const VertexMask* m = mask.get();
  for (int t = 1; t <= ell; ++t) {
    const auto& prev = s.f[t - 1];
    auto& cur = s.f[t];
    double total = 0.0;
    for (int v = 0; v < g.n; ++v) {
      if (m && m->blocked[v]) continue;
      double acc = 0.0;
      for (int u : g.neighbors_of(v)) {
        if (prev[u] == 0.0) continue;
        int du = m ? m->live_deg[u] : g.degree(u);
        acc += prev[u] / du;
      }
      cur[v] = acc;
      total += acc;
    }
    if (total > 0) {
      for (double& v : cur) v /= total;
      s.log_norm[t] = s.log_norm[t - 1] + std::log(total);
    } else {
      s.log_norm[t] = -std::numeric_limits<double>::infinity();
    }
  }
  return s;
}

}  // namespace

ConditionedSampler build_conditioned(const Graph& g, int b, int ell) {
  return build_tables(g, nullptr, b, ell);
}

ConditionedSampler build_conditioned_masked(const Graph& g, std::shared_ptr<VertexMask> mask,
                                            int b, int ell) {
  return build_tables(g, std::move(mask), b, ell);
}

Walk sample_conditioned(const ConditionedSampler& s, int a, Rng& rng) {
  const Graph& g = *s.host;
  if (a < 0 || a >= g.n) throw InputError("sample_conditioned: start out of range");
  if (!s.admissible(a))
    throw InputError("sample_conditioned: no walk of length " + std::to_string(s.length) +
                     " from " + std::to_string(a) + " to " + std::to_string(s.target));
  const VertexMask* m = s.mask.get();
  Walk w;
  w.vertices.reserve(s.length + 1);
  w.vertices.push_back(a);
  int cur = a;
  for (int k = s.length; k >= 1; --k) {
    const auto& fk = s.f[k - 1];
    double total = 0.0;
    for (int u : g.neighbors_of(cur)) {
      if (m && m->blocked[u]) continue;
      if (fk[u] == 0.0) continue;
      int du = m ? m->live_deg[u] : g.degree(u);
      total += fk[u] / du;
    }
    if (total <= 0.0) throw InvariantError("sample_conditioned: dead end despite admissible start");
    double draw = rng.next_double() * total;
    int next = -1;
    double acc = 0.0;
    for (int u : g.neighbors_of(cur)) {
      if (m && m->blocked[u]) continue;
      if (fk[u] == 0.0) continue;
      int du = m ? m->live_deg[u] : g.degree(u);
      acc += fk[u] / du;
      if (acc >= draw) {
        next = u;
        break;
      }
    }
    if (next < 0) {  // rounding fell off the end; take the last admissible
      for (auto it = g.neighbors_of(cur).rbegin(); it != g.neighbors_of(cur).rend(); ++it) {
        int u = *it;
        if ((m && m->blocked[u]) || fk[u] == 0.0) continue;
        next = u;
        break;
      }
    }
    cur = next;
    w.vertices.push_back(cur);
  }
  if (cur != s.target) throw InvariantError("sample_conditioned: walk missed its target");
  w.degenerate = has_repeat(w.vertices);
  return w;
}

Walk sample_conditioned(const ConditionedSampler& s, int a, uint64_t seed) {
  Rng rng(seed);
  return sample_conditioned(s, a, rng);
}

Walk sample_conditioned_len1(const Graph& g, const VertexMask* mask, int a, int b) {
  Walk w;
  if (a == b) return w;
  if (mask && (mask->blocked[a] || mask->blocked[b])) return w;
  if (!g.has_edge(a, b)) return w;
  w.vertices = {a, b};
  w.degenerate = false;
  return w;
}

Walk sample_conditioned_len3(const Graph& g, const VertexMask* mask, int a, int b, Rng& rng) {
  // middle pairs (x, y): x ~ a, y ~ x, y ~ b, walk weight
  // 1/(deg a * deg x * deg y) with live degrees under the mask; selected by
  // single-pass weighted reservoir sampling over a stamped N(b)
  Walk w;
  if (mask && (mask->blocked[a] || mask->blocked[b])) return w;
  auto live = [&](int v) { return !mask || !mask->blocked[v]; };
  auto deg = [&](int v) { return mask ? mask->live_deg[v] : g.degree(v); };

  thread_local std::vector<int> stamp;
  thread_local int stamp_epoch = 0;
  if (static_cast<int>(stamp.size()) < g.n) stamp.assign(g.n, 0);
  ++stamp_epoch;
  for (int y : g.neighbors_of(b))
    if (live(y)) stamp[y] = stamp_epoch;

  double total = 0.0;
  int pick_x = -1, pick_y = -1;
  for (int x : g.neighbors_of(a)) {
    if (!live(x)) continue;
    double wx = 1.0 / static_cast<double>(deg(x));
    for (int y : g.neighbors_of(x)) {
      if (stamp[y] != stamp_epoch) continue;
      double wgt = wx / static_cast<double>(deg(y));
      total += wgt;
      if (rng.next_double() * total <= wgt) {
        pick_x = x;
        pick_y = y;
      }
    }
  }
  if (pick_x < 0) return w;
  w.vertices = {a, pick_x, pick_y, b};
  w.degenerate = has_repeat(w.vertices);
  return w;
}

double estimate_hit_probability(const ConditionedSampler& s, int a, int t, int v, int samples,
                                uint64_t seed) {
  if (t < 1 || t > s.length - 1) throw InputError("estimate_hit_probability: t in [1, ell-1]");
  if (samples < 1) throw InputError("estimate_hit_probability: samples >= 1");
  Rng rng(seed);
  long long hits = 0;
  for (int i = 0; i < samples; ++i) {
    Walk w = sample_conditioned(s, a, rng);
    if (w.vertices[t] == v) ++hits;
  }
  return static_cast<double>(hits) / samples;
}

double estimate_degenerate_probability(const ConditionedSampler& s, int a, int samples,
                                       uint64_t seed) {
  if (samples < 1) throw InputError("estimate_degenerate_probability: samples >= 1");
  Rng rng(seed);
  long long deg = 0;
  for (int i = 0; i < samples; ++i) {
    Walk w = sample_conditioned(s, a, rng);
    if (w.degenerate) ++deg;
  }
  return static_cast<double>(deg) / samples;
}

EnumeratedLaw enumerate_conditioned_law(const Graph& g, int a, int b, int ell) {
  double states = std::pow(static_cast<double>(std::max(1, g.d_max)), ell);
  if (states > 2e7) throw InputError("enumerate_conditioned_law: state space too large");
  EnumeratedLaw law;
  std::vector<int> walk = {a};
  double total = 0.0;
  auto rec = [&](auto&& self, int cur, int steps_left, double weight) -> void {
    if (steps_left == 0) {
      if (cur == b) {
        law.walks.push_back(walk);
        law.probs.push_back(weight);
        total += weight;
      }
      return;
    }
    for (int u : g.neighbors_of(cur)) {
      walk.push_back(u);
      self(self, u, steps_left - 1, weight / g.degree(cur));
      walk.pop_back();
    }
  };
  rec(rec, a, ell, 1.0);
  for (double& p : law.probs) p /= total;
  return law;
}

double reversal_ratio_check(const Graph& g, int a, int b, int ell) {
  if (g.n > 8) throw InputError("reversal_ratio_check: exhaustive mode capped at n <= 8");
  if (ell > 10) throw InputError("reversal_ratio_check: ell capped at 10");
  EnumeratedLaw fwd = enumerate_conditioned_law(g, a, b, ell);
  EnumeratedLaw bwd = enumerate_conditioned_law(g, b, a, ell);
  if (fwd.walks.empty()) throw InputError("reversal_ratio_check: no walks exist");

  // index reversed backward walks
  std::map<std::vector<int>, double> rev;
  for (size_t i = 0; i < bwd.walks.size(); ++i) {
    std::vector<int> r(bwd.walks[i].rbegin(), bwd.walks[i].rend());
    rev[r] = bwd.probs[i];
  }
  double worst = 0.0;
  for (size_t i = 0; i < fwd.walks.size(); ++i) {
    auto it = rev.find(fwd.walks[i]);
    if (it == rev.end()) throw InvariantError("reversal_ratio_check: support mismatch");
    worst = std::max(worst, std::abs(std::log(fwd.probs[i] / it->second)));
  }
  return worst;
}

std::vector<double> conditioned_marginal(const Graph& g, int a, int b, int ell, int t) {
  if (t < 0 || t > ell) throw InputError("conditioned_marginal: t in [0, ell]");
  // forward walk mass from a and backward suffix mass to b
  std::vector<double> fwd = walk_distribution(g, a, t);
  ConditionedSampler s = build_conditioned(g, b, ell);
  if (!s.admissible(a)) throw InputError("conditioned_marginal: no walk exists");
  // suffix mass g_k(v) ~ f[k][v]/deg(v), normalization cancels
  std::vector<double> out(g.n, 0.0);
  double total = 0.0;
  for (int v = 0; v < g.n; ++v) {
    double suffix = s.f[ell - t][v] / g.degree(v);
    out[v] = fwd[v] * suffix;
    total += out[v];
  }
  if (total <= 0) throw InvariantError("conditioned_marginal: zero mass");
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> walk_distribution(const Graph& g, int a, int t) {
  std::vector<double> x(g.n, 0.0), y(g.n, 0.0);
  x[a] = 1.0;
  for (int i = 0; i < t; ++i) {
    for (int v = 0; v < g.n; ++v) {
      double acc = 0.0;
      for (int u : g.neighbors_of(v)) acc += x[u] / g.degree(u);
      y[v] = acc;
    }
    x.swap(y);
  }
  return x;
}

}  // namespace hamexp
