#include "hamexp/absorber.hpp"

#include <algorithm>
#include <set>

#include "hamexp/error.hpp"
#include "hamexp/matching.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

namespace {

void append_seq(std::vector<int>& out, const std::vector<int>& seq, bool reversed) {
  if (reversed)
    out.insert(out.end(), seq.rbegin(), seq.rend());
  else
    out.insert(out.end(), seq.begin(), seq.end());
}

}  // namespace

std::vector<int> Gadget::vertex_set() const {
  std::vector<int> out(q1);
  out.insert(out.end(), q2.begin(), q2.end());
  for (const auto& p : cross) out.insert(out.end(), p.begin(), p.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Both template walks share the skeleton: traverse cross[0] away from x, then
// alternate between forward and reversed cross paths, which implicitly rides
// the q1/q2 edges joining consecutive anchor vertices.
std::vector<int> Gadget::with_template() const {
  const int L = ell();
  std::vector<int> out;
  append_seq(out, cross[0], false);  // x .. v1
  out.push_back(a);
  for (int i = 2; i <= L - 1; ++i) append_seq(out, cross[i - 1], i % 2 != 0);
  if (pair_form()) {
    out.push_back(b);
    append_seq(out, cross[L - 1], false);  // u_{L-1} .. y
  } else {
    out.push_back(q1[L - 1]);
    out.push_back(y);
  }
  return out;
}

std::vector<int> Gadget::without_template() const {
  const int L = ell();
  std::vector<int> out;
  append_seq(out, cross[0], false);
  for (int i = 2; i <= L - 1; ++i) append_seq(out, cross[i - 1], i % 2 == 0);
  if (pair_form()) {
    append_seq(out, cross[L - 1], false);
  } else {
    out.push_back(q1[L - 1]);
    out.push_back(y);
  }
  return out;
}

void verify_gadget(const Graph& g, const Gadget& gadget) {
  const int L = gadget.ell();
  if (L < 3 || L % 2 == 0) throw InvariantError("gadget: ell must be odd and >= 3");
  auto expect = [&](bool ok, const char* what) {
    if (!ok) throw InvariantError(std::string("gadget: ") + what);
  };
  expect(gadget.q1.front() == gadget.a, "q1 must start at a");
  expect(gadget.q2.front() == gadget.a, "q2 must start at a");
  if (gadget.pair_form()) {
    expect(gadget.q1.back() == gadget.b && gadget.q2.back() == gadget.b, "q paths must end at b");
    expect(static_cast<int>(gadget.cross.size()) == L, "pair gadget needs L cross paths");
  } else {
    expect(gadget.q1.back() == gadget.y, "q1 must end at y");
    expect(gadget.q2.back() == gadget.q1[L - 1], "q2 must end at q1[L-1]");
    expect(static_cast<int>(gadget.cross.size()) == L - 1, "vertex gadget needs L-1 cross paths");
  }
  expect(is_path_in(g, gadget.q1), "q1 is not a path");
  expect(is_path_in(g, gadget.q2), "q2 is not a path");
  expect(gadget.cross[0].front() == gadget.x, "cross[0] must start at x");
  expect(gadget.cross[0].back() == gadget.q2[1], "cross[0] must end at v1");
  for (int i = 2; i <= L - 1; ++i) {
    const auto& p = gadget.cross[i - 1];
    expect(p.front() == gadget.q1[i - 1], "cross path must start at u_{i-1}");
    expect(p.back() == gadget.q2[i], "cross path must end at v_i");
  }
  if (gadget.pair_form()) {
    expect(gadget.cross[L - 1].front() == gadget.q1[L - 1], "last cross must start at u_{L-1}");
    expect(gadget.cross[L - 1].back() == gadget.y, "last cross must end at y");
  }
  for (const auto& p : gadget.cross) expect(is_path_in(g, p), "cross path invalid");

  std::vector<int> vh = gadget.vertex_set();
  auto check_template = [&](const std::vector<int>& t, bool with) {
    expect(is_path_in(g, t), with ? "with-template not a path" : "without-template not a path");
    expect(t.front() == gadget.x && t.back() == gadget.y, "template endpoints wrong");
    std::vector<int> tv(t);
    std::sort(tv.begin(), tv.end());
    std::vector<int> want(vh);
    if (!with) {
      auto drop = [&](int v) {
        want.erase(std::lower_bound(want.begin(), want.end(), v));
      };
      drop(gadget.a);
      if (gadget.pair_form()) drop(gadget.b);
    }
    expect(tv == want, "template vertex set wrong");
  };
  check_template(gadget.with_template(), true);
  check_template(gadget.without_template(), false);
}

namespace {

// Round scaffolding shared by the single-gadget builders and build_absorber.
// Anchors are fixed; the connector fills q1, q2 and the cross paths in three
// batched rounds with a growing forbidden set.
struct GadgetPlan {
  std::vector<Gadget> gadgets;  // anchors set; paths empty
};

void run_rounds(const Graph& g, GadgetPlan& plan, const std::vector<int>& base_forbidden,
                int ell, bool bipartite, const ConnectorConfig& conn, uint64_t seed) {
  Rng rng(seed);
  std::vector<int> forbidden(base_forbidden);
  auto extend_forbidden = [&](const std::vector<int>& path, bool internal_only) {
    size_t lo = internal_only ? 1 : 0;
    size_t hi = internal_only ? path.size() - 1 : path.size();
    for (size_t i = lo; i < hi; ++i) forbidden.push_back(path[i]);
  };
  auto dedupe = [&]() {
    std::sort(forbidden.begin(), forbidden.end());
    forbidden.erase(std::unique(forbidden.begin(), forbidden.end()), forbidden.end());
  };
  dedupe();

  // round 1: q1 per gadget
  {
    PairBatch batch;
    batch.length = ell;
    batch.bipartite_mode = bipartite;
    batch.forbidden = forbidden;
    for (const auto& gd : plan.gadgets)
      batch.pairs.emplace_back(gd.a, gd.pair_form() ? gd.b : gd.y);
    ConnectResult r1 = connect(g, batch, conn, rng.child(1).next_u64());
    for (size_t i = 0; i < plan.gadgets.size(); ++i) {
      plan.gadgets[i].q1 = r1.paths[i];
      extend_forbidden(r1.paths[i], true);
    }
    dedupe();
  }

  // round 2: q2 per gadget (vertex form targets q1[L-1])
  {
    PairBatch batch;
    batch.length = ell;
    batch.bipartite_mode = bipartite;
    batch.forbidden = forbidden;
    for (const auto& gd : plan.gadgets)
      batch.pairs.emplace_back(gd.a, gd.pair_form() ? gd.b : gd.q1[ell - 1]);
    ConnectResult r2 = connect(g, batch, conn, rng.child(2).next_u64());
    for (size_t i = 0; i < plan.gadgets.size(); ++i) {
      plan.gadgets[i].q2 = r2.paths[i];
      extend_forbidden(r2.paths[i], true);
    }
    dedupe();
  }

  // round 3: cross paths, batched over all gadgets
  {
    PairBatch batch;
    batch.length = ell;
    batch.bipartite_mode = bipartite;
    batch.forbidden = forbidden;
    for (const auto& gd : plan.gadgets) {
      batch.pairs.emplace_back(gd.x, gd.q2[1]);
      for (int j = 2; j <= ell - 1; ++j) {
        // orient each pair so bipartite parity holds: the V0 endpoint first
        int from = gd.q1[j - 1];
        int to = gd.q2[j];
        if (bipartite && g.side[from] != 0) std::swap(from, to);
        batch.pairs.emplace_back(from, to);
      }
      if (gd.pair_form()) batch.pairs.emplace_back(gd.q1[ell - 1], gd.y);
    }
    ConnectResult r3 = connect(g, batch, conn, rng.child(3).next_u64());
    const int per = static_cast<int>(batch.pairs.size()) / static_cast<int>(plan.gadgets.size());
    for (size_t i = 0; i < plan.gadgets.size(); ++i) {
      auto& gd = plan.gadgets[i];
      gd.cross.clear();
      for (int j = 0; j < per; ++j) {
        std::vector<int> path = r3.paths[i * per + j];
        // store cross[0] from x, interior ones from u_{j-1}, last from u_{L-1}
        int want_front = (j == 0) ? gd.x : (gd.pair_form() && j == per - 1 ? gd.q1[ell - 1]
                                                                           : gd.q1[j]);
        if (path.front() != want_front) std::reverse(path.begin(), path.end());
        gd.cross.push_back(std::move(path));
      }
    }
  }

  for (const auto& gd : plan.gadgets) verify_gadget(g, gd);
}

}  // namespace

Gadget build_xay(const Graph& g, int x, int a, int y, int ell, const std::vector<int>& forbidden,
                 uint64_t seed) {
  if (x == a || a == y || x == y) throw InputError("build_xay: x, a, y must be distinct");
  if (ell < 3 || ell % 2 == 0) throw InputError("build_xay: ell must be odd and >= 3");
  GadgetPlan plan;
  Gadget gd;
  gd.x = x;
  gd.a = a;
  gd.y = y;
  plan.gadgets.push_back(gd);
  std::vector<int> base(forbidden);
  base.insert(base.end(), {x, a, y});
  run_rounds(g, plan, base, ell, false, ConnectorConfig{}, seed);
  return plan.gadgets[0];
}

Gadget build_xaby(const Graph& g, int x, int a, int b, int y, int ell,
                  const std::vector<int>& forbidden, uint64_t seed) {
  std::set<int> distinct = {x, a, b, y};
  if (distinct.size() != 4) throw InputError("build_xaby: x, a, b, y must be distinct");
  if (ell < 3 || ell % 2 == 0) throw InputError("build_xaby: ell must be odd and >= 3");
  GadgetPlan plan;
  Gadget gd;
  gd.x = x;
  gd.a = a;
  gd.b = b;
  gd.y = y;
  plan.gadgets.push_back(gd);
  std::vector<int> base(forbidden);
  base.insert(base.end(), {x, a, b, y});
  bool bip = g.bipartite && g.side[a] == 0 && g.side[b] == 1 && g.side[x] == 0 && g.side[y] == 1;
  run_rounds(g, plan, base, ell, bip, ConnectorConfig{}, seed);
  return plan.gadgets[0];
}

std::vector<int> MatchTemplate::robust_matching(const std::vector<uint8_t>& drop_a,
                                                const std::vector<uint8_t>& drop_b) const {
  const int side = side_size();
  // left = surviving A vertices, right = surviving B vertices
  std::vector<int> a_id(side, -1), b_id(side, -1);
  int na = 0, nb = 0;
  for (int v = 0; v < side; ++v) {
    if (!(in_a1(v) && drop_a[v])) a_id[v] = na++;
    if (!(in_a1(v) && drop_b[v])) b_id[v] = nb++;
  }
  if (na != nb) return {};
  std::vector<std::vector<int>> adj(na);
  std::vector<std::vector<int>> edge_of(na);
  for (size_t e = 0; e < edges.size(); ++e) {
    auto [a, b] = edges[e];
    if (a_id[a] < 0 || b_id[b] < 0) continue;
    adj[a_id[a]].push_back(b_id[b]);
    edge_of[a_id[a]].push_back(static_cast<int>(e));
  }
  BipartiteMatching m = hopcroft_karp(na, nb, adj);
  if (m.size != na) return {};
  // translate vertex matching back into concrete (possibly parallel) edges
  std::vector<int> chosen;
  chosen.reserve(na);
  for (int l = 0; l < na; ++l) {
    int r = m.match_left[l];
    int found = -1;
    for (size_t i = 0; i < adj[l].size(); ++i)
      if (adj[l][i] == r) {
        found = edge_of[l][i];
        break;
      }
    if (found < 0) return {};
    chosen.push_back(found);
  }
  return chosen;
}

MatchTemplate build_match_template(int m, uint64_t seed, int regularity, int verify_samples,
                                   int retries) {
  if (m < 1) throw InputError("build_match_template: m >= 1 required");
  if (regularity < 1 || regularity % 2 == 0)
    throw InputError("build_match_template: regularity must be odd and >= 1");
  Rng rng(seed);
  const int side = 7 * m;

  auto verify = [&](const MatchTemplate& K) -> bool {
    auto check = [&](const std::vector<int>& a1_drop, const std::vector<int>& b1_drop) {
      std::vector<uint8_t> da(side, 0), db(side, 0);
      for (int v : a1_drop) da[v] = 1;
      for (int v : b1_drop) db[v] = 1;
      return !K.robust_matching(da, db).empty();
    };
    if (m <= 3) {
      // all A1', B1' with |A1'| = |B1'| >= m, phrased as dropped complements
      const int a1 = 2 * m;
      std::vector<std::vector<int>> drops_by_size(a1 + 1);
      for (uint32_t mask = 0; mask < (1u << a1); ++mask) {
        int sz = __builtin_popcount(mask);
        if (sz > m) continue;  // keep >= m means drop <= m
        std::vector<int> drop;
        for (int v = 0; v < a1; ++v)
          if (mask >> v & 1u) drop.push_back(v);
        for (uint32_t mask2 = 0; mask2 < (1u << a1); ++mask2) {
          if (__builtin_popcount(mask2) != sz) continue;
          std::vector<int> drop2;
          for (int v = 0; v < a1; ++v)
            if (mask2 >> v & 1u) drop2.push_back(v);
          if (!check(drop, drop2)) return false;
        }
      }
      return true;
    }
    for (int trial = 0; trial < verify_samples; ++trial) {
      int k = static_cast<int>(rng.uniform(m + 1));  // drop size, keep = 2m - k >= m
      std::vector<int> drop = rng.sample_indices(2 * m, k);
      std::vector<int> drop2 = rng.sample_indices(2 * m, k);
      if (!check(drop, drop2)) return false;
    }
    return true;
  };

  for (int attempt = 0; attempt < retries; ++attempt) {
    MatchTemplate K;
    K.m = m;
    K.regularity = regularity;
    std::vector<int> perm(side);
    for (int r = 0; r < regularity; ++r) {
      for (int i = 0; i < side; ++i) perm[i] = i;
      rng.shuffle(perm);
      for (int i = 0; i < side; ++i) K.edges.emplace_back(i, perm[i]);
    }
    if (verify(K)) return K;
  }
  throw TemplateDefect("build_match_template: verification failed after retries");
}

Absorber build_absorber(const Graph& g, const AbsorberParams& params,
                        const std::vector<int>& forbidden, uint64_t seed) {
  if (params.ell < 3 || params.ell % 2 == 0)
    throw InputError("build_absorber: ell must be odd and >= 3");
  Rng rng(seed);
  Absorber abs;
  abs.kind = params.kind;
  abs.host = &g;

  std::vector<uint8_t> avoid(g.n, 0);
  for (int v : forbidden) {
    if (v < 0 || v >= g.n) throw InputError("build_absorber: forbidden vertex out of range");
    avoid[v] = 1;
  }

  GadgetPlan plan;
  std::vector<int> base(forbidden);

  if (params.kind == AbsorberKind::General) {
    const int m = params.reservoir_size;
    if (m < 1) throw InputError("build_absorber: reservoir_size >= 1 required");
    std::vector<int> pool;
    for (int v = 0; v < g.n; ++v)
      if (!avoid[v]) pool.push_back(v);
    if (static_cast<int>(pool.size()) < 2 * m + 1)
      throw InputError("build_absorber: not enough free vertices");
    Rng pick = rng.child(11);
    pick.shuffle(pool);
    abs.reservoir.assign(pool.begin(), pool.begin() + m);
    std::vector<int> xs(pool.begin() + m, pool.begin() + 2 * m + 1);
    abs.x_endpoint = xs.front();
    abs.y_endpoint = xs.back();
    for (int i = 0; i < m; ++i) {
      Gadget gd;
      gd.a = abs.reservoir[i];
      gd.x = xs[i];
      gd.y = xs[i + 1];
      plan.gadgets.push_back(gd);
    }
    base.insert(base.end(), abs.reservoir.begin(), abs.reservoir.end());
    base.insert(base.end(), xs.begin(), xs.end());
    run_rounds(g, plan, base, params.ell, false, params.connector, rng.child(12).next_u64());
  } else {
    if (!g.bipartite) throw InputError("build_absorber: bipartite kind needs a bipartite host");
    const int m0 = params.m0;
    if (m0 < 1) throw InputError("build_absorber: m0 >= 1 required");
    abs.tmpl = build_match_template(m0, rng.child(13).next_u64(), params.template_regularity,
                                    params.template_verify_samples, params.template_retries);
    const int m1 = static_cast<int>(abs.tmpl.edges.size());
    if (m1 % 2 == 0) throw InputError("build_absorber: template edge count must be odd");
    const int m_x = (m1 + 1) / 2;
    const int side = abs.tmpl.side_size();

    std::vector<int> pool0, pool1;
    for (int v = 0; v < g.n; ++v) {
      if (avoid[v]) continue;
      (g.side[v] == 0 ? pool0 : pool1).push_back(v);
    }
    if (static_cast<int>(pool0.size()) < side + m_x || static_cast<int>(pool1.size()) < side + m_x)
      throw InputError("build_absorber: not enough free vertices per side");
    Rng pick = rng.child(14);
    pick.shuffle(pool0);
    pick.shuffle(pool1);
    abs.a_side_hosts.assign(pool0.begin(), pool0.begin() + side);
    abs.b_side_hosts.assign(pool1.begin(), pool1.begin() + side);
    std::vector<int> xs(pool0.begin() + side, pool0.begin() + side + m_x);
    std::vector<int> ys(pool1.begin() + side, pool1.begin() + side + m_x);
    abs.x_endpoint = xs.front();
    abs.y_endpoint = ys.back();
    // R = A1 union B1
    for (int i = 0; i < 2 * m0; ++i) abs.reservoir.push_back(abs.a_side_hosts[i]);
    for (int i = 0; i < 2 * m0; ++i) abs.reservoir.push_back(abs.b_side_hosts[i]);

    for (int i = 0; i < m1; ++i) {
      Gadget gd;
      gd.a = abs.a_side_hosts[abs.tmpl.edges[i].first];
      gd.b = abs.b_side_hosts[abs.tmpl.edges[i].second];
      gd.x = xs[(i + 1) / 2];  // 1-based floor(i/2)+1
      gd.y = ys[i / 2];        // 1-based ceil(i/2)
      plan.gadgets.push_back(gd);
    }
    base.insert(base.end(), abs.a_side_hosts.begin(), abs.a_side_hosts.end());
    base.insert(base.end(), abs.b_side_hosts.begin(), abs.b_side_hosts.end());
    base.insert(base.end(), xs.begin(), xs.end());
    base.insert(base.end(), ys.begin(), ys.end());
    run_rounds(g, plan, base, params.ell, true, params.connector, rng.child(15).next_u64());
  }

  abs.gadgets = std::move(plan.gadgets);

  // V(H) and the pairwise-disjoint-internals check
  std::vector<int> counts(g.n, 0);
  for (const auto& gd : abs.gadgets)
    for (int v : gd.vertex_set()) ++counts[v];
  std::vector<uint8_t> anchor(g.n, 0);
  for (const auto& gd : abs.gadgets) {
    // chain joints and reservoir anchors are shared between gadgets
    anchor[gd.x] = anchor[gd.y] = anchor[gd.a] = 1;
    if (gd.b >= 0) anchor[gd.b] = 1;
  }
  for (int v = 0; v < g.n; ++v) {
    if (counts[v] > 1 && !anchor[v])
      throw InvariantError("build_absorber: gadget internals overlap");
    if (counts[v] > 0) abs.vertex_set.push_back(v);
  }
  abs.vh_report = uniformity(g, abs.vertex_set, UniformitySide::Whole);
  abs.alpha_warning = abs.vh_report.alpha_observed > params.alpha_warn;
  return abs;
}

std::vector<int> absorb(const Absorber& abs, const std::vector<int>& r_prime) {
  const Graph& g = *abs.host;
  std::vector<uint8_t> in_r(g.n, 0);
  for (int v : abs.reservoir) in_r[v] = 1;
  std::vector<uint8_t> drop(g.n, 0);
  for (int v : r_prime) {
    if (v < 0 || v >= g.n || !in_r[v]) throw InputError("absorb: R' must be a subset of R");
    drop[v] = 1;
  }

  std::vector<std::vector<int>> pieces;
  pieces.reserve(abs.gadgets.size());

  if (abs.kind == AbsorberKind::General) {
    for (const auto& gd : abs.gadgets)
      pieces.push_back(drop[gd.a] ? gd.without_template() : gd.with_template());
  } else {
    if (r_prime.size() * 2 > abs.reservoir.size())
      throw InputError("absorb: |R'| <= |R|/2 required in the bipartite form");
    long long c0 = 0, c1 = 0;
    for (int v : r_prime) (g.side[v] == 0 ? c0 : c1)++;
    if (c0 != c1) throw InputError("absorb: R' must be balanced in the bipartite form");

    const int side = abs.tmpl.side_size();
    std::vector<uint8_t> drop_a(side, 0), drop_b(side, 0);
    for (int local = 0; local < 2 * abs.tmpl.m; ++local) {
      if (drop[abs.a_side_hosts[local]]) drop_a[local] = 1;
      if (drop[abs.b_side_hosts[local]]) drop_b[local] = 1;
    }
    std::vector<int> matched_edges = abs.tmpl.robust_matching(drop_a, drop_b);
    if (matched_edges.empty())
      throw TemplateDefect("absorb: robust template failed to produce a matching");
    std::vector<uint8_t> in_matching(abs.gadgets.size(), 0);
    for (int e : matched_edges) in_matching[e] = 1;
    for (size_t i = 0; i < abs.gadgets.size(); ++i)
      pieces.push_back(in_matching[i] ? abs.gadgets[i].with_template()
                                      : abs.gadgets[i].without_template());
    // chain alternates orientation: P1, reverse(P2), P3, ...
    for (size_t i = 1; i < pieces.size(); i += 2)
      std::reverse(pieces[i].begin(), pieces[i].end());
  }

  std::vector<int> path;
  for (size_t i = 0; i < pieces.size(); ++i) {
    if (i == 0) {
      path = pieces[0];
    } else {
      if (path.back() != pieces[i].front())
        throw InvariantError("absorb: chain joint mismatch");
      path.insert(path.end(), pieces[i].begin() + 1, pieces[i].end());
    }
  }

  // verify: x..y path with vertex set exactly V(H) \ R'
  if (path.front() != abs.x_endpoint || path.back() != abs.y_endpoint)
    throw InvariantError("absorb: endpoints wrong");
  if (!is_path_in(g, path)) throw InvariantError("absorb: output is not a path");
  std::vector<int> got(path);
  std::sort(got.begin(), got.end());
  std::vector<int> want;
  for (int v : abs.vertex_set)
    if (!drop[v]) want.push_back(v);
  if (got != want) throw InvariantError("absorb: vertex set mismatch");
  return path;
}

}  // namespace hamexp
