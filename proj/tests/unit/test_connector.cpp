#include <doctest.h>

#include <set>

#include "hamexp/connector.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/rng.hpp"
#include "helpers.hpp"

using namespace hamexp;

namespace {

PairBatch make_batch(const Graph& g, std::vector<std::pair<int, int>> pairs, int len,
                     bool bip = false) {
  PairBatch b;
  b.pairs = std::move(pairs);
  b.length = len;
  b.bipartite_mode = bip;
  for (auto [x, y] : b.pairs) {
    b.forbidden.push_back(x);
    b.forbidden.push_back(y);
  }
  std::sort(b.forbidden.begin(), b.forbidden.end());
  b.forbidden.erase(std::unique(b.forbidden.begin(), b.forbidden.end()), b.forbidden.end());
  return b;
}

// hard invariants of a full ConnectResult
void check_result(const Graph& g, const PairBatch& batch, const ConnectResult& r) {
  REQUIRE(r.paths.size() == batch.pairs.size());
  std::set<int> forbidden(batch.forbidden.begin(), batch.forbidden.end());
  std::vector<int> internal_count(g.n, 0);
  for (size_t i = 0; i < r.paths.size(); ++i) {
    const auto& p = r.paths[i];
    REQUIRE(static_cast<int>(p.size()) == r.length + 1);
    CHECK(p.front() == batch.pairs[i].first);
    CHECK(p.back() == batch.pairs[i].second);
    CHECK(is_path_in(g, p));
    for (size_t t = 1; t + 1 < p.size(); ++t) {
      CHECK(!forbidden.count(p[t]));
      ++internal_count[p[t]];
    }
    if (batch.bipartite_mode)
      for (size_t t = 0; t < p.size(); ++t) CHECK(g.side[p[t]] == static_cast<int>(t % 2));
  }
  for (int v = 0; v < g.n; ++v) CHECK(internal_count[v] <= 1);
}

}  // namespace

TEST_CASE("one_bite: a single pair is kept iff its walk is simple") {
  Graph g = random_regular(256, 16, 1);
  REQUIRE(g.connected());
  PairBatch batch = make_batch(g, {{0, 1}}, 5);
  OneBiteOutcome out = one_bite(g, batch, 3);
  CHECK(out.kept_indices.size() + out.leftover_indices.size() == 1);
  if (!out.kept_indices.empty()) {
    CHECK(out.kept_paths[0].front() == 0);
    CHECK(out.kept_paths[0].back() == 1);
    CHECK(is_path_in(g, out.kept_paths[0]));
  }
}

TEST_CASE("one_bite: pairs in far-apart components are both kept") {
  // two disjoint 16-cliques; conditioned walks never collide across them
  std::vector<std::pair<int, int>> edges;
  for (int base : {0, 16})
    for (int u = 0; u < 16; ++u)
      for (int v = u + 1; v < 16; ++v) edges.emplace_back(base + u, base + v);
  Graph g = Graph::from_edges(32, edges);
  PairBatch batch = make_batch(g, {{0, 1}, {16, 17}}, 3);
  OneBiteOutcome out = one_bite(g, batch, 5);
  CHECK(out.kept_indices.size() == 2);
}

TEST_CASE("connect: unique geodesic on a cycle") {
  Graph c12 = cycle_graph(12);
  PairBatch batch = make_batch(c12, {{0, 5}}, 5);
  ConnectResult r = connect(c12, batch, ConnectorConfig{}, 7);
  CHECK(r.paths[0] == std::vector<int>{0, 1, 2, 3, 4, 5});
}

TEST_CASE("connect: empty batch") {
  Graph g = cycle_graph(8);
  PairBatch batch = make_batch(g, {}, 5);
  ConnectResult r = connect(g, batch, ConnectorConfig{}, 7);
  CHECK(r.paths.empty());
}

TEST_CASE("connect: even length is rounded up and flagged") {
  Graph g = random_regular(512, 16, 2);
  REQUIRE(g.connected());
  PairBatch batch = make_batch(g, {{0, 1}, {2, 3}}, 6);
  ConnectResult r = connect(g, batch, ConnectorConfig{}, 7);
  CHECK(r.length_adjusted);
  CHECK(r.length == 7);
  check_result(g, batch, r);
}

TEST_CASE("connect: hard invariants on random instances, both modes") {
  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    bool bip = trial % 2 == 1;
    Graph g = bip ? random_regular_bipartite(1024, 24, trial) : random_regular(1024, 24, trial);
    REQUIRE(g.connected());
    std::vector<std::pair<int, int>> pairs;
    std::set<int> used;
    Rng prng = rng.child(trial);
    while (pairs.size() < 12) {
      int a = prng.uniform_int(g.n), b = prng.uniform_int(g.n);
      if (a == b || used.count(a) || used.count(b)) continue;
      if (bip) {
        if (g.side[a] == g.side[b]) continue;
        if (g.side[a] != 0) std::swap(a, b);
      }
      used.insert(a);
      used.insert(b);
      pairs.emplace_back(a, b);
    }
    PairBatch batch = make_batch(g, pairs, bip ? 7 : 9, bip);
    ConnectResult r = connect(g, batch, ConnectorConfig{}, 1000 + trial);
    check_result(g, batch, r);
    CHECK(static_cast<int>(r.layer_reports.size()) == r.length - 1);
  }
}

TEST_CASE("connect: determinism under a fixed seed") {
  Graph g = random_regular(512, 16, 9);
  REQUIRE(g.connected());
  PairBatch batch = make_batch(g, {{0, 1}, {2, 3}, {4, 5}, {6, 7}}, 7);
  ConnectResult r1 = connect(g, batch, ConnectorConfig{}, 123);
  ConnectResult r2 = connect(g, batch, ConnectorConfig{}, 123);
  CHECK(r1.paths == r2.paths);
  CHECK(r1.kept_rounds == r2.kept_rounds);
}

TEST_CASE("last_step: single simple pair is kept") {
  Graph g = random_regular(256, 16, 11);
  REQUIRE(g.connected());
  PairBatch batch = make_batch(g, {{0, 1}}, 5);
  LastStepOutcome out = last_step(g, batch, 1, 5);
  CHECK(out.paths.size() == 1);
  CHECK(is_path_in(g, out.paths[0]));
}

TEST_CASE("last_step: forced failure raises NoSurvivingCopy") {
  // K_3 with both non-endpoint routes blocked: inner length-1 walks from the
  // single live neighbour to itself cannot exist
  Graph k3 = complete_graph(3);
  PairBatch batch = make_batch(k3, {{0, 1}}, 3);
  CHECK_THROWS_AS(last_step(k3, batch, 4, 5), NoSurvivingCopy);
}

TEST_CASE("keep rate is sane on a mid-size instance") {
  Graph g = random_regular(2048, 64, 5);
  REQUIRE(g.connected());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < 40; ++i) pairs.emplace_back(2 * i, 2 * i + 1);
  PairBatch batch = make_batch(g, pairs, 9);
  OneBiteOutcome out = one_bite(g, batch, 31);
  CHECK(out.sampled == 40);
  CHECK(out.kept_indices.size() >= 5);  // q = e^{-100*40/2048} ~ 0.14
}

TEST_CASE("dummy pairs: greedy load flattening") {
  Graph g = random_regular(128, 8, 3);
  PairBatch batch = make_batch(g, {{0, 1}, {2, 3}}, 5);
  CHECK(dummy_pairs(g, 4, batch, 0).empty());

  auto dps = dummy_pairs(g, 4, batch, 6);
  CHECK(dps.size() == 6);
  for (const auto& dp : dps) {
    CHECK(dp.a_set.size() == 4);
    CHECK(dp.b_set.size() == 4);
  }
  // replaying the greedy: the load spread never grows
  std::vector<long long> load(g.n, 0);
  for (auto [a, b] : batch.pairs)
    for (int u : g.neighbors_of(a)) ++load[u];
  auto spread = [&](const std::vector<long long>& l) {
    long long lo = l[0], hi = l[0];
    for (long long v : l) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    return hi - lo;
  };
  long long before = spread(load);
  for (const auto& dp : dps)
    for (int v : dp.a_set) ++load[v];
  CHECK(spread(load) <= before + 1);
}
