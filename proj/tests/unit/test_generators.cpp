#include <doctest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "hamexp/certify.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/pipeline.hpp"
#include "hamexp/rng.hpp"
#include "hamexp/spectral.hpp"
#include "helpers.hpp"

using namespace hamexp;

namespace {
long long binom_ll(int n, int k) {
  if (k < 0 || k > n) return 0;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}
}  // namespace

TEST_CASE("kneser: Petersen and degree formula") {
  Graph p = kneser(5, 2);
  CHECK(p.n == 10);
  CHECK(p.d_min == 3);
  CHECK(p.d_max == 3);
  CHECK(!p.bipartite);

  for (auto [n, k] : std::vector<std::pair<int, int>>{{6, 2}, {7, 2}, {7, 3}, {9, 3}}) {
    Graph g = kneser(n, k);
    CHECK(g.n == binom_ll(n, k));
    CHECK(g.d_min == binom_ll(n - k, k));
    CHECK(g.d_max == g.d_min);
  }
  CHECK_THROWS_AS(kneser(4, 2), InputError);
}

TEST_CASE("kneser: spectral gap matches the closed form") {
  // K(2k+t, k): lambda/d = 1 - t/(k+t) where lambda = max(l2, -ln) * d
  for (auto [k, t] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    Graph g = kneser(2 * k + t, k);
    SpectralSummary s = spectral_summary(g, 1e-10);
    double ratio = std::max(s.lambda2, -s.lambda_n);
    CHECK(ratio == doctest::Approx(1.0 - double(t) / (k + t)).epsilon(1e-9));
  }
}

TEST_CASE("cayley: circulants and hypercubes") {
  Graph cn = cayley_abelian({7}, {{1}, {6}});
  CHECK(cn.n == 7);
  CHECK(cn.d_min == 2);
  CHECK(cn.connected());

  Graph circ = cayley_abelian({10}, {{1}, {9}, {2}, {8}});
  CHECK(circ.d_min == 4);
  CHECK(circ.d_max == 4);

  Graph q3 = cayley_abelian({2, 2, 2}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(q3.n == 8);
  CHECK(q3.d_min == 3);
  CHECK(q3.bipartite);

  // every cayley graph is regular
  Graph mixed = cayley_abelian({4, 3}, {{1, 0}, {3, 0}, {0, 1}, {0, 2}, {2, 0}});
  CHECK(mixed.d_min == mixed.d_max);

  CHECK_THROWS_AS(cayley_abelian({5}, {{1}}), InputError);          // not symmetric
  CHECK_THROWS_AS(cayley_abelian({5}, {{0}}), InputError);          // identity
  CHECK_THROWS_AS(cayley_abelian({5}, {{1}, {4}, {1}}), InputError);  // duplicate
}

TEST_CASE("percolate: edge set behaviour") {
  Graph g = random_regular(256, 8, 1);
  Graph kept = percolate(g, 1.0, 5);
  CHECK(kept.neighbors == g.neighbors);
  Graph none = percolate(g, 0.0, 5);
  CHECK(none.edge_count() == 0);
  CHECK(none.n == g.n);

  Graph half = percolate(g, 0.5, 5);
  CHECK(half.edge_count() > 0);
  CHECK(half.edge_count() < g.edge_count());
  Graph again = percolate(g, 0.5, 5);
  CHECK(again.neighbors == half.neighbors);  // seeded determinism
}

TEST_CASE("percolate: degree concentration on a regular host") {
  Graph g = random_regular(4096, 256, 3);
  Graph h = percolate(g, 0.5, 9);
  double pd = 128.0;
  double band = 10.0 * std::sqrt(pd * std::log(4096.0));
  int outliers = 0;
  for (int v = 0; v < h.n; ++v)
    if (std::abs(h.degree(v) - pd) > band) ++outliers;
  CHECK(outliers == 0);
}

TEST_CASE("random_regular: tiny exact cases and certificates") {
  Graph k4 = random_regular(4, 3, 5);
  CHECK(k4.edge_count() == 6);  // 3-regular on 4 vertices is K_4

  Graph cyc = random_regular(12, 2, 7);
  CHECK(cyc.d_min == 2);
  CHECK(cyc.d_max == 2);

  Graph g = random_regular(1024, 32, 11);
  CHECK(g.d_min == 32);
  CHECK(g.d_max == 32);
  CHECK(g.connected());
  ExpansionCertificate cert = expansion_certificate(g, 200, 3);
  CHECK(cert.rho_upper > 0);

  CHECK_THROWS_AS(random_regular(5, 3, 1), InputError);  // odd n*d
  CHECK_THROWS_AS(random_regular(4, 4, 1), InputError);  // d >= n
}

TEST_CASE("random_regular_bipartite: sides and regularity") {
  Graph g = random_regular_bipartite(512, 16, 13);
  CHECK(g.d_min == 16);
  CHECK(g.d_max == 16);
  REQUIRE(g.bipartite);
  CHECK(g.balanced_bipartition);
  // generator places parts as the two halves of the index range
  for (int v = 0; v < 256; ++v)
    for (int u : g.neighbors_of(v)) CHECK(u >= 256);
}

TEST_CASE("coset glue: two cosets on a dense circulant") {
  // Z_12 split by parity; generators keep each class complete and join them
  Graph g = cayley_abelian({12}, {{1}, {11}, {2}, {10}, {4}, {8}, {6}});
  std::vector<int> coset_of(12);
  for (int v = 0; v < 12; ++v) coset_of[v] = v % 2;
  CosetGlueResult glue = coset_euler_glue(g, coset_of, 3.0, 5);

  REQUIRE(glue.tour.size() == 3);  // doubled single tree edge
  CHECK(glue.tour.front() == glue.tour.back());
  REQUIRE(glue.matching.size() == 2);
  // matching edges are vertex-disjoint
  std::set<int> mv;
  for (auto [u, v] : glue.matching) {
    CHECK(!mv.count(u));
    CHECK(!mv.count(v));
    mv.insert(u);
    mv.insert(v);
  }
  CHECK(glue.per_coset_pairs[0].size() == 1);
  CHECK(glue.per_coset_pairs[1].size() == 1);

  // end to end: per-coset spanning paths + matching close into one cycle
  std::vector<std::vector<int>> cycle_segments;
  for (int c = 0; c < 2; ++c) {
    std::vector<int> members;
    for (int v = 0; v < 12; ++v)
      if (coset_of[v] == c) members.push_back(v);
    auto [sub, hosts] = induced_subgraph(g, members);
    std::vector<int> to_local(12, -1);
    for (size_t i = 0; i < hosts.size(); ++i) to_local[hosts[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> local_pairs;
    for (auto [a, b] : glue.per_coset_pairs[c]) local_pairs.emplace_back(to_local[a], to_local[b]);
    auto paths = exact_spanning_paths(sub, local_pairs);
    REQUIRE(paths.has_value());
    for (auto& p : *paths) {
      std::vector<int> host_path;
      for (int v : p) host_path.push_back(hosts[v]);
      cycle_segments.push_back(host_path);
    }
  }
  // assemble: alternate matching edges and coset paths
  std::vector<uint8_t> seen(12, 0);
  size_t total = 0;
  for (auto& s : cycle_segments) total += s.size();
  CHECK(total == 12);  // the two spanning paths cover everything exactly once
  for (auto& s : cycle_segments)
    for (int v : s) {
      CHECK(!seen[v]);
      seen[v] = 1;
    }
}

TEST_CASE("coset glue: four cosets end to end through the tiny exact solver") {
  // Z_24, cosets mod 4, within-coset differences {4, 8, 12} make each coset K_6
  Graph g = cayley_abelian({24}, {{1}, {23}, {4}, {20}, {8}, {16}, {12}, {2}, {22}});
  std::vector<int> coset_of(24);
  for (int v = 0; v < 24; ++v) coset_of[v] = v % 4;
  CosetGlueResult glue = coset_euler_glue(g, coset_of, 2.0, 9);
  REQUIRE(glue.tour.size() >= 2);

  // matching edges vertex-disjoint and between the right cosets
  std::set<int> mv;
  for (size_t t = 1; t < glue.tour.size(); ++t) {
    auto [u, v] = glue.matching[t - 1];
    CHECK(coset_of[u] == glue.tour[t - 1]);
    CHECK(coset_of[v] == glue.tour[t]);
    CHECK(!mv.count(u));
    CHECK(!mv.count(v));
    mv.insert(u);
    mv.insert(v);
  }

  // per-coset spanning paths exist and cover each coset
  std::vector<std::vector<int>> all_paths(24);
  std::vector<uint8_t> covered(24, 0);
  for (int c = 0; c < 4; ++c) {
    std::vector<int> members;
    for (int v = 0; v < 24; ++v)
      if (coset_of[v] == c) members.push_back(v);
    auto [sub, hosts] = induced_subgraph(g, members);
    std::vector<int> to_local(24, -1);
    for (size_t i = 0; i < hosts.size(); ++i) to_local[hosts[i]] = static_cast<int>(i);
    std::vector<std::pair<int, int>> local_pairs;
    for (auto [a, b] : glue.per_coset_pairs[c]) local_pairs.emplace_back(to_local[a], to_local[b]);
    auto paths = exact_spanning_paths(sub, local_pairs);
    REQUIRE(paths.has_value());
    for (auto& p : *paths)
      for (int v : p)
        covered[hosts[v]] = 1;
  }
  CHECK(std::accumulate(covered.begin(), covered.end(), 0) == 24);
}

TEST_CASE("coset glue: disconnected auxiliary graph is reported") {
  // two parity classes with no odd generator joining them
  Graph g = cayley_abelian({12}, {{2}, {10}, {4}, {8}, {6}});
  std::vector<int> coset_of(12);
  for (int v = 0; v < 12; ++v) coset_of[v] = v % 2;
  CHECK_THROWS_AS(coset_euler_glue(g, coset_of, 1.0, 5), ComputeError);
}

TEST_CASE("coset glue bipartite variant: structure of the mediator pairs") {
  Graph g = cayley_abelian({48}, {{1}, {47}, {2}, {46}, {3}, {45}});
  std::vector<int> coset_of(48), side_of(48);
  for (int v = 0; v < 48; ++v) {
    coset_of[v] = v % 2;
    side_of[v] = (v / 2) % 2;
  }
  CosetGlueResult glue = coset_euler_glue_bipartite(g, coset_of, side_of, 4.0, 3);
  for (int c = 0; c < 2; ++c) {
    for (auto [a, b] : glue.per_coset_pairs[c]) {
      CHECK(coset_of[a] == c);
      CHECK(coset_of[b] == c);
      CHECK(side_of[a] == 0);
      CHECK(side_of[b] == 1);
    }
    // mediators: every second endpoint repeats in consecutive pair rows
    REQUIRE(glue.per_coset_pairs[c].size() % 2 == 0);
  }
}
