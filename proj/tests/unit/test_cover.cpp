#include <doctest.h>

#include <set>

#include "hamexp/cover.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/rng.hpp"
#include "helpers.hpp"

using namespace hamexp;

namespace {

void check_forest(const Graph& g, const LinearForest& f) {
  std::set<int> seen;
  for (const auto& p : f.paths) {
    REQUIRE(!p.empty());
    for (size_t i = 0; i + 1 < p.size(); ++i) CHECK(g.has_edge(p[i], p[i + 1]));
    for (int v : p) {
      CHECK(!seen.count(v));
      seen.insert(v);
    }
  }
}

}  // namespace

TEST_CASE("linear_forest: a perfect matching host leaves every vertex an endpoint") {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < 6; ++i) edges.emplace_back(2 * i, 2 * i + 1);
  Graph g = Graph::from_edges(12, edges);
  std::vector<int> V(12);
  for (int i = 0; i < 12; ++i) V[i] = i;
  ForestReport rep;
  LinearForest f = linear_forest(g, V, 2, 3, &rep);
  check_forest(g, f);
  // all paths have at most one edge, so every covered vertex is an endpoint
  CHECK(rep.low_degree_count == 12);
}

TEST_CASE("linear_forest: C_n with two random halves") {
  Graph g = cycle_graph(16);
  std::vector<int> V(16);
  for (int i = 0; i < 16; ++i) V[i] = i;
  ForestReport rep;
  LinearForest f = linear_forest(g, V, 2, 5, &rep);
  check_forest(g, f);
  CHECK(!f.paths.empty());
  // every vertex of V appears (singletons included)
  CHECK(f.covered().size() == 16);
}

TEST_CASE("linear_forest: leftover shrinks with more layers on a dense host") {
  Graph g = random_regular(512, 48, 7);
  REQUIRE(g.connected());
  std::vector<int> V(g.n);
  for (int i = 0; i < g.n; ++i) V[i] = i;
  ForestReport rep;
  LinearForest f = linear_forest(g, V, 6, 11, &rep);
  check_forest(g, f);
  CHECK(f.covered().size() == static_cast<size_t>(g.n));
  // most vertices are interior when layers are thick
  CHECK(rep.low_degree_count < g.n / 2);
  CHECK_THROWS_AS(linear_forest(g, V, 1, 0, nullptr), InputError);
}

TEST_CASE("large_linear_forest: cycle, empty, star") {
  Graph c10 = cycle_graph(10);
  LinearForest f = large_linear_forest(c10, 2);
  check_forest(c10, f);
  CHECK(f.edge_total() >= 5);  // >= e/Delta = 10/2

  Graph empty = Graph::from_edges(4, {});
  CHECK(large_linear_forest(empty, 3).paths.empty());

  Graph star = Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}});
  LinearForest sf = large_linear_forest(star, 3);
  check_forest(star, sf);
  CHECK(sf.paths.size() == 1);
  CHECK(sf.edge_total() >= 1);
}

TEST_CASE("large_linear_forest: e/Delta bound on random graphs") {
  Rng rng(19);
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = testing::random_connected_graph(8 + rng.uniform_int(20), 0.3, rng);
    LinearForest f = large_linear_forest(g, g.d_max);
    check_forest(g, f);
    CHECK(f.edge_total() * g.d_max >= g.edge_count());
  }
  CHECK_THROWS_AS(large_linear_forest(complete_graph(5), 3), InputError);
}

TEST_CASE("max cut local search: fixed points and known optima") {
  // bipartite: the proper 2-colouring is returned unchanged
  Graph c8 = cycle_graph(8);
  MaxCutResult bip = max_cut_local_search(c8, 5);
  CHECK(bip.cut_edges == c8.edge_count());

  MaxCutResult k4 = max_cut_local_search(complete_graph(4), 5);
  CHECK(k4.cut_edges == 4);
  CHECK(k4.a_side.size() == 2);

  MaxCutResult c5 = max_cut_local_search(cycle_graph(5), 5);
  CHECK(c5.cut_edges == 4);
}

TEST_CASE("max cut local search: every vertex prefers its side") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Graph g = testing::random_connected_graph(20 + rng.uniform_int(20), 0.2, rng);
    MaxCutResult cut = max_cut_local_search(g, trial);
    std::vector<int> side(g.n, 0);
    for (int v : cut.b_side) side[v] = 1;
    for (int v = 0; v < g.n; ++v) {
      int cross = 0;
      for (int u : g.neighbors_of(v))
        if (side[u] != side[v]) ++cross;
      CHECK(2 * cross >= g.degree(v));
    }
  }
}

TEST_CASE("clean_up_forest: balanced input with no bad vertices allows an empty forest") {
  Graph g = random_regular_bipartite(64, 20, 3);
  REQUIRE(g.connected());
  LinearForest f = clean_up_forest(g, g.part(0), g.part(1), {}, 1);
  CHECK(f.paths.empty());
}

TEST_CASE("clean_up_forest: one-vertex imbalance produces a single B-edge path") {
  // take a 20-regular bipartite graph and move one A vertex to B by
  // relabeling: build instead a regular-ish instance via a custom host
  Graph g = random_regular(60, 30, 5);
  REQUIRE(g.connected());
  REQUIRE(g.d_min == g.d_max);
  MaxCutResult cut = max_cut_local_search(g, 7);
  std::vector<int> A = cut.a_side, B = cut.b_side;
  if (A.size() > B.size()) std::swap(A, B);
  long long imbalance = static_cast<long long>(B.size()) - static_cast<long long>(A.size());
  if (imbalance > g.d_max / 10) return;  // unlucky cut; the property is covered below
  LinearForest f = clean_up_forest(g, A, B, {}, 1);
  // postconditions are asserted inside; spot-check LF1 here
  std::vector<int> side(g.n, 0);
  for (int v : B) side[v] = 1;
  for (const auto& p : f.paths) CHECK(side[p.front()] != side[p.back()]);
  CHECK(f.edge_total() >= imbalance);
}

TEST_CASE("clean_up_forest: X vertices become interior") {
  Graph g = random_regular(80, 40, 9);
  REQUIRE(g.connected());
  MaxCutResult cut = max_cut_local_search(g, 11);
  std::vector<int> A = cut.a_side, B = cut.b_side;
  if (A.size() > B.size()) std::swap(A, B);
  std::vector<int> X = {A[0], B[0]};
  if (static_cast<long long>(X.size()) + static_cast<long long>(B.size() - A.size()) >
      g.d_max / 10)
    return;
  LinearForest f = clean_up_forest(g, A, B, X, 2);
  std::set<int> interior;
  for (const auto& p : f.paths)
    for (size_t i = 1; i + 1 < p.size(); ++i) interior.insert(p[i]);
  for (int v : X) CHECK(interior.count(v));
  CHECK(static_cast<long long>(f.covered().size()) <=
        4 * (static_cast<long long>(X.size()) + static_cast<long long>(B.size() - A.size())));
}

TEST_CASE("clean_up_forest: precondition violations throw") {
  Graph g = random_regular_bipartite(32, 10, 3);
  auto A = g.part(0);
  auto B = g.part(1);
  std::vector<int> big_x(A.begin(), A.begin() + 5);  // 5 > d/10 = 1
  CHECK_THROWS_AS(clean_up_forest(g, A, B, big_x, 0), InputError);
  Graph irregular = Graph::from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 2}});
  CHECK_THROWS_AS(clean_up_forest(irregular, {0, 1}, {2, 3}, {}, 0), InputError);
}
