#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/graph.hpp"
#include "hamexp/rng.hpp"
#include "helpers.hpp"

using namespace hamexp;

namespace {
std::string write_temp(const std::string& content) {
  static int counter = 0;
  std::string path = "test_graph_tmp_" + std::to_string(counter++) + ".el";
  std::ofstream out(path);
  out << content;
  return path;
}
}  // namespace

TEST_CASE("edge list: C_5 loads as the 2-regular cycle") {
  auto path = write_temp("5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
  Graph g = load_graph(path);
  CHECK(g.n == 5);
  CHECK(g.edge_count() == 5);
  CHECK(g.d_min == 2);
  CHECK(g.d_max == 2);
  CHECK(g.connected());
  std::remove(path.c_str());
}

TEST_CASE("edge list: comments and whitespace") {
  auto path = write_temp("# a triangle\n3 3\n0 1  # first\n\n1 2\n0 2\n");
  Graph g = load_graph(path);
  CHECK(g.n == 3);
  CHECK(g.edge_count() == 3);
  std::remove(path.c_str());
}

TEST_CASE("edge list: Petersen round trip") {
  Graph p = petersen();
  CHECK(p.n == 10);
  CHECK(p.d_min == 3);
  CHECK(p.d_max == 3);
  save_graph(p, "petersen_tmp.el");
  Graph q = load_graph("petersen_tmp.el");
  CHECK(q.neighbors == p.neighbors);
  CHECK(q.offsets == p.offsets);
  std::remove("petersen_tmp.el");
}

TEST_CASE("edge list: rejected inputs") {
  auto self_loop = write_temp("2 1\n0 0\n");
  CHECK_THROWS_AS(load_graph(self_loop), InputError);
  std::remove(self_loop.c_str());

  auto dup = write_temp("3 2\n0 1\n1 0\n");
  CHECK_THROWS_AS(load_graph(dup), InputError);
  std::remove(dup.c_str());

  auto range = write_temp("3 1\n0 5\n");
  CHECK_THROWS_AS(load_graph(range), InputError);
  std::remove(range.c_str());

  auto garbage = write_temp("3 1\nzero one\n");
  CHECK_THROWS_AS(load_graph(garbage), InputError);
  std::remove(garbage.c_str());

  CHECK_THROWS_AS(load_graph("no_such_file_anywhere.el"), InputError);
}

TEST_CASE("degree sum equals twice the edge count") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Graph g = testing::random_connected_graph(4 + rng.uniform_int(10), 0.4, rng);
    long long total = 0;
    for (int v = 0; v < g.n; ++v) total += g.degree(v);
    CHECK(total % 2 == 0);
    CHECK(total == 2 * g.edge_count());
  }
}

TEST_CASE("bipartition detection") {
  Graph c6 = cycle_graph(6);
  CHECK(c6.bipartite);
  CHECK(c6.balanced_bipartition);
  Graph c5 = cycle_graph(5);
  CHECK(!c5.bipartite);
  Graph p = petersen();
  CHECK(!p.bipartite);
  for (int v = 0; v < c6.n; ++v)
    for (int u : c6.neighbors_of(v)) CHECK(c6.side[v] != c6.side[u]);
}

TEST_CASE("induced subgraph keeps only inner edges") {
  Graph k5 = complete_graph(5);
  auto [sub, hosts] = induced_subgraph(k5, {0, 2, 4});
  CHECK(sub.n == 3);
  CHECK(sub.edge_count() == 3);
  CHECK(hosts == std::vector<int>{0, 2, 4});
}

TEST_CASE("is_path_in") {
  Graph c5 = cycle_graph(5);
  CHECK(is_path_in(c5, {0, 1, 2, 3}));
  CHECK(!is_path_in(c5, {0, 2}));
  CHECK(!is_path_in(c5, {0, 1, 0}));
  CHECK(!is_path_in(c5, {}));
}
