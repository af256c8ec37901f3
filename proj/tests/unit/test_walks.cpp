#include <doctest.h>

#include <cmath>
#include <map>

#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/graph.hpp"
#include "hamexp/rng.hpp"
#include "hamexp/spectral.hpp"
#include "hamexp/walks.hpp"
#include "helpers.hpp"

using namespace hamexp;

TEST_CASE("random walk basics") {
  Graph c4 = cycle_graph(4);
  Walk zero = random_walk(c4, 2, 0, uint64_t{1});
  CHECK(zero.vertices == std::vector<int>{2});
  CHECK(!zero.degenerate);

  Graph k2 = path_graph(2);
  Walk forced = random_walk(k2, 0, 2, uint64_t{1});
  CHECK(forced.vertices == std::vector<int>{0, 1, 0});
  CHECK(forced.degenerate);

  // one-step law on C_4: neighbours 1 and 3 each about half the time
  Rng rng(5);
  int ones = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i)
    if (random_walk(c4, 0, 1, rng).vertices[1] == 1) ++ones;
  CHECK(std::abs(ones / double(samples) - 0.5) < 0.01);
}

TEST_CASE("conditioned tables: support") {
  Graph p3 = path_graph(3);  // 0-1-2
  ConditionedSampler s = build_conditioned(p3, 0, 2);
  CHECK(s.f[2][0] > 0.0);
  CHECK(s.f[2][2] > 0.0);
  CHECK(s.f[2][1] == 0.0);  // no length-2 walk from 1 to 0

  Graph c4 = cycle_graph(4);
  ConditionedSampler c = build_conditioned(c4, 2, 2);
  CHECK(c.f[2][0] > 0.0);
  CHECK(c.f[2][2] > 0.0);
  CHECK(c.f[2][1] == 0.0);
  CHECK(c.f[2][3] == 0.0);

  // one step: support is exactly the neighbourhood
  ConditionedSampler one = build_conditioned(c4, 1, 1);
  for (int v = 0; v < 4; ++v) CHECK((one.f[1][v] > 0) == c4.has_edge(v, 1));
}

TEST_CASE("conditioned sampling: C_4 both walks equally likely") {
  Graph c4 = cycle_graph(4);
  ConditionedSampler s = build_conditioned(c4, 2, 2);
  Rng rng(9);
  int via1 = 0;
  const int samples = 100000;
  for (int i = 0; i < samples; ++i) {
    Walk w = sample_conditioned(s, 0, rng);
    REQUIRE(w.vertices.back() == 2);
    if (w.vertices[1] == 1) ++via1;
  }
  CHECK(std::abs(via1 / double(samples) - 0.5) < 0.01);
}

TEST_CASE("conditioned sampling: forced walk and unreachable start") {
  Graph p3 = path_graph(3);
  ConditionedSampler s = build_conditioned(p3, 0, 2);
  Walk w = sample_conditioned(s, 0, uint64_t{3});
  CHECK(w.vertices == std::vector<int>{0, 1, 0});
  CHECK(w.degenerate);
  CHECK_THROWS_AS(sample_conditioned(s, 1, uint64_t{3}), InputError);
}

TEST_CASE("exactness: sampled law matches exhaustive enumeration") {
  Rng rng(12);
  for (int trial = 0; trial < 4; ++trial) {
    Graph g = testing::random_connected_graph(5 + rng.uniform_int(3), 0.5, rng);
    int ell = 3 + static_cast<int>(rng.uniform(2));
    int a = rng.uniform_int(g.n);
    int b = rng.uniform_int(g.n);
    EnumeratedLaw law;
    try {
      law = enumerate_conditioned_law(g, a, b, ell);
    } catch (const InputError&) {
      continue;
    }
    if (law.walks.empty() || law.walks.size() > 400) continue;
    ConditionedSampler s = build_conditioned(g, b, ell);
    REQUIRE(s.admissible(a));
    std::map<std::vector<int>, double> expected;
    for (size_t i = 0; i < law.walks.size(); ++i) expected[law.walks[i]] = law.probs[i];
    std::map<std::vector<int>, int> seen;
    const int samples = 40000;
    Rng srng(trial + 100);
    for (int i = 0; i < samples; ++i) ++seen[sample_conditioned(s, a, srng).vertices];
    double tv = 0.0;
    for (auto& [walk, p] : expected) tv += std::abs(p - seen[walk] / double(samples));
    for (auto& [walk, cnt] : seen)
      if (!expected.count(walk)) tv += cnt / double(samples);
    CHECK(tv < 0.05);
  }
}

TEST_CASE("length-3 closed-form sampler matches the table sampler's law") {
  Rng rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    Graph g = testing::random_connected_graph(7, 0.5, rng);
    int a = rng.uniform_int(g.n), b = rng.uniform_int(g.n);
    EnumeratedLaw law;
    try {
      law = enumerate_conditioned_law(g, a, b, 3);
    } catch (const InputError&) {
      continue;
    }
    if (law.walks.empty()) continue;
    std::map<std::vector<int>, double> expected;
    for (size_t i = 0; i < law.walks.size(); ++i) expected[law.walks[i]] = law.probs[i];
    Rng srng(trial + 55);
    std::map<std::vector<int>, int> seen;
    const int samples = 30000;
    for (int i = 0; i < samples; ++i) {
      Walk w = sample_conditioned_len3(g, nullptr, a, b, srng);
      REQUIRE(!w.vertices.empty());
      ++seen[w.vertices];
    }
    double tv = 0.0;
    for (auto& [walk, p] : expected) tv += std::abs(p - seen[walk] / double(samples));
    for (auto& [walk, cnt] : seen)
      if (!expected.count(walk)) tv += cnt / double(samples);
    CHECK(tv < 0.06);
  }
}

TEST_CASE("hit probability estimates") {
  Graph k5 = complete_graph(5);
  ConditionedSampler s = build_conditioned(k5, 1, 5);
  // by symmetry the first step of a conditioned walk from 0 is uniform over
  // the four neighbours
  double freq = estimate_hit_probability(s, 0, 1, 2, 40000, 77);
  CHECK(std::abs(freq - 0.25) < 0.02);

  Graph c6 = cycle_graph(6);
  ConditionedSampler c = build_conditioned(c6, 3, 3);
  double never = estimate_hit_probability(c, 0, 1, 4, 2000, 77);
  // vertex 4 cannot be the first step of a 0 -> 3 walk of length 3
  CHECK(never == doctest::Approx(0.0));
}

TEST_CASE("degeneracy estimates") {
  Graph c6 = cycle_graph(6);
  ConditionedSampler one = build_conditioned(c6, 1, 1);
  CHECK(estimate_degenerate_probability(one, 0, 500, 3) == doctest::Approx(0.0));

  Graph k2 = path_graph(2);
  ConditionedSampler k = build_conditioned(k2, 0, 2);
  CHECK(estimate_degenerate_probability(k, 0, 500, 3) == doctest::Approx(1.0));

  // informative regime: rate should respect the 3 ell^2 / d bound when it bites
  Graph big = random_regular(2048, 512, 9);
  REQUIRE(big.connected());
  ConditionedSampler s = build_conditioned(big, 0, 5);
  double rate = estimate_degenerate_probability(s, 1, 2000, 5);
  CHECK(rate <= 3.0 * 25 / 512.0);
}

TEST_CASE("reversal symmetry on regular graphs is exact") {
  CHECK(reversal_ratio_check(cycle_graph(4), 0, 1, 3) <= 1e-12);
  CHECK(reversal_ratio_check(complete_graph(5), 0, 1, 4) <= 1e-12);
}

TEST_CASE("reversal deviation stays within the near-regular band") {
  // a 6-vertex near-regular graph: degrees 3 and 4, d' / d = 1/7
  Graph g = Graph::from_edges(
      6, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 4}, {3, 5}, {4, 5}, {1, 4}, {2, 5}});
  double dev = reversal_ratio_check(g, 0, 5, 5);
  double d = (g.d_max + g.d_min) / 2.0;
  double dp = (g.d_max - g.d_min) / 2.0;
  CHECK(dev <= std::log(1.0 + 100.0 * dp / d) + 1e-9);
}

TEST_CASE("coupling: conditioned marginal near the unconditioned law after mixing") {
  Graph g = random_regular(128, 8, 3);
  REQUIRE(g.connected());
  if (g.bipartite) return;
  MixingCurve curve = empirical_mixing(g, 0, 64);
  REQUIRE(curve.first_below_tol > 0);
  int ell = 4 * curve.first_below_tol + 1;
  if (ell % 2 == 0) ++ell;
  int a = 0, b = 1;
  for (int t : {1, ell / 4, ell / 2}) {
    if (t < 1) continue;
    std::vector<double> cond = conditioned_marginal(g, a, b, ell, t);
    std::vector<double> uncond = walk_distribution(g, a, t);
    double tv = 0.0;
    for (int v = 0; v < g.n; ++v) tv += std::abs(cond[v] - uncond[v]);
    CHECK(tv <= 0.05);
  }
}

TEST_CASE("seed determinism") {
  Graph g = random_regular(64, 6, 4);
  ConditionedSampler s = build_conditioned(g, 3, 7);
  if (!s.admissible(11)) return;
  Walk w1 = sample_conditioned(s, 11, uint64_t{99});
  Walk w2 = sample_conditioned(s, 11, uint64_t{99});
  CHECK(w1.vertices == w2.vertices);
  Walk r1 = random_walk(g, 5, 20, uint64_t{42});
  Walk r2 = random_walk(g, 5, 20, uint64_t{42});
  CHECK(r1.vertices == r2.vertices);
}

TEST_CASE("masked sampling avoids blocked vertices") {
  Graph k6 = complete_graph(6);
  auto mask = std::make_shared<VertexMask>(k6);
  mask->block(k6, 2);
  mask->block(k6, 3);
  ConditionedSampler s = build_conditioned_masked(k6, mask, 1, 3);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    Walk w = sample_conditioned(s, 0, rng);
    for (int v : w.vertices) {
      CHECK(v != 2);
      CHECK(v != 3);
    }
  }
}
