#include <doctest.h>

#include <set>

#include "hamexp/absorber.hpp"
#include "hamexp/error.hpp"
#include "hamexp/generators.hpp"
#include "hamexp/rng.hpp"
#include "helpers.hpp"

using namespace hamexp;

namespace {

// Builds a synthetic host containing exactly one gadget's edges, with fresh
// vertex ids, so the template lists can be validated combinatorially.
struct SyntheticGadget {
  Graph host;
  Gadget gadget;
};

SyntheticGadget make_synthetic(int ell, bool pair_form) {
  int next = 0;
  auto fresh = [&] { return next++; };
  Gadget gd;
  gd.x = fresh();
  gd.a = fresh();
  gd.y = fresh();
  if (pair_form) gd.b = fresh();

  std::vector<std::pair<int, int>> edges;
  auto path_between = [&](int from, int to, int len) {
    std::vector<int> p = {from};
    for (int i = 1; i < len; ++i) p.push_back(fresh());
    p.push_back(to);
    for (size_t i = 0; i + 1 < p.size(); ++i) edges.emplace_back(p[i], p[i + 1]);
    return p;
  };

  if (pair_form) {
    gd.q1 = path_between(gd.a, gd.b, ell);
    gd.q2 = path_between(gd.a, gd.b, ell);
    gd.cross.push_back(path_between(gd.x, gd.q2[1], ell));
    for (int j = 2; j <= ell - 1; ++j)
      gd.cross.push_back(path_between(gd.q1[j - 1], gd.q2[j], ell));
    gd.cross.push_back(path_between(gd.q1[ell - 1], gd.y, ell));
  } else {
    gd.q1 = path_between(gd.a, gd.y, ell);
    // q2 ends at q1[ell-1]
    gd.q2 = path_between(gd.a, gd.q1[ell - 1], ell);
    gd.cross.push_back(path_between(gd.x, gd.q2[1], ell));
    for (int j = 2; j <= ell - 1; ++j)
      gd.cross.push_back(path_between(gd.q1[j - 1], gd.q2[j], ell));
  }
  SyntheticGadget out{Graph::from_edges(next, edges), gd};
  return out;
}

}  // namespace

TEST_CASE("gadget templates validate exhaustively at ell in {3, 5, 7}") {
  for (int ell : {3, 5, 7}) {
    for (bool pair_form : {false, true}) {
      CAPTURE(ell);
      CAPTURE(pair_form);
      SyntheticGadget s = make_synthetic(ell, pair_form);
      verify_gadget(s.host, s.gadget);  // throws on any defect

      auto with = s.gadget.with_template();
      auto without = s.gadget.without_template();
      CHECK(with.front() == s.gadget.x);
      CHECK(with.back() == s.gadget.y);
      CHECK(without.front() == s.gadget.x);
      CHECK(without.back() == s.gadget.y);

      // symmetric difference of the vertex sets is {a} or {a, b}
      std::set<int> ws(with.begin(), with.end()), wos(without.begin(), without.end());
      std::set<int> diff;
      for (int v : ws)
        if (!wos.count(v)) diff.insert(v);
      std::set<int> want = {s.gadget.a};
      if (pair_form) want.insert(s.gadget.b);
      CHECK(diff == want);
      for (int v : wos) CHECK(ws.count(v));
    }
  }
}

TEST_CASE("the ell = 3 single-vertex templates match the reference lists") {
  SyntheticGadget s = make_synthetic(3, false);
  const auto& gd = s.gadget;
  // with: x, P1, v1, a, u1, P2, v2, u2, y
  std::vector<int> with_expected(gd.cross[0]);
  with_expected.push_back(gd.a);
  with_expected.insert(with_expected.end(), gd.cross[1].begin(), gd.cross[1].end());
  with_expected.push_back(gd.q1[2]);
  with_expected.push_back(gd.y);
  CHECK(gd.with_template() == with_expected);
  // without: x, P1, v1, v2, P2(reversed), u1, u2, y
  std::vector<int> without_expected(gd.cross[0]);
  without_expected.insert(without_expected.end(), gd.cross[1].rbegin(), gd.cross[1].rend());
  without_expected.push_back(gd.q1[2]);
  without_expected.push_back(gd.y);
  CHECK(gd.without_template() == without_expected);
}

TEST_CASE("build_xay and build_xaby on a real host") {
  Graph g = random_regular(1024, 32, 3);
  REQUIRE(g.connected());
  Gadget xay = build_xay(g, 0, 1, 2, 5, {}, 7);
  CHECK(xay.x == 0);
  CHECK(xay.a == 1);
  CHECK(xay.y == 2);
  // verify_gadget ran inside; double-check the vertex sets differ by {a}
  auto with = xay.with_template();
  auto without = xay.without_template();
  CHECK(with.size() == without.size() + 1);

  Gadget xaby = build_xaby(g, 4, 5, 6, 7, 5, {}, 9);
  CHECK(xaby.with_template().size() == xaby.without_template().size() + 2);

  CHECK_THROWS_AS(build_xay(g, 0, 0, 2, 5, {}, 7), InputError);
  CHECK_THROWS_AS(build_xay(g, 0, 1, 2, 4, {}, 7), InputError);
}

TEST_CASE("match template: structure at m = 1 with exhaustive verification") {
  MatchTemplate K = build_match_template(1, 5);
  CHECK(K.m == 1);
  CHECK(K.edges.size() == 721);  // 103 * 7m
  std::vector<int> da(7, 0), db(7, 0);
  for (auto [a, b] : K.edges) {
    ++da[a];
    ++db[b];
  }
  for (int v = 0; v < 7; ++v) {
    CHECK(da[v] == 103);
    CHECK(db[v] == 103);
  }
  // spot robust matchings after dropping one vertex per side of A1/B1
  std::vector<uint8_t> drop_a(7, 0), drop_b(7, 0);
  drop_a[0] = 1;
  drop_b[1] = 1;
  CHECK(!K.robust_matching(drop_a, drop_b).empty());
}

TEST_CASE("match template: smaller regularity still verifies or rebuilds") {
  MatchTemplate K = build_match_template(2, 11, 7, 200, 32);
  CHECK(K.edges.size() == 7u * 2 * 7);
  std::vector<uint8_t> none(14, 0);
  auto matching = K.robust_matching(none, none);
  CHECK(static_cast<int>(matching.size()) == K.side_size());
}

TEST_CASE("general absorber: build and absorb round trips") {
  Graph g = random_regular(2048, 64, 21);
  REQUIRE(g.connected());
  AbsorberParams params;
  params.kind = AbsorberKind::General;
  params.reservoir_size = 6;
  params.ell = 5;
  std::vector<int> forbidden = {0, 1, 2};
  Absorber abs = build_absorber(g, params, forbidden, 31);

  CHECK(abs.reservoir.size() == 6);
  CHECK(abs.gadgets.size() == 6);
  for (int v : forbidden)
    CHECK(!std::binary_search(abs.vertex_set.begin(), abs.vertex_set.end(), v));

  // R' = empty and R' = R
  std::vector<int> full_path = absorb(abs, {});
  CHECK(full_path.size() == abs.vertex_set.size());
  std::vector<int> bare_path = absorb(abs, abs.reservoir);
  CHECK(bare_path.size() == abs.vertex_set.size() - abs.reservoir.size());

  // random subsets, verified inside absorb()
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> rp;
    for (int v : abs.reservoir)
      if (rng.bernoulli(0.5)) rp.push_back(v);
    std::vector<int> path = absorb(abs, rp);
    CHECK(path.size() == abs.vertex_set.size() - rp.size());
  }
  CHECK_THROWS_AS(absorb(abs, {abs.x_endpoint}), InputError);
}

TEST_CASE("bipartite absorber with a reduced template on a small host") {
  Graph g = random_regular_bipartite(4096, 64, 33);
  REQUIRE(g.connected());
  AbsorberParams params;
  params.kind = AbsorberKind::Bipartite;
  params.m0 = 1;
  params.ell = 5;
  params.template_regularity = 7;  // 49 gadgets; hosts of this size carry it
  Absorber abs = build_absorber(g, params, {}, 41);

  CHECK(abs.reservoir.size() == 4);  // A1 + B1 = 2m0 + 2m0
  CHECK(abs.gadgets.size() == 49);
  long long c0 = 0, c1 = 0;
  for (int v : abs.vertex_set) (g.side[v] == 0 ? c0 : c1)++;
  CHECK(c0 == c1);  // balanced in the bipartite form

  // absorb with a balanced half of R
  std::vector<int> rp = {abs.reservoir[0], abs.reservoir[2]};
  std::vector<int> path = absorb(abs, rp);
  CHECK(path.size() == abs.vertex_set.size() - 2);
  CHECK(path.front() == abs.x_endpoint);
  CHECK(path.back() == abs.y_endpoint);

  // unbalanced R' is rejected
  CHECK_THROWS_AS(absorb(abs, {abs.reservoir[0]}), InputError);
}

TEST_CASE("absorber determinism") {
  Graph g = random_regular(1024, 48, 17);
  REQUIRE(g.connected());
  AbsorberParams params;
  params.reservoir_size = 4;
  params.ell = 5;
  Absorber a1 = build_absorber(g, params, {}, 99);
  Absorber a2 = build_absorber(g, params, {}, 99);
  CHECK(a1.vertex_set == a2.vertex_set);
  CHECK(a1.reservoir == a2.reservoir);
  CHECK(absorb(a1, a1.reservoir) == absorb(a2, a2.reservoir));
}
