#pragma once
#include <cstdint>
#include <vector>

#include "hamexp/graph.hpp"

namespace hamexp {

// Vertex-disjoint paths; singleton paths are allowed and carry the
// endpoint-bookkeeping convention endpoint == the vertex itself.
struct LinearForest {
  std::vector<std::vector<int>> paths;

  long long edge_total() const {
    long long e = 0;
    for (const auto& p : paths) e += static_cast<long long>(p.size()) - 1;
    return e;
  }
  std::vector<int> covered() const;
  // (u_i, v_i) endpoints per path; singletons give u == v.
  std::vector<std::pair<int, int>> endpoints() const;
};

struct ForestReport {
  long long low_degree_count = 0;      // vertices of degree < 2 in the forest
  int max_neighbourhood_leftover = 0;  // max over v of low-degree vertices in N(v)
  int parts = 0;
};

// Layered construction: random partition of V into t parts, a maximum
// matching between consecutive parts, union of the matchings. Degree-zero
// vertices of V enter as singleton paths.
LinearForest linear_forest(const Graph& g, const std::vector<int>& V, int t, uint64_t seed,
                           ForestReport* report = nullptr);

// Greedy maximal-path extraction; guarantees at least e(g)/Delta edges when
// Delta bounds the maximum degree.
LinearForest large_linear_forest(const Graph& g, int Delta);

struct MaxCutResult {
  std::vector<int> a_side;
  std::vector<int> b_side;
  long long cut_edges = 0;
};

// Local-search maxcut: best-improvement flips with seeded tie-breaks until
// every vertex has at least half its degree across the cut (cap 50n flips).
// Bipartite inputs start from the proper 2-colouring.
MaxCutResult max_cut_local_search(const Graph& g, uint64_t seed);

// Balancing forest for a near-bipartite split: every path runs from A to B,
// |V(F)| <= 4(|X| + |B| - |A|), X ends up interior, and the uncovered parts
// have equal size. Requires |A| <= |B|, inside-degrees <= d/2 and
// |X| + |B| - |A| <= d/10 on a d-regular host.
LinearForest clean_up_forest(const Graph& g, const std::vector<int>& A, const std::vector<int>& B,
                             const std::vector<int>& X, uint64_t seed);

}  // namespace hamexp
