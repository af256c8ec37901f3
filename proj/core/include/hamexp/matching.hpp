#pragma once
#include <vector>

namespace hamexp {

// Maximum matching in an explicit bipartite graph via Hopcroft-Karp.
// adj[l] lists right-side endpoints of left vertex l; parallel entries are
// tolerated (treated as one edge).
struct BipartiteMatching {
  std::vector<int> match_left;   // right partner of each left vertex, -1 if free
  std::vector<int> match_right;  // left partner of each right vertex, -1 if free
  int size = 0;
};

BipartiteMatching hopcroft_karp(int n_left, int n_right, const std::vector<std::vector<int>>& adj);

}  // namespace hamexp
