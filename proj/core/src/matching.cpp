#include "hamexp/matching.hpp"

#include <limits>
#include <queue>

namespace hamexp {

namespace {
constexpr int kInf = std::numeric_limits<int>::max();
}

BipartiteMatching hopcroft_karp(int n_left, int n_right, const std::vector<std::vector<int>>& adj) {
  BipartiteMatching m;
  m.match_left.assign(n_left, -1);
  m.match_right.assign(n_right, -1);
  std::vector<int> dist(n_left);

  auto bfs = [&]() -> bool {
    std::queue<int> q;
    for (int l = 0; l < n_left; ++l) {
      if (m.match_left[l] == -1) {
        dist[l] = 0;
        q.push(l);
      } else {
        dist[l] = kInf;
      }
    }
    bool found = false;
    while (!q.empty()) {
      int l = q.front();
      q.pop();
      for (int r : adj[l]) {
        int l2 = m.match_right[r];
        if (l2 == -1) {
          found = true;
        } else if (dist[l2] == kInf) {
          dist[l2] = dist[l] + 1;
          q.push(l2);
        }
      }
    }
    return found;
  };

  std::vector<size_t> it(n_left);
  auto dfs = [&](auto&& self, int l) -> bool {
    for (size_t& i = it[l]; i < adj[l].size(); ++i) {
      int r = adj[l][i];
      int l2 = m.match_right[r];
      if (l2 == -1 || (dist[l2] == dist[l] + 1 && self(self, l2))) {
        m.match_left[l] = r;
        m.match_right[r] = l;
        return true;
      }
    }
    dist[l] = kInf;
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int l = 0; l < n_left; ++l)
      if (m.match_left[l] == -1 && dfs(dfs, l)) ++m.size;
  }
  return m;
}

}  // namespace hamexp
