#pragma once
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hamexp {

// Immutable simple undirected graph in CSR form. Vertices are dense 0-based
// ints. Neighbour lists are sorted and duplicate-free; no self-loops.
// If the graph is bipartite, a canonical 2-colouring is stored (each
// component's lowest-index vertex gets side 0).
struct Graph {
  int n = 0;
  std::vector<int> offsets;    // size n+1
  std::vector<int> neighbors;  // size 2m, sorted within each vertex block
  int d_min = 0;
  int d_max = 0;
  double d_avg = 0.0;
  bool bipartite = false;
  bool balanced_bipartition = false;
  std::vector<uint8_t> side;  // per-vertex 0/1 when bipartite, else empty

  int degree(int v) const { return offsets[v + 1] - offsets[v]; }

  std::span<const int> neighbors_of(int v) const {
    return {neighbors.data() + offsets[v], neighbors.data() + offsets[v + 1]};
  }

  bool has_edge(int u, int v) const;
  long long edge_count() const { return static_cast<long long>(neighbors.size()) / 2; }
  bool connected() const;

  // Vertices on each side of the bipartition (empty when not bipartite).
  std::vector<int> part(int s) const;

  // Validates: indices in range, no loops, no duplicates. Edges may come in
  // either orientation.
  static Graph from_edges(int n, const std::vector<std::pair<int, int>>& edges);
};

// Edge-list file: first line "n m", then m lines "u v" with 0 <= u < v < n.
// '#' starts a comment (full-line or trailing).
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

// Induced subgraph on `verts` (need not be sorted). Returns the subgraph and
// the map from new vertex ids back to host ids.
std::pair<Graph, std::vector<int>> induced_subgraph(const Graph& g, const std::vector<int>& verts);

// Component ids, numbered by discovery from vertex 0 upward.
std::vector<int> components(const Graph& g);

bool is_path_in(const Graph& g, const std::vector<int>& seq);

}  // namespace hamexp
