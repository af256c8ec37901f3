#pragma once
#include <cstdint>
#include <vector>

#include "hamexp/graph.hpp"

namespace hamexp {

// Kneser graph K(n, k): vertices are the k-subsets of [n] in colex order,
// edges join disjoint subsets. Degree C(n-k, k). Capped at 1e6 vertices.
Graph kneser(int n, int k);

// Subset corresponding to a colex rank, for CLI metadata and tests.
std::vector<int> kneser_unrank(int n, int k, long long rank);

// Cayley graph of Z_{orders[0]} x ... x Z_{orders[r-1]} with a symmetric,
// identity-free generator set (each generator given in mixed-radix
// coordinates). Degree |S|.
Graph cayley_abelian(const std::vector<int>& orders, const std::vector<std::vector<int>>& gens);

// Keep each edge independently with probability p.
Graph percolate(const Graph& g, double p, uint64_t seed);

// Configuration-model d-regular graph, made simple by random edge switches
// (plain rejection is hopeless beyond small d). Uniform-ish.
Graph random_regular(int n, int d, uint64_t seed);

// Bipartite variant: parts of size n/2, all edges across.
Graph random_regular_bipartite(int n, int d, uint64_t seed);

// Small fixed graphs used across tests and the CLI.
Graph cycle_graph(int n);
Graph complete_graph(int n);
Graph path_graph(int n);
Graph petersen();

// Coset glue: given a partition of V(G) into cosets, build the auxiliary
// graph F (edge when the matching between two cosets reaches s_threshold),
// take a spanning tree, double it, extract an Euler tour and a system of
// matching edges, and emit per-coset endpoint pairs whose spanning paths
// close into one Hamilton cycle together with the matching.
struct CosetGlueResult {
  std::vector<std::vector<std::pair<int, int>>> per_coset_pairs;
  std::vector<std::pair<int, int>> matching;      // chosen host edges, tour order
  std::vector<std::pair<int, int>> tree_edges;    // coset-id pairs of the tree
  std::vector<int> tour;                          // coset ids, tour[0] == tour.back()
};

CosetGlueResult coset_euler_glue(const Graph& g, const std::vector<int>& coset_of,
                                 double s_threshold, uint64_t seed);

// Case-2 variant: additionally splits each coset into (A_i, B_i) using the
// given side assignment and emits the mediator-based pairs, four per tour
// visit, connecting inside G[A_i, B_i].
CosetGlueResult coset_euler_glue_bipartite(const Graph& g, const std::vector<int>& coset_of,
                                           const std::vector<int>& side_of, double s_threshold,
                                           uint64_t seed);

}  // namespace hamexp
