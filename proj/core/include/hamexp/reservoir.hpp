#pragma once
#include <cstdint>
#include <optional>
#include <vector>

#include "hamexp/graph.hpp"

namespace hamexp {

// A sampled connecting set: a p-random subset of V(G) minus an avoid set,
// carrying the closed-form (D, ell) rates it would satisfy asymptotically.
struct Reservoir {
  std::vector<int> vertices;  // sorted
  double p = 0.0;
  double declared_D = 0.0;
  double declared_ell = 0.0;
};

Reservoir sample_reservoir(const Graph& g, double p, const std::vector<int>& avoid, uint64_t seed,
                           double rho = 0.1);

struct ConnectThroughResult {
  std::vector<std::vector<int>> paths;  // per pair, endpoints included
  bool spread_ok = true;
  int max_endpoint_load = 0;
};

// Internally disjoint paths of length <= ell whose internal vertices all lie
// in the reservoir. Greedy randomized: random pair order, BFS inside the
// unused part of R, per-pair retry through a random intermediate, global
// restarts. Throws ConnectThroughFailure when the budget runs out.
ConnectThroughResult connect_through(const Graph& g, const Reservoir& res,
                                     const std::vector<std::pair<int, int>>& pairs, int D, int ell,
                                     uint64_t seed, int restarts = 5, bool waive_spread = false);

// Vertices of V reachable from U by a path of length <= i whose internal
// vertices lie in V, avoiding the edges F. Sorted output.
std::vector<int> ball(const Graph& g, const std::vector<int>& U, const std::vector<int>& V, int i,
                      const std::vector<std::pair<int, int>>& F = {});

struct ProbeWitness {
  std::vector<int> U;
  std::vector<std::pair<int, int>> F;
  double value = 0.0;  // the quantity that fell short
};

struct ProbeReport {
  bool pass = true;
  int trials = 0;
  double worst_margin = 0.0;  // min over trials of (achieved - required)
  std::optional<ProbeWitness> witness;
};

// Samples (U, F) with |F| <= mu |U| and checks |B^ell_{G-F}(U, V)| > |V|/2.
ProbeReport reachable_probe(const Graph& g, const std::vector<int>& V, double mu, int ell,
                            int trials, uint64_t seed);

// Samples (U, F) with |U| <= 2n/3, |F| <= s|U| and checks
// |N_{G-F}(U)| >= gamma |U|.
ProbeReport robust_vertex_expansion_probe(const Graph& g, double gamma, double s, int trials,
                                          uint64_t seed);

// Conversion from an edge-expansion constant to robust vertex expansion:
// (rho', s) = (2 rho / 5, rho d / 4).
std::pair<double, double> robust_expansion_params(double rho, double d);

}  // namespace hamexp
