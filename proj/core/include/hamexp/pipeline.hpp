#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hamexp/config.hpp"
#include "hamexp/graph.hpp"

namespace hamexp {

enum class Regime { Bipartite, FarFromBipartite };

struct StageDiag {
  std::string stage;
  double seconds = 0.0;
  int retries = 0;
  std::string note;
};

struct HamiltonResult {
  enum class Outcome { Cycle, Paths, Failure };
  Outcome outcome = Outcome::Failure;
  std::vector<int> cycle;
  std::vector<std::vector<int>> paths;
  std::vector<StageDiag> diagnostics;
  std::string failure_reason;
  std::string route;  // oracle | two_regular | backtracking | faithful | extension | tiny_exact
  bool certain_non_hamiltonian = false;
};

bool verify_hamilton_cycle(const Graph& g, const std::vector<int>& cycle);

// Exact Hamiltonicity decision by subset dynamic programming; n <= 22.
struct OracleResult {
  bool hamiltonian = false;
  std::vector<int> witness;
};
OracleResult exact_oracle(const Graph& g);

// Budgeted exact DFS. found => Hamilton cycle; exhausted => certainly none;
// otherwise the budget ran out.
struct BacktrackResult {
  std::optional<std::vector<int>> cycle;
  bool exhausted = false;
};
BacktrackResult backtracking_hamilton(const Graph& g, uint64_t seed, long long node_budget);

// Rotation-extension search for a Hamilton cycle; seeded, budgeted.
std::optional<std::vector<int>> posa_extension(const Graph& g, uint64_t seed, int restarts,
                                               long long step_budget);

// Exact search for a system of internally disjoint a_i-b_i paths whose
// internal vertices partition V(G) minus the endpoints. Small n only.
std::optional<std::vector<std::vector<int>>> exact_spanning_paths(
    const Graph& g, const std::vector<std::pair<int, int>>& pairs, long long node_budget = 4000000);

// The assembly procedure: absorber, linear forest, reservoir hookup,
// absorption. Produces spanning paths for the given endpoint pairs.
HamiltonResult robust_spanning_paths(const Graph& g, const std::vector<std::pair<int, int>>& pairs,
                                     Regime regime, const PipelineConfig& config, uint64_t seed);

// Full dispatcher: fast paths, regime decision, assembly, verified output.
HamiltonResult hamilton_cycle(const Graph& g, const PipelineConfig& config, uint64_t seed);

}  // namespace hamexp
