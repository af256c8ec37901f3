#pragma once
#include <vector>

#include "hamexp/graph.hpp"

namespace hamexp {

// Edge-expansion certificate. rho_upper is the best (smallest) tested cut
// ratio e(S, S^c) / (d_avg |S|) over sets with 1 <= |S| <= 2n/3; rho_lower is
// the spectral bound (1 - lambda2(N))/3, clamped at 0. Exhaustive below
// n <= 20, sampled above (seeded subsets plus singletons and BFS balls).
struct ExpansionCertificate {
  double rho_lower = 0.0;
  double rho_upper = 0.0;
  long long cuts_tested = 0;
  std::vector<int> worst_cut;
  bool connected = true;
  bool exhaustive = false;
};

ExpansionCertificate expansion_certificate(const Graph& g, long long samples, uint64_t seed);

// Distance from bipartiteness. eps = 1 - maxcut/e(G) where maxcut is exact
// for n <= 20 (exhaustive) and a local-search lower bound above, which makes
// eps an upper bound. eps_spectral is the bound (1 + lambda_n(N))/2, a valid
// lower bound for near-regular graphs; consumers wanting a conservative value
// take eps_lower.
struct FarFromBipartiteReport {
  double eps = 0.0;           // 1 - bestcut/e(G)
  double eps_spectral = 0.0;  // spectral lower bound, clamped at 0
  long long best_cut = 0;
  bool exhaustive = false;
  double eps_lower() const { return exhaustive ? eps : (eps_spectral < 0 ? 0.0 : eps_spectral); }
};

enum class FarMode { Auto, Exhaustive, LocalSearch };
FarFromBipartiteReport far_from_bipartite(const Graph& g, FarMode mode = FarMode::Auto,
                                          uint64_t seed = 0, bool with_spectral = true);

// Which part the multiset lives in and which part is probed.
enum class UniformitySide { V0toV1, V1toV0, Whole };

struct UniformityReport {
  double alpha_observed = 0.0;
  long long size = 0;  // with multiplicity
  bool balanced = true;
};

// alpha_observed = max over v in the target part of
// | |N(v) cap S| - |S| d_avg / |source| | / d_avg, multiplicities counted.
UniformityReport uniformity(const Graph& g, const std::vector<int>& S, UniformitySide side);

// Closed-form parameters of the graph left after removing an alpha-uniform
// set S: new degree band (d2 +- d2') and the expansion loss rho2_delta, so
// rho2 = rho - rho2_delta.
struct RemoveSetParams {
  double d2 = 0.0;
  double d2_prime = 0.0;
  double rho2_delta = 0.0;
};

RemoveSetParams remove_set_params(double d, double d_prime, double n, double size_S, double alpha);

}  // namespace hamexp
