#pragma once
#include <cstdint>
#include <memory>
#include <vector>

#include "hamexp/graph.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

struct Walk {
  std::vector<int> vertices;
  bool degenerate = false;
  int length() const { return static_cast<int>(vertices.size()) - 1; }
};

// Uniform random walk of length ell from v.
Walk random_walk(const Graph& g, int v, int ell, uint64_t seed);
Walk random_walk(const Graph& g, int v, int ell, Rng& rng);

// A subgraph view used by callers that repeatedly delete vertices: `blocked`
// marks removed vertices, live_deg tracks degrees into the live part.
struct VertexMask {
  std::vector<uint8_t> blocked;
  std::vector<int> live_deg;
  int live_count = 0;

  explicit VertexMask(const Graph& g);
  void block(const Graph& g, int v);
  bool live(int v) const { return !blocked[v]; }
};

// Backward mass tables for the law of a length-`length` walk conditioned to
// end at `target`. f[t][v] is the (per-step renormalized) probability that a
// walk from `target` reaches v in t steps; by reversibility the sampling
// weight of u at k steps-to-go is f[k-1][u]/deg(u). log_norm[t] accumulates
// the stored normalizers, so unnormalized mass can be reconstructed.
struct ConditionedSampler {
  const Graph* host = nullptr;
  int target = -1;
  int length = 0;
  std::vector<std::vector<double>> f;
  std::vector<double> log_norm;
  std::shared_ptr<VertexMask> mask;  // null for whole-graph samplers

  bool admissible(int a) const { return f[length][a] > 0.0; }
};

ConditionedSampler build_conditioned(const Graph& g, int b, int ell);
ConditionedSampler build_conditioned_masked(const Graph& g, std::shared_ptr<VertexMask> mask,
                                            int b, int ell);

// Exact sample from the conditioned law; the final vertex is always target.
Walk sample_conditioned(const ConditionedSampler& s, int a, Rng& rng);
Walk sample_conditioned(const ConditionedSampler& s, int a, uint64_t seed);

// Exact samples of short conditioned walks without building tables.
// Length 1: the edge a-b if present. Length 3: weighted enumeration of
// middle pairs. Returns an empty walk when no such walk exists.
Walk sample_conditioned_len3(const Graph& g, const VertexMask* mask, int a, int b, Rng& rng);
Walk sample_conditioned_len1(const Graph& g, const VertexMask* mask, int a, int b);

// Empirical frequency of P(t) = v over `samples` conditioned walks from a.
double estimate_hit_probability(const ConditionedSampler& s, int a, int t, int v, int samples,
                                uint64_t seed);

// Empirical degeneracy rate of conditioned walks from a.
double estimate_degenerate_probability(const ConditionedSampler& s, int a, int samples,
                                       uint64_t seed);

// Exhaustive comparison (n <= 8) of the conditioned law a->b against the
// reversal of the conditioned law b->a; returns max |log ratio| over walks.
double reversal_ratio_check(const Graph& g, int a, int b, int ell);

// Test-grade oracle: all walks a->b of length ell with weights
// prod 1/deg(w_i), i < ell, normalized. Exponential in ell; guarded.
struct EnumeratedLaw {
  std::vector<std::vector<int>> walks;
  std::vector<double> probs;
};
EnumeratedLaw enumerate_conditioned_law(const Graph& g, int a, int b, int ell);

// Exact conditioned marginal at step t: Pr[P(t) = v] as a dense vector.
std::vector<double> conditioned_marginal(const Graph& g, int a, int b, int ell, int t);

// Unconditioned walk distribution at step t from a.
std::vector<double> walk_distribution(const Graph& g, int a, int t);

}  // namespace hamexp
