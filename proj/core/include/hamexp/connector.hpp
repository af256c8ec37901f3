#pragma once
#include <cstdint>
#include <vector>

#include "hamexp/certify.hpp"
#include "hamexp/graph.hpp"
#include "hamexp/walks.hpp"

namespace hamexp {

// A batch of endpoint pairs to join with internally disjoint length-`length`
// paths avoiding `forbidden` internally. `forbidden` must contain every
// endpoint. In bipartite mode a_i lies in V0 and b_i in V1.
struct PairBatch {
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> forbidden;
  int length = 9;
  double alpha = 0.0;
  bool bipartite_mode = false;
};

struct ConnectorConfig {
  int last_step_threshold = 0;  // 0 = auto: max(8, ceil(m/20))
  int copies_r = 32;
  int retry_budget = 5;
  int rounds_max = 512;
  double chunk_load = 1.0;  // chunk cap = live * chunk_load / (len+1)^2
  int endpoint_retries = 8;
  bool use_dummy_pairs = false;
  int table_cache_size = 64;
};

struct ConnectResult {
  std::vector<std::vector<int>> paths;  // indexed like the input pairs
  std::vector<int> kept_rounds;         // round in which each pair was fixed
  std::vector<UniformityReport> layer_reports;  // t = 1..length-1
  int rounds_used = 0;
  bool length_adjusted = false;
  int length = 0;
};

// One sampling round over `batch` (no iteration): samples a walk per pair and
// keeps the ones that are non-degenerate and vertex-disjoint from every other
// sampled walk. Returns kept paths (full, endpoints included) and the
// leftover pair indices.
struct OneBiteOutcome {
  std::vector<int> kept_indices;
  std::vector<std::vector<int>> kept_paths;
  std::vector<int> leftover_indices;
  int sampled = 0;
};

OneBiteOutcome one_bite(const Graph& g, const PairBatch& batch, uint64_t seed);

// Final stage: r conditioned walks per pair, keep one surviving copy per
// pair. Throws NoSurvivingCopy if some pair has none.
struct LastStepOutcome {
  std::vector<std::vector<int>> paths;  // one per pair, batch order
};

LastStepOutcome last_step(const Graph& g, const PairBatch& batch, int copies, uint64_t seed);

// Full iterated connector: one_bite rounds folding kept internal vertices
// into the forbidden set, switching to last_step on the residue.
ConnectResult connect(const Graph& g, const PairBatch& batch, const ConnectorConfig& cfg,
                      uint64_t seed);

// Synthetic endpoint sets that flatten the per-vertex endpoint load
// ("least popular vertices first", lowest index on ties).
struct DummyPair {
  std::vector<int> a_set;
  std::vector<int> b_set;
};

std::vector<DummyPair> dummy_pairs(const Graph& g, int set_size,
                                   const PairBatch& existing, int target_count);

}  // namespace hamexp
