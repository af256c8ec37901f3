#pragma once
#include <cstdint>
#include <map>
#include <string>

namespace hamexp {

// All tunables in one place. Flat key=value text files override the defaults
// and flags override the file. ell values are normalized to odd.
struct PipelineConfig {
  int ell = 9;                    // connector path length
  int absorber_ell = 5;           // gadget path length
  double p_reservoir = 0.04;      // general-form reservoir fraction of n
  int bipartite_m0 = 1;           // bipartite template scale
  double alpha_target = 0.5;      // endpoint-uniformity warning level
  int last_step_threshold = 0;    // 0 = auto
  int copies_r = 32;
  int retry_connector = 5;
  int retry_absorber = 3;
  int retry_reservoir = 5;
  double regime_epsilon = 0.05;   // far-from-bipartite decision threshold
  double tol_tv = 1e-3;           // empirical mixing tolerance
  double tol_spectral = 1e-9;
  uint64_t master_seed = 0;
  int threads = 1;
  int tiny_n = 22;                // exact-oracle fast path
  int backtrack_n = 32;           // budgeted exact search fast path
  long long backtrack_budget = 4000000;
  bool extension_fallback = true; // rotation-extension stage when the
                                  // absorber machinery cannot run
  bool force_faithful = false;    // skip feasibility prechecks
  int forest_parts = 0;           // 0 = auto
  int reservoir_ell = 0;          // 0 = auto (4 * empirical mixing time + 2)
  int rounds_max = 512;
  double chunk_load = 1.0;
  double wall_clock_cap_s = 110.0;
  int template_regularity = 103;

  void validate();  // normalizes ell parity, checks ranges

  static PipelineConfig from_file(const std::string& path);
  void apply(const std::map<std::string, std::string>& kv);
  std::map<std::string, std::string> to_map() const;
};

}  // namespace hamexp
