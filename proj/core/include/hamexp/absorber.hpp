#pragma once
#include <cstdint>
#include <vector>

#include "hamexp/certify.hpp"
#include "hamexp/connector.hpp"
#include "hamexp/graph.hpp"

namespace hamexp {

// One absorption gadget. With b == -1 this is the single-vertex (x, a, y)
// form: q1 runs a..y, q2 runs a..q1[L-1], and cross[i] (1-indexed via
// cross[i-1]) runs u_{i-1} -> v_i with cross[0] starting at x. With b >= 0 it
// is the pair (x, a, b, y) form: q1 and q2 both run a..b and there are L
// cross paths, the last one running u_{L-1} -> y.
struct Gadget {
  int x = -1, a = -1, b = -1, y = -1;
  std::vector<int> q1;
  std::vector<int> q2;
  std::vector<std::vector<int>> cross;

  bool pair_form() const { return b >= 0; }
  int ell() const { return static_cast<int>(q1.size()) - 1; }
  std::vector<int> vertex_set() const;  // sorted
  std::vector<int> with_template() const;
  std::vector<int> without_template() const;
};

// Validates both templates against the host graph: valid paths, correct
// endpoints, vertex sets V(H) and V(H) minus {a} (or {a, b}).
void verify_gadget(const Graph& g, const Gadget& gadget);

Gadget build_xay(const Graph& g, int x, int a, int y, int ell, const std::vector<int>& forbidden,
                 uint64_t seed);
Gadget build_xaby(const Graph& g, int x, int a, int b, int y, int ell,
                  const std::vector<int>& forbidden, uint64_t seed);

// Robustly matchable bipartite multigraph: parts A1 (2m) + A2 (5m) against
// B1 (2m) + B2 (5m), regularity 103 counting multiplicity (so 721m edges),
// built as a union of random perfect matchings and verified: for every
// A1' <= A1, B1' <= B1 with |A1'| = |B1'| >= m there is a perfect matching
// between A1' + A2 and B1' + B2 (exhaustive for m <= 3, sampled above).
struct MatchTemplate {
  int m = 0;
  int regularity = 103;
  std::vector<std::pair<int, int>> edges;  // local ids in [0, 7m) per side

  int side_size() const { return 7 * m; }
  bool in_a1(int local) const { return local < 2 * m; }
  // perfect matching between (A1 \ dropA) + A2 and (B1 \ dropB) + B2;
  // returns chosen edge indices or empty if none exists.
  std::vector<int> robust_matching(const std::vector<uint8_t>& drop_a,
                                   const std::vector<uint8_t>& drop_b) const;
};

MatchTemplate build_match_template(int m, uint64_t seed, int regularity = 103,
                                   int verify_samples = 1000, int retries = 16);

enum class AbsorberKind { General, Bipartite };

struct AbsorberParams {
  AbsorberKind kind = AbsorberKind::General;
  int reservoir_size = 8;     // general form: gadget count m
  int m0 = 1;                 // bipartite form: template scale
  int ell = 5;                // gadget path length (odd)
  int template_regularity = 103;
  int template_verify_samples = 1000;
  int template_retries = 16;
  double alpha_warn = 0.5;    // warn when V(H) uniformity exceeds this
  ConnectorConfig connector;
};

struct Absorber {
  AbsorberKind kind = AbsorberKind::General;
  const Graph* host = nullptr;
  std::vector<int> reservoir;  // R (bipartite: A1 then B1)
  int x_endpoint = -1;
  int y_endpoint = -1;
  std::vector<Gadget> gadgets;
  MatchTemplate tmpl;              // bipartite only
  std::vector<int> a_side_hosts;   // bipartite: local A id -> host vertex
  std::vector<int> b_side_hosts;
  std::vector<int> vertex_set;     // sorted V(H)
  UniformityReport vh_report;
  bool alpha_warning = false;
};

Absorber build_absorber(const Graph& g, const AbsorberParams& params,
                        const std::vector<int>& forbidden, uint64_t seed);

// x->y path with vertex set exactly V(H) \ R'. Bipartite form requires R'
// balanced and |R'| <= |R|/2.
std::vector<int> absorb(const Absorber& abs, const std::vector<int>& r_prime);

}  // namespace hamexp
