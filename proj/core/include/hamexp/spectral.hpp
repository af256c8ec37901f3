#pragma once
#include <string>
#include <vector>

#include "hamexp/graph.hpp"

namespace hamexp {

// Extreme eigenvalues of the degree-normalized adjacency matrix
// N = D^{1/2} A D^{1/2} with D_ii = 1/deg(i).
struct SpectralSummary {
  double lambda2 = 0.0;
  double lambda_n = 0.0;
  std::string method;      // "dense" | "iterative"
  double residual = 0.0;   // max ||N x - lambda x||_2 over the two pairs
};

// Dense solve for n <= 2000, deflated power iteration above (budget 1e4
// iterations; throws ComputeError if the residual target is missed).
SpectralSummary spectral_summary(const Graph& g, double tol);

// rho >= (d - lambda2)/(3d) for d-regular graphs.
double cheeger_rho(double d, double lambda2_adj);

// lambda2(N) <= 1 - rho^2/32.
double lambda2_bound(double rho);

// lambda_n(N) >= eps^2 rho^2 / 800 - 1, valid when d'/d stays below the
// recorded hypothesis threshold.
struct LambdaNBound {
  double bound = 0.0;
  double hypothesis_dprime_over_d = 0.0;  // eps^2 rho^2 / 4000
};
LambdaNBound lambda_n_bound(double rho, double eps);

enum class MixingKind { Bipartite, FarFromBipartite, Generic };

// Closed-form mixing-time bounds; natural log.
double mixing_time_bound(MixingKind kind, double rho, double eps, double n, double c_gap);

// Exact walk-distribution propagation from `start`: per-step total-variation
// distance (sum of absolute differences) to the degree-stationary
// distribution on the parity-correct part. No sampling.
struct MixingCurve {
  std::vector<double> tv;           // tv[t], t = 0..t_max
  std::vector<double> tv_envelope;  // running minimum
  int first_below_tol = -1;         // empirical mixing time, -1 if not reached
  double tol = 0.0;
};

MixingCurve empirical_mixing(const Graph& g, int start, int t_max, double tol = 1e-3);

}  // namespace hamexp
