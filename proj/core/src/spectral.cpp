#include "hamexp/spectral.hpp"

#include <Eigen/Dense>
#include <limits>
#include <cmath>

#include "hamexp/error.hpp"
#include "hamexp/rng.hpp"

namespace hamexp {

namespace {

// y = N x with N_{uv} = 1/sqrt(d(u) d(v)) on edges
void nmatvec(const Graph& g, const std::vector<double>& inv_sqrt_deg, const std::vector<double>& x,
             std::vector<double>& y) {
  for (int v = 0; v < g.n; ++v) {
    double acc = 0.0;
    for (int u : g.neighbors_of(v)) acc += x[u] * inv_sqrt_deg[u];
    y[v] = acc * inv_sqrt_deg[v];
  }
}

double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double pair_residual(const Graph& g, const std::vector<double>& inv_sqrt_deg,
                     const std::vector<double>& x, double lambda) {
  std::vector<double> y(g.n);
  nmatvec(g, inv_sqrt_deg, x, y);
  double s = 0.0;
  for (int v = 0; v < g.n; ++v) {
    double r = y[v] - lambda * x[v];
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace

SpectralSummary spectral_summary(const Graph& g, double tol) {
  if (g.n < 2) throw InputError("spectral_summary needs n >= 2");
  if (g.d_min == 0) throw InputError("spectral_summary: isolated vertex");
  SpectralSummary out;

  std::vector<double> inv_sqrt_deg(g.n);
  for (int v = 0; v < g.n; ++v) inv_sqrt_deg[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));

  if (g.n <= 2000) {
    out.method = "dense";
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(g.n, g.n);
    for (int v = 0; v < g.n; ++v)
      for (int u : g.neighbors_of(v)) N(v, u) = inv_sqrt_deg[v] * inv_sqrt_deg[u];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(N);
    if (solver.info() != Eigen::Success) throw ComputeError("dense eigensolver failed");
    const auto& vals = solver.eigenvalues();  // ascending
    out.lambda_n = vals(0);
    out.lambda2 = vals(g.n - 2);
    std::vector<double> x(g.n);
    double res = 0.0;
    for (int which : {0, g.n - 2}) {
      for (int v = 0; v < g.n; ++v) x[v] = solver.eigenvectors()(v, which);
      res = std::max(res, pair_residual(g, inv_sqrt_deg, x, vals(which)));
    }
    out.residual = res;
    if (out.residual > std::max(tol, 1e-12) * 100 && out.residual > 1e-6)
      throw ComputeError("dense eigensolver residual too large");
    return out;
  }

  out.method = "iterative";
  const int budget = 10000;
  // top eigenvector of N is proportional to sqrt(deg)
  std::vector<double> phi(g.n);
  for (int v = 0; v < g.n; ++v) phi[v] = std::sqrt(static_cast<double>(g.degree(v)));
  double phin = norm2(phi);
  for (double& v : phi) v /= phin;

  Rng rng(0x5eedc0de);
  std::vector<double> x(g.n), y(g.n);
  for (double& v : x) v = rng.next_double() - 0.5;

  // lambda2 via power iteration on N + I with the phi component deflated
  double lam2 = 0.0;
  double res2 = 1.0;
  {
    double proj = dot(x, phi);
    for (int v = 0; v < g.n; ++v) x[v] -= proj * phi[v];
    for (int it = 0; it < budget; ++it) {
      nmatvec(g, inv_sqrt_deg, x, y);
      for (int v = 0; v < g.n; ++v) y[v] += x[v];
      proj = dot(y, phi);
      for (int v = 0; v < g.n; ++v) y[v] -= proj * phi[v];
      double nrm = norm2(y);
      if (nrm == 0) break;
      for (int v = 0; v < g.n; ++v) x[v] = y[v] / nrm;
      if ((it & 15) == 15 || it == budget - 1) {
        nmatvec(g, inv_sqrt_deg, x, y);
        lam2 = dot(x, y);
        res2 = pair_residual(g, inv_sqrt_deg, x, lam2);
        if (res2 <= tol) break;
      }
    }
  }

  // lambda_n via power iteration on I - N (largest eigenvalue 1 - lambda_n)
  double lamn = 0.0;
  double resn = 1.0;
  {
    for (double& v : x) v = rng.next_double() - 0.5;
    for (int it = 0; it < budget; ++it) {
      nmatvec(g, inv_sqrt_deg, x, y);
      for (int v = 0; v < g.n; ++v) y[v] = x[v] - y[v];
      double nrm = norm2(y);
      if (nrm == 0) break;
      for (int v = 0; v < g.n; ++v) x[v] = y[v] / nrm;
      if ((it & 15) == 15 || it == budget - 1) {
        nmatvec(g, inv_sqrt_deg, x, y);
        lamn = dot(x, y);
        resn = pair_residual(g, inv_sqrt_deg, x, lamn);
        if (resn <= tol) break;
      }
    }
  }

  out.lambda2 = lam2;
  out.lambda_n = lamn;
  out.residual = std::max(res2, resn);
  if (out.residual > tol)
    throw ComputeError("spectral_summary: no convergence within iteration budget (residual " +
                       std::to_string(out.residual) + ")");
  return out;
}

double cheeger_rho(double d, double lambda2_adj) {
  if (d <= 0) throw InputError("cheeger_rho: d must be positive");
  return (d - lambda2_adj) / (3.0 * d);
}

double lambda2_bound(double rho) {
  if (rho <= 0 || rho > 1) throw InputError("lambda2_bound: rho in (0, 1] required");
  return 1.0 - rho * rho / 32.0;
}

LambdaNBound lambda_n_bound(double rho, double eps) {
  if (rho <= 0 || rho > 1 || eps <= 0 || eps > 1)
    throw InputError("lambda_n_bound: rho, eps in (0, 1] required");
  LambdaNBound b;
  b.bound = eps * eps * rho * rho / 800.0 - 1.0;
  b.hypothesis_dprime_over_d = eps * eps * rho * rho / 4000.0;
  return b;
}

double mixing_time_bound(MixingKind kind, double rho, double eps, double n, double c_gap) {
  if (n <= 1) throw InputError("mixing_time_bound: n > 1 required");
  switch (kind) {
    case MixingKind::Bipartite:
      if (rho <= 0) throw InputError("mixing_time_bound: rho > 0 required");
      return 1000.0 / (rho * rho) * std::log(n);
    case MixingKind::FarFromBipartite:
      if (rho <= 0 || eps <= 0) throw InputError("mixing_time_bound: rho, eps > 0 required");
      return 1e5 * std::log(n) / (eps * eps * rho * rho);
    case MixingKind::Generic:
      if (c_gap <= 0) throw InputError("mixing_time_bound: c_gap > 0 required");
      return 100.0 / c_gap * std::log(n);
  }
  throw InputError("mixing_time_bound: unknown kind");
}

MixingCurve empirical_mixing(const Graph& g, int start, int t_max, double tol) {
  if (t_max <= 0) throw InputError("empirical_mixing: t_max must be positive");
  if (start < 0 || start >= g.n) throw InputError("empirical_mixing: start out of range");
  if (g.degree(start) == 0) throw InputError("empirical_mixing: isolated start vertex");

  MixingCurve curve;
  curve.tol = tol;

  // degree-stationary mass per side (bipartite) or globally
  double total_deg_side[2] = {0.0, 0.0};
  if (g.bipartite) {
    for (int v = 0; v < g.n; ++v) total_deg_side[g.side[v]] += g.degree(v);
  } else {
    for (int v = 0; v < g.n; ++v) total_deg_side[0] += g.degree(v);
  }

  std::vector<double> x(g.n, 0.0), y(g.n, 0.0);
  x[start] = 1.0;
  int start_side = g.bipartite ? g.side[start] : 0;

  auto tv_at = [&](const std::vector<double>& dist, int t) {
    int target_side = g.bipartite ? ((start_side + t) & 1) : 0;
    double denom = g.bipartite ? total_deg_side[target_side] : total_deg_side[0];
    double tv = 0.0;
    for (int v = 0; v < g.n; ++v) {
      bool on_side = !g.bipartite || g.side[v] == target_side;
      double pi = on_side ? g.degree(v) / denom : 0.0;
      tv += std::abs(dist[v] - pi);
    }
    return tv;
  };

  curve.tv.push_back(tv_at(x, 0));
  for (int t = 1; t <= t_max; ++t) {
    for (int v = 0; v < g.n; ++v) {
      double acc = 0.0;
      for (int u : g.neighbors_of(v)) acc += x[u] / g.degree(u);
      y[v] = acc;
    }
    // renormalize to unit mass to suppress drift
    double mass = 0.0;
    for (double v : y) mass += v;
    for (double& v : y) v /= mass;
    x.swap(y);
    curve.tv.push_back(tv_at(x, t));
  }

  curve.tv_envelope.resize(curve.tv.size());
  double run = std::numeric_limits<double>::infinity();
  for (size_t t = 0; t < curve.tv.size(); ++t) {
    run = std::min(run, curve.tv[t]);
    curve.tv_envelope[t] = run;
    if (curve.first_below_tol < 0 && curve.tv[t] <= tol)
      curve.first_below_tol = static_cast<int>(t);
  }
  return curve;
}

}  // namespace hamexp
