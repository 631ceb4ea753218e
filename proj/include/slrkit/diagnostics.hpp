#pragma once

#include <string>
#include <vector>

#include "slrkit/core.hpp"
#include "slrkit/lrr.hpp"
#include "slrkit/rpca.hpp"
#include "slrkit/trace.hpp"

namespace slrkit {

// Per-iteration bound on how much the augmented Lagrangian can increase due
// to the dual update and extrapolation. With y_k = Y at iteration k and
// beta1 = (alpha_km1 - 1)/alpha_k, beta2 = (alpha_km2 - 1)/alpha_km1:
//
//   drift = [ (mu_k + mu_km1) * ||y_k - (1+beta2) y_km1 + beta2 y_km2||^2
//             + 2 beta1 mu_km1 * ||y_k - y_km1||^2
//             - 2 beta1 beta2 mu_km1 * <y_km1 - y_km2, y_k - y_km1> ]
//           / (2 mu_km1^2)
//
// All alphas 1 (no momentum) collapses it to the classical
// (mu_k + mu_km1)/(2 mu_km1^2) * ||y_k - y_km1||^2 term. Requires positive
// penalties and alphas >= 1.
double dual_drift(const Matrix& y_k, const Matrix& y_km1, const Matrix& y_km2,
                  double alpha_k, double alpha_km1, double alpha_km2,
                  double mu_k, double mu_km1);

// True when the running sum of the trace's dual-drift column has settled:
// each of the last `window` increments is below rel_tol times the
// accumulated sum in magnitude. Needs at least `window` records.
bool drift_series_stabilized(const SolveTrace& trace, int window = 10,
                             double rel_tol = 1e-6);

struct BoundednessSummary {
  double max_l = 0.0;
  double max_e = 0.0;
  double max_z = 0.0;
  double max_y = 0.0;
  double max_yhat = 0.0;
  double max_y2 = 0.0;
  double max_y2hat = 0.0;
  double max_primal_residual = 0.0;
  bool diverged = false;  // a recorded norm was non-finite or past the guard
};

BoundednessSummary boundedness_report(const SolveTrace& trace);

// Stationarity residuals at the solver's final iterate.
//   primal:        feasibility gap (both constraints combined for the
//                  three-block solver)
//   e_dual:        worst-case violation of the sparse term's optimality
//                  condition against the final multiplier
//   l_fixed_point: relative distance between L and one more application of
//                  its own proximal update
struct KktResiduals {
  double primal = 0.0;
  double e_dual = 0.0;
  double l_fixed_point = 0.0;
};

KktResiduals kkt_report(const RpcaResult& result, const Matrix& d,
                        const SolverConfig& config);
KktResiduals kkt_report(const LrrResult& result, const LrrProblem& problem);

// One per-horizon check that min_{k<=K} (sum of squared block steps) decays
// at least as fast as c/K, with c calibrated from the first ten iterations.
struct RateCheck {
  int horizon = 0;
  double min_step_sum = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Requires the trace to contain at least max(horizons) records.
std::vector<RateCheck> rate_report(const SolveTrace& trace,
                                   const std::vector<int>& horizons);

// CSV serializations (header + rows, RFC-4180 quoting, %.17g floats).
std::string trace_to_csv(const SolveTrace& trace);
std::string kkt_to_csv(const KktResiduals& kkt);
std::string rate_to_csv(const std::vector<RateCheck>& checks);
std::string boundedness_to_csv(const BoundednessSummary& summary);

}  // namespace slrkit
