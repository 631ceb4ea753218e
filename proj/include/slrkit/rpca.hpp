#pragma once

#include <optional>
#include <vector>

#include "slrkit/core.hpp"
#include "slrkit/prox.hpp"
#include "slrkit/regularizers.hpp"
#include "slrkit/trace.hpp"

namespace slrkit {

// Growth rule for the dual-extrapolation sequence alpha_k (alpha_0 = 1).
enum class AlphaSchedule {
  // alpha' = sqrt(1 + 4 alpha^2) / 2; closed form alpha_k = sqrt(1 + k/4).
  kSqrtGrowth,
  // alpha' = (1 + sqrt(1 + 4 alpha^2)) / 2, the classical accelerated-
  // gradient sequence. Grows linearly instead of like sqrt(k).
  kFista,
};

double advance_alpha(double alpha,
                     AlphaSchedule schedule = AlphaSchedule::kSqrtGrowth);

struct SolverConfig {
  double lambda = 0.1;    // weight on the sparse-error term
  double mu0 = 1e-3;      // initial penalty weight
  double kappa = 1.2;     // penalty growth factor, > 1
  int max_iter = 150;
  double feas_tol = 1e-9;  // on the squared feasibility gap
  bool momentum = false;   // extrapolate the dual variable between iterations
  AlphaSchedule alpha_schedule = AlphaSchedule::kSqrtGrowth;
  RegularizerSpec spec = RegularizerSpec::nuclear(1.0);
  std::optional<Index> rank_cap;

  void validate() const;  // throws std::invalid_argument
};

// Extrapolation state of the dual variable. With momentum off, yhat == y
// and alpha stays 1, which reduces the solver to plain ADMM exactly.
struct MomentumState {
  double alpha = 1.0;
  Matrix y_prev;
  Matrix y;
  Matrix yhat;
};

struct RpcaResult {
  Matrix l;
  Matrix e;
  int iterations = 0;
  bool converged = false;
  SolveTrace trace;
  // Final dual state, kept for the stationarity diagnostics.
  Matrix y;
  Matrix yhat;
  double mu_final = 0.0;  // penalty weight a further iteration would use
};

// Sparse + low-rank decomposition D = L + E by ADMM with increasing penalty:
// L <- gsvt(D - E + Yhat/mu, 1/mu, spec), E <- prox_l1(D - L + Yhat/mu,
// lambda/mu), dual update Y <- Yhat + mu*(D - L - E) with optional momentum
// extrapolation of Yhat, then mu <- kappa*mu. Stops when the squared
// feasibility gap ||D - L - E||_F^2 drops below feas_tol. Never throws for
// non-convergence within max_iter (converged=false); throws DivergenceError
// when iterates stop being finite or outgrow the divergence guard.
RpcaResult rpca(const Matrix& d, const SolverConfig& config);

// Same solve, additionally recording ||L^k - reference||_F per iteration in
// the trace (ref_error column).
RpcaResult rpca(const Matrix& d, const SolverConfig& config,
                const Matrix& reference);

// Runs one solver per config on the same input and returns the per-iteration
// ||L^k - m||_F curves (m is the known ground truth), each truncated to at
// most 150 points.
std::vector<std::vector<double>> compare_variants(
    const Matrix& d, const Matrix& m, const std::vector<SolverConfig>& configs);

}  // namespace slrkit
