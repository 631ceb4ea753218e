#pragma once

#include <optional>

#include "slrkit/core.hpp"
#include "slrkit/prox.hpp"
#include "slrkit/regularizers.hpp"
#include "slrkit/trace.hpp"

namespace slrkit {

// Matrix completion: recover a low-rank X from the observed entries of O by
// proximal gradient on 1/2*||P(X) - P(O)||_F^2 + sum_i lambda*g(sigma_i(X)),
// where P keeps the masked entries.
struct CompletionProblem {
  ObservationMask mask;
  Matrix observed;  // P(O): zero off the mask
  RegularizerSpec spec;
  double mu = 1.1;  // proximal weight; must be >= 1 (the gradient of the
                    // data-fit term is 1-Lipschitz)
  int max_iter = 200;
  double step_tol = 1e-7;
  std::optional<Index> rank_cap;
};

struct CompletionResult {
  Matrix x;
  int iterations = 0;
  bool converged = false;
  SolveTrace trace;
};

// Iterates X <- gsvt(X - (P(X) - observed)/mu, 1/mu, spec) from X = observed
// until the relative step ||X_new - X||_F / max(1, ||X||_F) drops below
// step_tol or max_iter is reached. Throws std::invalid_argument when the
// observed matrix has nonzeros off the mask or shapes disagree;
// NumericalError (with the iteration index) when the factorization fails.
CompletionResult complete(const CompletionProblem& problem);

}  // namespace slrkit
