#include "slrkit/completion.hpp"

#include <string>

namespace slrkit {

namespace {

double spectrum_penalty(const RegularizerSpec& spec, const Vector& sigma) {
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    acc += eval_g(spec, sigma[i]);
  }
  return acc;
}

}  // namespace

CompletionResult complete(const CompletionProblem& problem) {
  problem.spec.validate();
  require_finite(problem.observed, "complete");
  if (problem.observed.rows() != problem.mask.rows() ||
      problem.observed.cols() != problem.mask.cols()) {
    throw std::invalid_argument("complete: observed/mask shape mismatch");
  }
  if ((problem.observed - problem.mask.project(problem.observed)).norm() !=
      0.0) {
    throw std::invalid_argument(
        "complete: observed matrix has nonzeros off the mask");
  }
  if (!(problem.mu >= 1.0)) {
    throw std::invalid_argument("complete: mu must be at least 1");
  }
  if (problem.max_iter < 1) {
    throw std::invalid_argument("complete: max_iter must be positive");
  }
  if (!(problem.step_tol > 0.0)) {
    throw std::invalid_argument("complete: step_tol must be positive");
  }

  CompletionResult result;
  result.x = problem.observed;
  result.trace.d_norm = problem.observed.norm();

  for (int k = 1; k <= problem.max_iter; ++k) {
    const Matrix gradient = problem.mask.project(result.x) - problem.observed;
    GsvtResult prox;
    try {
      prox = gsvt_detailed(result.x - gradient / problem.mu,
                           1.0 / problem.mu, problem.spec, problem.rank_cap);
    } catch (const NumericalError& err) {
      throw NumericalError("complete: factorization failed at iteration " +
                           std::to_string(k) + ": " + err.what());
    }

    const double step = (prox.x - result.x).norm();
    const double rel_step = step / std::max(1.0, result.x.norm());
    result.x = std::move(prox.x);
    result.iterations = k;

    IterationRecord rec;
    rec.iteration = k;
    rec.l_norm = result.x.norm();
    rec.step_norm = rel_step;
    rec.mu = problem.mu;
    rec.objective =
        0.5 * (problem.mask.project(result.x) - problem.observed).squaredNorm() +
        spectrum_penalty(problem.spec, prox.sigma_out);
    result.trace.records.push_back(rec);

    if (rel_step < problem.step_tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace slrkit
