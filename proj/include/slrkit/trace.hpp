#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slrkit/errors.hpp"

namespace slrkit {

// One solver iteration's worth of measurements. Fields that do not apply to
// a given solver stay zero; `SolveTrace::has_second_block` says whether the
// z / second-constraint columns are meaningful.
struct IterationRecord {
  int iteration = 0;  // 1-based
  double primal_residual = 0.0;  // Frobenius norm of the constraint gap
  double second_residual = 0.0;  // second constraint gap (three-block solver)
  double l_norm = 0.0;
  double e_norm = 0.0;
  double z_norm = 0.0;
  double y_norm = 0.0;      // multiplier for the data-fit constraint
  double yhat_norm = 0.0;   // extrapolated multiplier
  double y2_norm = 0.0;     // multiplier for the coupling constraint
  double y2hat_norm = 0.0;
  double l_step_sq = 0.0;   // squared Frobenius step of each block
  double e_step_sq = 0.0;
  double z_step_sq = 0.0;
  // Bound on the augmented-Lagrangian increase contributed by this
  // iteration's penalty growth and extrapolated dual update; zero until
  // enough multiplier history exists.
  double dual_drift = 0.0;
  double lagrangian = 0.0;  // augmented Lagrangian, evaluated directly
  double objective = 0.0;   // unaugmented objective
  double step_norm = 0.0;   // relative iterate step (proximal gradient)
  double ref_error = 0.0;   // distance to a caller-supplied ground truth
  double mu = 0.0;          // penalty weight used by this iteration
  double alpha = 0.0;       // extrapolation sequence value after this iteration
};

struct SolveTrace {
  std::vector<IterationRecord> records;
  double d_norm = 0.0;  // Frobenius norm of the input, for divergence guards
  bool has_reference = false;
  bool has_second_block = false;
};

// Solver iterates grew past the divergence guard or stopped being finite.
// Carries the trace collected up to the failing iteration.
class DivergenceError : public NumericalError {
 public:
  DivergenceError(const std::string& what, SolveTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}

  const SolveTrace& trace() const noexcept { return trace_; }

 private:
  SolveTrace trace_;
};

}  // namespace slrkit
