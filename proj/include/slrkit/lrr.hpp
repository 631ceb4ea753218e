#pragma once

#include <optional>

#include <Eigen/Cholesky>

#include "slrkit/core.hpp"
#include "slrkit/rpca.hpp"

namespace slrkit {

enum class ErrorNorm {
  kL1,   // elementwise
  kL21,  // sum of column norms; flags whole corrupted samples
};

const char* error_norm_name(ErrorNorm norm);
ErrorNorm error_norm_from_name(const std::string& name);

SolverConfig default_lrr_config();  // as SolverConfig but max_iter = 100

// Low-rank representation: D = A*Z + E with Z low rank, split as Z = L so
// the spectral penalty applies to a free variable.
struct LrrProblem {
  Matrix d;
  std::optional<Matrix> dictionary;  // A; defaults to the data itself
  ErrorNorm gamma = ErrorNorm::kL21;
  SolverConfig config = default_lrr_config();
};

struct LrrResult {
  Matrix l;
  Matrix z;
  Matrix e;
  int iterations = 0;
  bool converged = false;
  SolveTrace trace;
  Matrix y1;  // multiplier on D - A*Z - E
  Matrix y1hat;
  Matrix y2;  // multiplier on Z - L
  Matrix y2hat;
  double mu_final = 0.0;
};

// Solves the Z subproblem min_Z <Y1hat, D - A*Z - E> + <Y2hat, Z - L> +
// mu/2*(||D - A*Z - E||_F^2 + ||Z - L||_F^2). The normal equations give
// (I + A^T A) Z = A^T (D - E) + L + (A^T Y1hat - Y2hat)/mu; the SPD factor
// of I + A^T A is cached so repeated solves cost only back-substitution.
class ZSolver {
 public:
  explicit ZSolver(const Matrix& a);

  Matrix solve(const Matrix& d, const Matrix& e, const Matrix& l,
               const Matrix& y1hat, const Matrix& y2hat, double mu) const;

  const Matrix& dictionary() const { return a_; }

 private:
  Matrix a_;
  Eigen::LLT<Matrix> llt_;
};

// One-shot form of ZSolver::solve, for callers outside the ADMM loop.
Matrix solve_z(const Matrix& a, const Matrix& d, const Matrix& e,
               const Matrix& l, const Matrix& y1hat, const Matrix& y2hat,
               double mu);

// ADMM with increasing penalty and optional dual momentum on both
// multipliers (shared alpha sequence). Update order per iteration: L, Z, E,
// duals, penalty. Stops when ||D - A*Z - E||_F^2 + ||Z - L||_F^2 < feas_tol.
// Error semantics match rpca().
LrrResult lrr(const LrrProblem& problem);

}  // namespace slrkit
