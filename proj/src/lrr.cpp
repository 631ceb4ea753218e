#include "slrkit/lrr.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "slrkit/diagnostics.hpp"
#include "slrkit/prox.hpp"

namespace slrkit {

const char* error_norm_name(ErrorNorm norm) {
  switch (norm) {
    case ErrorNorm::kL1: return "l1";
    case ErrorNorm::kL21: return "l21";
  }
  throw std::invalid_argument("error_norm_name: unknown norm");
}

ErrorNorm error_norm_from_name(const std::string& name) {
  if (name == "l1") return ErrorNorm::kL1;
  if (name == "l21") return ErrorNorm::kL21;
  throw std::invalid_argument("unknown error norm: " + name);
}

SolverConfig default_lrr_config() {
  SolverConfig config;
  config.max_iter = 100;
  return config;
}

ZSolver::ZSolver(const Matrix& a) : a_(a) {
  require_finite(a, "ZSolver");
  if (a.size() == 0) {
    throw std::invalid_argument("ZSolver: empty dictionary");
  }
  const Matrix gram =
      Matrix::Identity(a.cols(), a.cols()) + a.transpose() * a;
  llt_.compute(gram);
  if (llt_.info() != Eigen::Success) {
    throw NumericalError("ZSolver: factorization of I + A^T A failed");
  }
}

Matrix ZSolver::solve(const Matrix& d, const Matrix& e, const Matrix& l,
                      const Matrix& y1hat, const Matrix& y2hat,
                      double mu) const {
  if (!(mu > 0.0)) {
    throw std::invalid_argument("ZSolver::solve: mu must be positive");
  }
  const Matrix rhs = a_.transpose() * (d - e) + l +
                     (a_.transpose() * y1hat - y2hat) / mu;
  return llt_.solve(rhs);
}

Matrix solve_z(const Matrix& a, const Matrix& d, const Matrix& e,
               const Matrix& l, const Matrix& y1hat, const Matrix& y2hat,
               double mu) {
  return ZSolver(a).solve(d, e, l, y1hat, y2hat, mu);
}

namespace {

double spectrum_penalty(const RegularizerSpec& spec, const Vector& sigma) {
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    acc += eval_g(spec, sigma[i]);
  }
  return acc;
}

double error_norm_value(ErrorNorm norm, const Matrix& e) {
  if (norm == ErrorNorm::kL1) return e.cwiseAbs().sum();
  double acc = 0.0;
  for (Index j = 0; j < e.cols(); ++j) {
    acc += e.col(j).norm();
  }
  return acc;
}

}  // namespace

LrrResult lrr(const LrrProblem& problem) {
  const SolverConfig& config = problem.config;
  config.validate();
  require_finite(problem.d, "lrr");
  if (problem.d.size() == 0) {
    throw std::invalid_argument("lrr: empty input");
  }
  const Matrix& a = problem.dictionary ? *problem.dictionary : problem.d;
  if (a.rows() != problem.d.rows()) {
    throw std::invalid_argument("lrr: dictionary row count must match data");
  }
  const ZSolver zsolver(a);

  const Index m = problem.d.rows();
  const Index n = problem.d.cols();
  const Index q = a.cols();
  const double d_norm = problem.d.norm();
  const double guard = 1e6 * std::max(1.0, d_norm);

  Matrix l = Matrix::Zero(q, n);
  Matrix z = Matrix::Zero(q, n);
  Matrix e = Matrix::Zero(m, n);
  Matrix y1_prev = Matrix::Zero(m, n), y1 = Matrix::Zero(m, n),
         y1hat = Matrix::Zero(m, n);
  Matrix y2_prev = Matrix::Zero(q, n), y2 = Matrix::Zero(q, n),
         y2hat = Matrix::Zero(q, n);
  double alpha = 1.0, alpha_prev = 1.0;
  double mu = config.mu0;

  LrrResult result;
  result.trace.d_norm = d_norm;
  result.trace.has_second_block = true;

  for (int k = 1; k <= config.max_iter; ++k) {
    const Matrix l_old = l;
    const Matrix z_old = z;
    const Matrix e_old = e;

    GsvtResult lsol;
    try {
      lsol = gsvt_detailed(z + y2hat / mu, 1.0 / mu, config.spec,
                           config.rank_cap);
    } catch (const NumericalError& err) {
      throw NumericalError("lrr: svd failed at iteration " +
                           std::to_string(k) + ": " + err.what());
    }
    l = std::move(lsol.x);
    z = zsolver.solve(problem.d, e, l, y1hat, y2hat, mu);
    const Matrix fit = problem.d - a * z;
    e = problem.gamma == ErrorNorm::kL1
            ? prox_l1(fit + y1hat / mu, config.lambda / mu)
            : prox_l21(fit + y1hat / mu, config.lambda / mu);

    const double alpha_next =
        config.momentum ? advance_alpha(alpha, config.alpha_schedule) : 1.0;
    const Matrix residual1 = fit - e;
    const Matrix residual2 = z - l;
    const Matrix y1_next = y1hat + mu * residual1;
    const Matrix y2_next = y2hat + mu * residual2;
    Matrix y1hat_next, y2hat_next;
    if (config.momentum) {
      const double coef = (alpha - 1.0) / alpha_next;
      y1hat_next = y1_next + coef * (y1_next - y1);
      y2hat_next = y2_next + coef * (y2_next - y2);
    } else {
      y1hat_next = y1_next;
      y2hat_next = y2_next;
    }

    IterationRecord rec;
    rec.iteration = k;
    rec.primal_residual = residual1.norm();
    rec.second_residual = residual2.norm();
    rec.l_norm = l.norm();
    rec.e_norm = e.norm();
    rec.z_norm = z.norm();
    rec.y_norm = y1_next.norm();
    rec.yhat_norm = y1hat_next.norm();
    rec.y2_norm = y2_next.norm();
    rec.y2hat_norm = y2hat_next.norm();
    rec.l_step_sq = (l - l_old).squaredNorm();
    rec.e_step_sq = (e - e_old).squaredNorm();
    rec.z_step_sq = (z - z_old).squaredNorm();
    if (k >= 2) {
      // The series term covers both multiplier blocks.
      rec.dual_drift = dual_drift(y1_next, y1, y1_prev, alpha_next, alpha,
                                  alpha_prev, mu * config.kappa, mu) +
                       dual_drift(y2_next, y2, y2_prev, alpha_next, alpha,
                                  alpha_prev, mu * config.kappa, mu);
    }
    rec.objective = spectrum_penalty(config.spec, lsol.sigma_out) +
                    config.lambda * error_norm_value(problem.gamma, e);
    rec.lagrangian = rec.objective + y1hat.cwiseProduct(residual1).sum() +
                     y2hat.cwiseProduct(residual2).sum() +
                     0.5 * mu * (residual1.squaredNorm() +
                                 residual2.squaredNorm());
    rec.mu = mu;
    rec.alpha = alpha_next;
    result.trace.records.push_back(rec);

    const bool finite = l.allFinite() && z.allFinite() && e.allFinite() &&
                        y1_next.allFinite() && y2_next.allFinite() &&
                        y1hat_next.allFinite() && y2hat_next.allFinite();
    if (!finite || rec.l_norm > guard || rec.z_norm > guard ||
        rec.e_norm > guard || rec.y_norm > guard || rec.y2_norm > guard ||
        rec.yhat_norm > guard || rec.y2hat_norm > guard) {
      throw DivergenceError("lrr: iterates diverged at iteration " +
                                std::to_string(k),
                            std::move(result.trace));
    }

    y1_prev = std::move(y1);
    y1 = y1_next;
    y1hat = std::move(y1hat_next);
    y2_prev = std::move(y2);
    y2 = y2_next;
    y2hat = std::move(y2hat_next);
    alpha_prev = alpha;
    alpha = alpha_next;
    mu *= config.kappa;
    result.iterations = k;

    if (residual1.squaredNorm() + residual2.squaredNorm() < config.feas_tol) {
      result.converged = true;
      break;
    }
  }

  result.l = std::move(l);
  result.z = std::move(z);
  result.e = std::move(e);
  result.y1 = std::move(y1);
  result.y1hat = std::move(y1hat);
  result.y2 = std::move(y2);
  result.y2hat = std::move(y2hat);
  result.mu_final = mu;
  return result;
}

}  // namespace slrkit
