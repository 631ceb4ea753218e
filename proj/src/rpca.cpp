#include "slrkit/rpca.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "slrkit/diagnostics.hpp"

namespace slrkit {

double advance_alpha(double alpha, AlphaSchedule schedule) {
  if (!(alpha >= 1.0)) {
    throw std::invalid_argument("advance_alpha: alpha must be at least 1");
  }
  const double root = std::sqrt(1.0 + 4.0 * alpha * alpha);
  switch (schedule) {
    case AlphaSchedule::kSqrtGrowth:
      return root / 2.0;
    case AlphaSchedule::kFista:
      return (1.0 + root) / 2.0;
  }
  throw std::invalid_argument("advance_alpha: unknown schedule");
}

void SolverConfig::validate() const {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("SolverConfig: lambda must be positive");
  }
  if (!(mu0 > 0.0)) {
    throw std::invalid_argument("SolverConfig: mu0 must be positive");
  }
  if (!(kappa > 1.0)) {
    throw std::invalid_argument("SolverConfig: kappa must exceed 1");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("SolverConfig: max_iter must be positive");
  }
  if (feas_tol < 0.0) {
    throw std::invalid_argument("SolverConfig: feas_tol must be nonnegative");
  }
  spec.validate();
}

namespace {

double spectrum_penalty(const RegularizerSpec& spec, const Vector& sigma) {
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) {
    acc += eval_g(spec, sigma[i]);
  }
  return acc;
}

RpcaResult rpca_impl(const Matrix& d, const SolverConfig& config,
                     const Matrix* reference) {
  config.validate();
  require_finite(d, "rpca");
  if (d.size() == 0) {
    throw std::invalid_argument("rpca: empty input");
  }
  if (reference != nullptr &&
      (reference->rows() != d.rows() || reference->cols() != d.cols())) {
    throw std::invalid_argument("rpca: reference shape mismatch");
  }

  const Index m = d.rows();
  const Index n = d.cols();
  const double d_norm = d.norm();
  // Iterates of a healthy run stay within a few ||D||; anything this far
  // out is divergence, not slow convergence.
  const double guard = 1e6 * std::max(1.0, d_norm);

  Matrix l = Matrix::Zero(m, n);
  Matrix e = Matrix::Zero(m, n);
  MomentumState dual;
  dual.y_prev = Matrix::Zero(m, n);  // multipliers two iterations back
  dual.y = Matrix::Zero(m, n);
  dual.yhat = Matrix::Zero(m, n);
  double alpha_prev = 1.0;  // alpha two updates back
  double mu = config.mu0;

  RpcaResult result;
  result.trace.d_norm = d_norm;
  result.trace.has_reference = reference != nullptr;

  for (int k = 1; k <= config.max_iter; ++k) {
    const Matrix l_old = l;
    const Matrix e_old = e;

    GsvtResult lsol;
    try {
      lsol = gsvt_detailed(d - e + dual.yhat / mu, 1.0 / mu, config.spec,
                           config.rank_cap);
    } catch (const NumericalError& err) {
      throw NumericalError("rpca: svd failed at iteration " +
                           std::to_string(k) + ": " + err.what());
    }
    l = std::move(lsol.x);
    e = prox_l1(d - l + dual.yhat / mu, config.lambda / mu);

    const double alpha_next =
        config.momentum ? advance_alpha(dual.alpha, config.alpha_schedule)
                        : 1.0;
    const Matrix residual = d - l - e;
    const Matrix y_next = dual.yhat + mu * residual;
    Matrix yhat_next;
    if (config.momentum) {
      const double coef = (dual.alpha - 1.0) / alpha_next;
      yhat_next = y_next + coef * (y_next - dual.y);
    } else {
      yhat_next = y_next;
    }

    IterationRecord rec;
    rec.iteration = k;
    rec.primal_residual = residual.norm();
    rec.l_norm = l.norm();
    rec.e_norm = e.norm();
    rec.y_norm = y_next.norm();
    rec.yhat_norm = yhat_next.norm();
    rec.l_step_sq = (l - l_old).squaredNorm();
    rec.e_step_sq = (e - e_old).squaredNorm();
    if (k >= 2) {
      rec.dual_drift = dual_drift(y_next, dual.y, dual.y_prev, alpha_next,
                                  dual.alpha, alpha_prev, mu * config.kappa,
                                  mu);
    }
    rec.objective =
        spectrum_penalty(config.spec, lsol.sigma_out) + config.lambda * e.cwiseAbs().sum();
    rec.lagrangian = rec.objective + dual.yhat.cwiseProduct(residual).sum() +
                     0.5 * mu * residual.squaredNorm();
    if (reference != nullptr) {
      rec.ref_error = (l - *reference).norm();
    }
    rec.mu = mu;
    rec.alpha = alpha_next;
    result.trace.records.push_back(rec);

    const bool finite = l.allFinite() && e.allFinite() &&
                        y_next.allFinite() && yhat_next.allFinite();
    if (!finite || rec.l_norm > guard || rec.e_norm > guard ||
        rec.y_norm > guard || rec.yhat_norm > guard) {
      throw DivergenceError("rpca: iterates diverged at iteration " +
                                std::to_string(k),
                            std::move(result.trace));
    }

    dual.y_prev = std::move(dual.y);
    dual.y = y_next;
    dual.yhat = std::move(yhat_next);
    alpha_prev = dual.alpha;
    dual.alpha = alpha_next;
    mu *= config.kappa;
    result.iterations = k;

    if (residual.squaredNorm() < config.feas_tol) {
      result.converged = true;
      break;
    }
  }

  result.l = std::move(l);
  result.e = std::move(e);
  result.y = std::move(dual.y);
  result.yhat = std::move(dual.yhat);
  result.mu_final = mu;
  return result;
}

}  // namespace

RpcaResult rpca(const Matrix& d, const SolverConfig& config) {
  return rpca_impl(d, config, nullptr);
}

RpcaResult rpca(const Matrix& d, const SolverConfig& config,
                const Matrix& reference) {
  return rpca_impl(d, config, &reference);
}

std::vector<std::vector<double>> compare_variants(
    const Matrix& d, const Matrix& m,
    const std::vector<SolverConfig>& configs) {
  constexpr std::size_t kCurveCap = 150;
  std::vector<std::vector<double>> curves;
  curves.reserve(configs.size());
  for (const SolverConfig& config : configs) {
    const RpcaResult result = rpca(d, config, m);
    std::vector<double> curve;
    const std::size_t len =
        std::min(result.trace.records.size(), kCurveCap);
    curve.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      curve.push_back(result.trace.records[i].ref_error);
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

}  // namespace slrkit
