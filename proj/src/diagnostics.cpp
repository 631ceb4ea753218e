#include "slrkit/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "slrkit/csv.hpp"
#include "slrkit/prox.hpp"

namespace slrkit {

double dual_drift(const Matrix& y_k, const Matrix& y_km1, const Matrix& y_km2,
                  double alpha_k, double alpha_km1, double alpha_km2,
                  double mu_k, double mu_km1) {
  if (!(mu_k > 0.0) || !(mu_km1 > 0.0)) {
    throw std::invalid_argument("dual_drift: penalties must be positive");
  }
  if (!(alpha_k >= 1.0) || !(alpha_km1 >= 1.0) || !(alpha_km2 >= 1.0)) {
    throw std::invalid_argument("dual_drift: alphas must be at least 1");
  }
  const double beta1 = (alpha_km1 - 1.0) / alpha_k;
  const double beta2 = (alpha_km2 - 1.0) / alpha_km1;
  const Matrix mixed = y_k - (1.0 + beta2) * y_km1 + beta2 * y_km2;
  const Matrix dy = y_k - y_km1;
  const Matrix dy_prev = y_km1 - y_km2;
  return ((mu_k + mu_km1) * mixed.squaredNorm() +
          2.0 * beta1 * mu_km1 * dy.squaredNorm() -
          2.0 * beta1 * beta2 * mu_km1 * dy_prev.cwiseProduct(dy).sum()) /
         (2.0 * mu_km1 * mu_km1);
}

bool drift_series_stabilized(const SolveTrace& trace, int window,
                             double rel_tol) {
  if (window < 1 || !(rel_tol > 0.0)) {
    throw std::invalid_argument("drift_series_stabilized: bad parameters");
  }
  const auto& records = trace.records;
  if (records.size() < static_cast<std::size_t>(window)) {
    throw std::invalid_argument(
        "drift_series_stabilized: trace shorter than the window");
  }
  double running = 0.0;
  std::vector<double> partial(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    running += records[i].dual_drift;
    partial[i] = running;
  }
  for (std::size_t i = records.size() - static_cast<std::size_t>(window);
       i < records.size(); ++i) {
    const double scale = std::max(std::abs(partial[i]), 1e-30);
    if (!(std::abs(records[i].dual_drift) < rel_tol * scale)) {
      return false;
    }
  }
  return true;
}

BoundednessSummary boundedness_report(const SolveTrace& trace) {
  BoundednessSummary s;
  const double guard = 1e6 * std::max(1.0, trace.d_norm);
  auto track = [&](double& slot, double value) {
    if (!std::isfinite(value) || value > guard) s.diverged = true;
    slot = std::max(slot, value);
  };
  for (const IterationRecord& rec : trace.records) {
    track(s.max_l, rec.l_norm);
    track(s.max_e, rec.e_norm);
    track(s.max_z, rec.z_norm);
    track(s.max_y, rec.y_norm);
    track(s.max_yhat, rec.yhat_norm);
    track(s.max_y2, rec.y2_norm);
    track(s.max_y2hat, rec.y2hat_norm);
    track(s.max_primal_residual, rec.primal_residual);
  }
  return s;
}

namespace {

// Worst violation of the soft-threshold optimality condition: where e is
// nonzero the multiplier must equal lambda*sign(e); elsewhere it must stay
// inside [-lambda, lambda].
double l1_dual_residual(const Matrix& e, const Matrix& y, double lambda) {
  double worst = 0.0;
  for (Index j = 0; j < e.cols(); ++j) {
    for (Index i = 0; i < e.rows(); ++i) {
      const double ev = e(i, j);
      const double yv = y(i, j);
      const double violation =
          ev != 0.0 ? std::abs(yv - lambda * (ev > 0.0 ? 1.0 : -1.0))
                    : std::max(0.0, std::abs(yv) - lambda);
      worst = std::max(worst, violation);
    }
  }
  return worst;
}

// Columnwise analogue: nonzero columns need y_j = lambda * e_j/||e_j||,
// zero columns need ||y_j|| <= lambda.
double l21_dual_residual(const Matrix& e, const Matrix& y, double lambda) {
  double worst = 0.0;
  for (Index j = 0; j < e.cols(); ++j) {
    const double norm = e.col(j).norm();
    const double violation =
        norm > 0.0 ? (y.col(j) - (lambda / norm) * e.col(j)).norm()
                   : std::max(0.0, y.col(j).norm() - lambda);
    worst = std::max(worst, violation);
  }
  return worst;
}

}  // namespace

KktResiduals kkt_report(const RpcaResult& result, const Matrix& d,
                        const SolverConfig& config) {
  KktResiduals kkt;
  kkt.primal = (d - result.l - result.e).norm();
  kkt.e_dual = l1_dual_residual(result.e, result.y, config.lambda);
  const Matrix refreshed =
      gsvt(d - result.e + result.yhat / result.mu_final, 1.0 / result.mu_final,
           config.spec, config.rank_cap);
  kkt.l_fixed_point =
      (refreshed - result.l).norm() / std::max(1.0, result.l.norm());
  return kkt;
}

KktResiduals kkt_report(const LrrResult& result, const LrrProblem& problem) {
  const Matrix& a =
      problem.dictionary ? *problem.dictionary : problem.d;
  KktResiduals kkt;
  const double r1 = (problem.d - a * result.z - result.e).squaredNorm();
  const double r2 = (result.z - result.l).squaredNorm();
  kkt.primal = std::sqrt(r1 + r2);
  kkt.e_dual = problem.gamma == ErrorNorm::kL1
                   ? l1_dual_residual(result.e, result.y1, problem.config.lambda)
                   : l21_dual_residual(result.e, result.y1,
                                       problem.config.lambda);
  const Matrix refreshed =
      gsvt(result.z + result.y2hat / result.mu_final, 1.0 / result.mu_final,
           problem.config.spec, problem.config.rank_cap);
  kkt.l_fixed_point =
      (refreshed - result.l).norm() / std::max(1.0, result.l.norm());
  return kkt;
}

std::vector<RateCheck> rate_report(const SolveTrace& trace,
                                   const std::vector<int>& horizons) {
  if (horizons.empty()) {
    throw std::invalid_argument("rate_report: no horizons");
  }
  const auto& records = trace.records;
  for (int h : horizons) {
    if (h < 1 || static_cast<std::size_t>(h) > records.size()) {
      throw std::invalid_argument(
          "rate_report: horizon outside the recorded range");
    }
  }
  auto step_sum = [&](std::size_t i) {
    return records[i].l_step_sq + records[i].e_step_sq + records[i].z_step_sq;
  };
  // Calibration constant: a c/K envelope anchored on the first iterations,
  // with headroom so the check probes the decay rate rather than noise.
  const std::size_t lead = std::min<std::size_t>(10, records.size());
  double lead_min = step_sum(0);
  for (std::size_t i = 1; i < lead; ++i) {
    lead_min = std::min(lead_min, step_sum(i));
  }
  const double c_fit = 10.0 * lead_min;

  std::vector<RateCheck> checks;
  checks.reserve(horizons.size());
  for (int h : horizons) {
    RateCheck check;
    check.horizon = h;
    double best = step_sum(0);
    for (std::size_t i = 1; i < static_cast<std::size_t>(h); ++i) {
      best = std::min(best, step_sum(i));
    }
    check.min_step_sum = best;
    check.bound = c_fit / static_cast<double>(h);
    check.pass = best <= check.bound;
    checks.push_back(check);
  }
  return checks;
}

std::string trace_to_csv(const SolveTrace& trace) {
  csv::Writer w({"iteration", "primal_residual", "second_residual", "l_norm",
                 "e_norm", "z_norm", "y_norm", "yhat_norm", "y2_norm",
                 "y2hat_norm", "l_step_sq", "e_step_sq", "z_step_sq",
                 "dual_drift", "lagrangian", "objective", "step_norm",
                 "ref_error", "mu", "alpha"});
  for (const IterationRecord& r : trace.records) {
    w.add_row({csv::format(r.iteration), csv::format(r.primal_residual),
               csv::format(r.second_residual), csv::format(r.l_norm),
               csv::format(r.e_norm), csv::format(r.z_norm),
               csv::format(r.y_norm), csv::format(r.yhat_norm),
               csv::format(r.y2_norm), csv::format(r.y2hat_norm),
               csv::format(r.l_step_sq), csv::format(r.e_step_sq),
               csv::format(r.z_step_sq), csv::format(r.dual_drift),
               csv::format(r.lagrangian), csv::format(r.objective),
               csv::format(r.step_norm), csv::format(r.ref_error),
               csv::format(r.mu), csv::format(r.alpha)});
  }
  return w.str();
}

std::string kkt_to_csv(const KktResiduals& kkt) {
  csv::Writer w({"primal", "e_dual", "l_fixed_point"});
  w.add_row({csv::format(kkt.primal), csv::format(kkt.e_dual),
             csv::format(kkt.l_fixed_point)});
  return w.str();
}

std::string rate_to_csv(const std::vector<RateCheck>& checks) {
  csv::Writer w({"horizon", "min_step_sum", "bound", "pass"});
  for (const RateCheck& c : checks) {
    w.add_row({csv::format(c.horizon), csv::format(c.min_step_sum),
               csv::format(c.bound), c.pass ? "1" : "0"});
  }
  return w.str();
}

std::string boundedness_to_csv(const BoundednessSummary& s) {
  csv::Writer w({"max_l", "max_e", "max_z", "max_y", "max_yhat", "max_y2",
                 "max_y2hat", "max_primal_residual", "diverged"});
  w.add_row({csv::format(s.max_l), csv::format(s.max_e), csv::format(s.max_z),
             csv::format(s.max_y), csv::format(s.max_yhat),
             csv::format(s.max_y2), csv::format(s.max_y2hat),
             csv::format(s.max_primal_residual), s.diverged ? "1" : "0"});
  return w.str();
}

}  // namespace slrkit
