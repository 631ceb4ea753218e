#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "slrkit/diagnostics.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/prox.hpp"
#include "slrkit/rng.hpp"

using namespace slrkit;

namespace {

Matrix random_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

SolveTrace synthetic_trace(const std::vector<double>& step_sums) {
  SolveTrace trace;
  for (std::size_t i = 0; i < step_sums.size(); ++i) {
    IterationRecord rec;
    rec.iteration = int(i) + 1;
    // split the budget across the blocks to exercise the summation
    rec.l_step_sq = 0.5 * step_sums[i];
    rec.e_step_sq = 0.3 * step_sums[i];
    rec.z_step_sq = 0.2 * step_sums[i];
    trace.records.push_back(rec);
  }
  return trace;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

}  // namespace

TEST_CASE("dual drift collapses to the classical term without extrapolation") {
  Rng rng(113);
  const Matrix yk = random_matrix(5, 6, rng);
  const Matrix ykm1 = random_matrix(5, 6, rng);
  const Matrix ykm2 = random_matrix(5, 6, rng);
  const double mu_k = 2.4, mu_km1 = 2.0;

  const double drift =
      dual_drift(yk, ykm1, ykm2, 1.0, 1.0, 1.0, mu_k, mu_km1);
  const double classical = (mu_k + mu_km1) / (2.0 * mu_km1 * mu_km1) *
                           (yk - ykm1).squaredNorm();
  CHECK(drift == doctest::Approx(classical).epsilon(1e-14));
}

TEST_CASE("dual drift equals its extrapolated-multiplier form") {
  // Independent algebraic route: with yhat_km1 = y_km1 + beta2*(y_km1 -
  // y_km2), the same quantity is
  //   [ (mu_k + mu_km1) ||y_k - yhat_km1||^2
  //     + 2 beta1 mu_km1 <y_k - y_km1, y_k - yhat_km1> ] / (2 mu_km1^2).
  Rng rng(127);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix yk = random_matrix(4, 7, rng);
    const Matrix ykm1 = random_matrix(4, 7, rng);
    const Matrix ykm2 = random_matrix(4, 7, rng);
    const double alpha_k = 1.8, alpha_km1 = 1.5, alpha_km2 = 1.2;
    const double mu_k = 3.1, mu_km1 = 2.2;

    const double beta1 = (alpha_km1 - 1.0) / alpha_k;
    const double beta2 = (alpha_km2 - 1.0) / alpha_km1;
    const Matrix yhat_km1 = ykm1 + beta2 * (ykm1 - ykm2);
    const Matrix gap = yk - yhat_km1;
    const double oracle =
        ((mu_k + mu_km1) * gap.squaredNorm() +
         2.0 * beta1 * mu_km1 * (yk - ykm1).cwiseProduct(gap).sum()) /
        (2.0 * mu_km1 * mu_km1);

    const double drift = dual_drift(yk, ykm1, ykm2, alpha_k, alpha_km1,
                                    alpha_km2, mu_k, mu_km1);
    CHECK(drift == doctest::Approx(oracle).epsilon(1e-12));
  }

  CHECK_THROWS_AS(dual_drift(Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                             Matrix::Zero(2, 2), 1.0, 1.0, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_drift(Matrix::Zero(2, 2), Matrix::Zero(2, 2),
                             Matrix::Zero(2, 2), 0.9, 1.0, 1.0, 1.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("solver drift records use the trailing multiplier history") {
  // Re-run the momentum solver by hand, capture the multiplier history, and
  // recompute every recorded drift value from it.
  const Matrix l0 = gen_lowrank(14, 14, 2, 211);
  const Matrix e0 = gen_sparse_error(14, 14, 0.05,
                                     l0.cwiseAbs().maxCoeff(), 212);
  const Matrix d = l0 + e0;
  SolverConfig config;
  config.lambda = 1.0 / std::sqrt(14.0);
  config.momentum = true;
  config.max_iter = 8;
  config.feas_tol = 0.0;

  const RpcaResult result = rpca(d, config);
  REQUIRE(result.iterations == 8);

  std::vector<Matrix> ys;
  std::vector<double> alphas;
  std::vector<double> mus;
  Matrix l = Matrix::Zero(14, 14);
  Matrix e = Matrix::Zero(14, 14);
  Matrix y = Matrix::Zero(14, 14);
  Matrix yhat = Matrix::Zero(14, 14);
  double alpha = 1.0;
  double mu = config.mu0;
  for (int k = 1; k <= 8; ++k) {
    l = gsvt(d - e + yhat / mu, 1.0 / mu, config.spec, std::nullopt);
    e = prox_l1(d - l + yhat / mu, config.lambda / mu);
    const double alpha_next = advance_alpha(alpha, config.alpha_schedule);
    const Matrix residual = d - l - e;
    const Matrix y_next = yhat + mu * residual;
    const double coef = (alpha - 1.0) / alpha_next;
    yhat = y_next + coef * (y_next - y);
    y = y_next;
    ys.push_back(y);
    alphas.push_back(alpha_next);
    mus.push_back(mu);
    alpha = alpha_next;
    mu *= config.kappa;
  }

  const Matrix zero = Matrix::Zero(14, 14);
  CHECK(result.trace.records[0].dual_drift == 0.0);
  for (int k = 2; k <= 8; ++k) {
    const Matrix& ykm2 = k >= 3 ? ys[k - 3] : zero;
    const double akm2 = k >= 3 ? alphas[k - 3] : 1.0;
    const double expected =
        dual_drift(ys[k - 1], ys[k - 2], ykm2, alphas[k - 1], alphas[k - 2],
                   akm2, mus[k - 1] * config.kappa, mus[k - 1]);
    CHECK(result.trace.records[k - 1].dual_drift == expected);
  }
}

TEST_CASE("three-block drift records sum both multiplier blocks") {
  Rng rng(137);
  const Matrix d = random_matrix(9, 11, rng);
  LrrProblem problem;
  problem.d = d;
  problem.gamma = ErrorNorm::kL1;
  problem.config = default_lrr_config();
  problem.config.lambda = 0.3;
  problem.config.max_iter = 6;
  problem.config.feas_tol = 0.0;
  problem.config.momentum = true;

  const LrrResult result = lrr(problem);
  REQUIRE(result.iterations == 6);

  const ZSolver zsolver(d);
  std::vector<Matrix> y1s, y2s;
  std::vector<double> alphas, mus;
  Matrix l = Matrix::Zero(11, 11);
  Matrix z = Matrix::Zero(11, 11);
  Matrix e = Matrix::Zero(9, 11);
  Matrix y1 = Matrix::Zero(9, 11), y1hat = Matrix::Zero(9, 11);
  Matrix y2 = Matrix::Zero(11, 11), y2hat = Matrix::Zero(11, 11);
  double alpha = 1.0;
  double mu = problem.config.mu0;
  for (int k = 1; k <= 6; ++k) {
    l = gsvt(z + y2hat / mu, 1.0 / mu, problem.config.spec, std::nullopt);
    z = zsolver.solve(d, e, l, y1hat, y2hat, mu);
    const Matrix fit = d - d * z;
    e = prox_l1(fit + y1hat / mu, problem.config.lambda / mu);
    const double alpha_next = advance_alpha(alpha, problem.config.alpha_schedule);
    const Matrix y1_next = y1hat + mu * (fit - e);
    const Matrix y2_next = y2hat + mu * (z - l);
    const double coef = (alpha - 1.0) / alpha_next;
    y1hat = y1_next + coef * (y1_next - y1);
    y2hat = y2_next + coef * (y2_next - y2);
    y1 = y1_next;
    y2 = y2_next;
    y1s.push_back(y1);
    y2s.push_back(y2);
    alphas.push_back(alpha_next);
    mus.push_back(mu);
    alpha = alpha_next;
    mu *= problem.config.kappa;
  }

  const Matrix zero1 = Matrix::Zero(9, 11);
  const Matrix zero2 = Matrix::Zero(11, 11);
  for (int k = 2; k <= 6; ++k) {
    const double akm2 = k >= 3 ? alphas[k - 3] : 1.0;
    const double expected =
        dual_drift(y1s[k - 1], y1s[k - 2], k >= 3 ? y1s[k - 3] : zero1,
                   alphas[k - 1], alphas[k - 2], akm2,
                   mus[k - 1] * problem.config.kappa, mus[k - 1]) +
        dual_drift(y2s[k - 1], y2s[k - 2], k >= 3 ? y2s[k - 3] : zero2,
                   alphas[k - 1], alphas[k - 2], akm2,
                   mus[k - 1] * problem.config.kappa, mus[k - 1]);
    CHECK(result.trace.records[k - 1].dual_drift == expected);
  }
}

TEST_CASE("drift series stabilization detects settled and unsettled sums") {
  SolveTrace settled;
  for (int k = 1; k <= 30; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    rec.dual_drift = std::pow(0.1, k);  // geometric, sum ~ 0.111
    settled.records.push_back(rec);
  }
  CHECK(drift_series_stabilized(settled, 10, 1e-6));

  SolveTrace unsettled;
  for (int k = 1; k <= 30; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    rec.dual_drift = 1.0;
    unsettled.records.push_back(rec);
  }
  CHECK(!drift_series_stabilized(unsettled, 10, 1e-6));

  SolveTrace zeros;
  for (int k = 1; k <= 12; ++k) {
    IterationRecord rec;
    rec.iteration = k;
    zeros.records.push_back(rec);
  }
  CHECK(drift_series_stabilized(zeros, 10, 1e-6));

  CHECK_THROWS_AS(drift_series_stabilized(settled, 0, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(drift_series_stabilized(settled, 31, 1e-6),
                  std::invalid_argument);
  CHECK_THROWS_AS(drift_series_stabilized(settled, 10, 0.0),
                  std::invalid_argument);
}

TEST_CASE("boundedness report tracks maxima and the divergence guard") {
  SolveTrace trace;
  trace.d_norm = 2.0;
  IterationRecord a;
  a.l_norm = 1.0;
  a.e_norm = 3.0;
  a.y_norm = 0.5;
  a.primal_residual = 4.0;
  IterationRecord b;
  b.l_norm = 2.5;
  b.e_norm = 1.0;
  b.z_norm = 7.0;
  trace.records = {a, b};

  const BoundednessSummary s = boundedness_report(trace);
  CHECK(s.max_l == 2.5);
  CHECK(s.max_e == 3.0);
  CHECK(s.max_z == 7.0);
  CHECK(s.max_y == 0.5);
  CHECK(s.max_primal_residual == 4.0);
  CHECK(!s.diverged);

  // guard is 1e6 * max(1, d_norm) = 2e6
  IterationRecord c;
  c.l_norm = 2.5e6;
  trace.records.push_back(c);
  CHECK(boundedness_report(trace).diverged);

  trace.records.pop_back();
  IterationRecord nan_rec;
  nan_rec.e_norm = std::nan("");
  trace.records.push_back(nan_rec);
  CHECK(boundedness_report(trace).diverged);
}

TEST_CASE("rpca kkt residuals are small at a converged solution") {
  const Matrix l0 = gen_lowrank(20, 20, 2, 401);
  const Matrix e0 = gen_sparse_error(20, 20, 0.05,
                                     l0.cwiseAbs().maxCoeff(), 402);
  const Matrix d = l0 + e0;
  SolverConfig config;
  config.lambda = 1.0 / std::sqrt(20.0);
  config.feas_tol = 1e-9;

  const RpcaResult result = rpca(d, config);
  REQUIRE(result.converged);
  const KktResiduals kkt = kkt_report(result, d, config);

  // the primal residual is exactly the last recorded feasibility gap
  CHECK(kkt.primal == result.trace.records.back().primal_residual);
  CHECK(kkt.primal * kkt.primal < config.feas_tol);
  // the sparse-term condition holds to rounding: the dual update enforces it
  CHECK(kkt.e_dual <= 1e-6);
  CHECK(kkt.l_fixed_point <= 1e-3);
  CHECK(kkt.l_fixed_point >= 0.0);
}

TEST_CASE("lrr kkt residuals are small at a converged solution") {
  const SubspaceData data = gen_subspaces(20, 2, 2, 10, 31);
  LrrProblem problem;
  problem.d = data.d;
  problem.gamma = ErrorNorm::kL21;
  problem.config = default_lrr_config();
  problem.config.lambda = 0.8;
  problem.config.max_iter = 150;
  problem.config.feas_tol = 1e-12;

  const LrrResult result = lrr(problem);
  REQUIRE(result.converged);
  const KktResiduals kkt = kkt_report(result, problem);
  CHECK(kkt.primal * kkt.primal < problem.config.feas_tol);
  CHECK(kkt.e_dual <= 1e-6);
  CHECK(kkt.l_fixed_point <= 1e-3);
}

TEST_CASE("rate report checks the min step sum against a c over K envelope") {
  // decay 1/k^2: passes exactly when K >= 10 with the leading-10 calibration
  std::vector<double> quadratic;
  for (int k = 1; k <= 40; ++k) quadratic.push_back(1.0 / double(k) / double(k));
  const SolveTrace trace = synthetic_trace(quadratic);

  const auto checks = rate_report(trace, {5, 12, 20, 40});
  REQUIRE(checks.size() == 4);
  CHECK(checks[0].horizon == 5);
  CHECK(!checks[0].pass);  // 1/25 > (10/100)/5
  CHECK(checks[1].pass);   // 1/144 < (10/100)/12
  CHECK(checks[2].pass);
  CHECK(checks[3].pass);
  CHECK(checks[1].min_step_sum ==
        doctest::Approx(1.0 / 144.0).epsilon(1e-12));
  CHECK(checks[1].bound == doctest::Approx(0.1 / 12.0).epsilon(1e-12));
  CHECK(checks[3].bound == doctest::Approx(0.0025).epsilon(1e-12));

  // constant steps fail once the horizon outgrows the calibration headroom
  const SolveTrace flat = synthetic_trace(std::vector<double>(40, 1.0));
  const auto flat_checks = rate_report(flat, {5, 8, 20});
  CHECK(flat_checks[0].pass);
  CHECK(flat_checks[1].pass);
  CHECK(!flat_checks[2].pass);

  CHECK_THROWS_AS(rate_report(trace, {}), std::invalid_argument);
  CHECK_THROWS_AS(rate_report(trace, {0}), std::invalid_argument);
  CHECK_THROWS_AS(rate_report(trace, {41}), std::invalid_argument);
}

TEST_CASE("csv serializations carry full precision and exact headers") {
  SolveTrace trace;
  IterationRecord rec;
  rec.iteration = 1;
  rec.primal_residual = 0.1;
  rec.mu = 1e-3;
  rec.alpha = 1.0;
  trace.records.push_back(rec);

  const auto lines = split_lines(trace_to_csv(trace));
  REQUIRE(lines.size() == 2);
  CHECK(lines[0] ==
        "iteration,primal_residual,second_residual,l_norm,e_norm,z_norm,"
        "y_norm,yhat_norm,y2_norm,y2hat_norm,l_step_sq,e_step_sq,z_step_sq,"
        "dual_drift,lagrangian,objective,step_norm,ref_error,mu,alpha");
  // the second field round-trips to exactly 0.1
  std::istringstream row(lines[1]);
  std::string field;
  std::getline(row, field, ',');
  CHECK(field == "1");
  std::getline(row, field, ',');
  CHECK(std::stod(field) == 0.1);

  KktResiduals kkt;
  kkt.primal = 1.0 / 3.0;
  const auto kkt_lines = split_lines(kkt_to_csv(kkt));
  REQUIRE(kkt_lines.size() == 2);
  CHECK(kkt_lines[0] == "primal,e_dual,l_fixed_point");
  std::istringstream kkt_row(kkt_lines[1]);
  std::getline(kkt_row, field, ',');
  CHECK(std::stod(field) == 1.0 / 3.0);

  RateCheck check;
  check.horizon = 10;
  check.min_step_sum = 0.25;
  check.bound = 0.5;
  check.pass = true;
  const auto rate_lines = split_lines(rate_to_csv({check}));
  REQUIRE(rate_lines.size() == 2);
  CHECK(rate_lines[0] == "horizon,min_step_sum,bound,pass");
  CHECK(rate_lines[1] == "10,0.25,0.5,1");

  BoundednessSummary summary;
  summary.max_l = 2.0;
  summary.diverged = true;
  const auto bound_lines = split_lines(boundedness_to_csv(summary));
  REQUIRE(bound_lines.size() == 2);
  CHECK(bound_lines[0] ==
        "max_l,max_e,max_z,max_y,max_yhat,max_y2,max_y2hat,"
        "max_primal_residual,diverged");
  CHECK(bound_lines[1] == "2,0,0,0,0,0,0,0,1");
}
