#include <cmath>
#include <vector>

#include "doctest.h"
#include "slrkit/completion.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/rng.hpp"

using namespace slrkit;

namespace {

ObservationMask full_mask(Index rows, Index cols) {
  std::vector<std::pair<Index, Index>> all;
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) all.emplace_back(i, j);
  }
  return ObservationMask(rows, cols, std::move(all));
}

}  // namespace

TEST_CASE("fully observed rank-1 completion lands on the shrunk fixed point") {
  // With every entry observed and the nuclear family, the iteration has the
  // scalar fixed point sigma* = sigma(O) - lambda, so the relative error is
  // exactly lambda / sigma(O).
  const Index n = 8;
  Vector u = Vector::Ones(n) / std::sqrt(double(n));
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = double(i + 1);
  v /= v.norm();
  const Matrix truth = 10.0 * u * v.transpose();

  CompletionProblem problem{full_mask(n, n), truth,
                            RegularizerSpec::nuclear(1e-3)};
  problem.step_tol = 1e-12;
  problem.max_iter = 500;
  const CompletionResult result = complete(problem);

  CHECK(result.converged);
  CHECK(relative_error(result.x, truth) ==
        doctest::Approx(1e-4).epsilon(1e-6));
  const SvdFactors f = svd(result.x);
  CHECK(f.sigma[0] == doctest::Approx(9.999).epsilon(1e-10));
}

TEST_CASE("nuclear completion objective is monotone nonincreasing") {
  const Matrix truth = gen_lowrank(25, 25, 3, 11);
  const ObservationMask mask = gen_mask(25, 25, 0.6, 12);
  CompletionProblem problem{mask, mask.project(truth),
                            RegularizerSpec::nuclear(0.05)};
  problem.max_iter = 80;
  const CompletionResult result = complete(problem);

  REQUIRE(!result.trace.records.empty());
  CHECK(int(result.trace.records.size()) == result.iterations);
  double prev = result.trace.records.front().objective;
  for (std::size_t k = 1; k < result.trace.records.size(); ++k) {
    const double cur = result.trace.records[k].objective;
    CHECK(cur <= prev + 1e-10 * std::max(1.0, std::abs(prev)));
    prev = cur;
  }
  for (const auto& rec : result.trace.records) {
    CHECK(rec.mu == 1.1);
    CHECK(std::isfinite(rec.objective));
    CHECK(rec.step_norm >= 0.0);
  }
}

TEST_CASE("converged completion reports a final step below the tolerance") {
  const Matrix truth = gen_lowrank(20, 20, 2, 21);
  CompletionProblem problem{full_mask(20, 20), truth,
                            RegularizerSpec::nuclear(1e-4)};
  problem.step_tol = 1e-10;
  problem.max_iter = 400;
  const CompletionResult result = complete(problem);
  CHECK(result.converged);
  CHECK(result.iterations <= 400);
  CHECK(result.trace.records.back().step_norm < 1e-10);

  problem.max_iter = 1;
  const CompletionResult clipped = complete(problem);
  CHECK(clipped.iterations == 1);
  CHECK(!clipped.converged);
}

TEST_CASE("completion rejects inconsistent problems") {
  const ObservationMask mask = gen_mask(10, 10, 0.5, 3);
  const Matrix truth = gen_lowrank(10, 10, 2, 4);
  CompletionProblem good{mask, mask.project(truth),
                         RegularizerSpec::nuclear(0.1)};

  CompletionProblem wrong_shape = good;
  wrong_shape.observed = Matrix::Zero(10, 9);
  CHECK_THROWS_AS(complete(wrong_shape), std::invalid_argument);

  CompletionProblem off_mask = good;
  off_mask.observed = truth;  // nonzeros everywhere, mask keeps half
  CHECK_THROWS_AS(complete(off_mask), std::invalid_argument);

  CompletionProblem bad_mu = good;
  bad_mu.mu = 0.9;
  CHECK_THROWS_AS(complete(bad_mu), std::invalid_argument);

  CompletionProblem bad_iters = good;
  bad_iters.max_iter = 0;
  CHECK_THROWS_AS(complete(bad_iters), std::invalid_argument);

  CompletionProblem bad_tol = good;
  bad_tol.step_tol = 0.0;
  CHECK_THROWS_AS(complete(bad_tol), std::invalid_argument);
}
