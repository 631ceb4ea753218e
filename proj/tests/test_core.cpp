#include <Eigen/QR>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "slrkit/core.hpp"
#include "slrkit/generators.hpp"
#include "slrkit/rng.hpp"

using namespace slrkit;

namespace {

Matrix random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  }
  return m;
}

Matrix random_rotation(Index n, std::uint64_t seed) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(n, n, seed));
  return qr.householderQ() * Matrix::Identity(n, n);
}

}  // namespace

TEST_CASE("svd recovers a diagonal spectrum exactly") {
  Matrix m = Matrix::Zero(3, 4);
  m(0, 0) = 3.0;
  m(1, 1) = 2.0;
  m(2, 2) = 1.0;
  const SvdFactors f = svd(m);
  REQUIRE(f.sigma.size() == 3);
  CHECK(f.sigma[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.sigma[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(f.sigma[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((f.reconstruct() - m).norm() <= 1e-13);
}

TEST_CASE("svd factors are orthonormal and reconstruct the input") {
  const Matrix m = random_matrix(30, 20, 11);
  const SvdFactors f = svd(m);
  CHECK((f.u.transpose() * f.u - Matrix::Identity(20, 20)).norm() <= 1e-12);
  CHECK((f.v.transpose() * f.v - Matrix::Identity(20, 20)).norm() <= 1e-12);
  CHECK((f.reconstruct() - m).norm() / m.norm() <= 1e-13);
  for (Index i = 0; i + 1 < f.sigma.size(); ++i) {
    CHECK(f.sigma[i] >= f.sigma[i + 1]);
  }
  // sign convention: the largest-magnitude entry of each left vector is
  // nonnegative
  for (Index j = 0; j < f.u.cols(); ++j) {
    Index imax = 0;
    f.u.col(j).cwiseAbs().maxCoeff(&imax);
    CHECK(f.u(imax, j) >= 0.0);
  }
}

TEST_CASE("svd singular values are rotation invariant") {
  const Matrix m = random_matrix(25, 25, 5);
  const Matrix q = random_rotation(25, 6);
  const SvdFactors a = svd(m);
  const SvdFactors b = svd(q * m);
  CHECK((a.sigma - b.sigma).cwiseAbs().maxCoeff() <= 1e-10 * a.sigma[0]);
}

TEST_CASE("svd of a low-rank product has a vanishing tail") {
  const Matrix m = gen_lowrank(150, 150, 10, 7);
  const SvdFactors full = svd(m);
  for (Index i = 10; i < full.sigma.size(); ++i) {
    CHECK(full.sigma[i] <= 1e-10 * full.sigma[0]);
  }

  // randomized path: top factors of the capped call match the exact ones
  const SvdFactors capped = svd(m, 30);
  REQUIRE(capped.sigma.size() == 30);
  for (Index i = 0; i < 10; ++i) {
    CHECK(std::abs(capped.sigma[i] - full.sigma[i]) <= 1e-8 * full.sigma[0]);
  }
  CHECK((capped.reconstruct() - m).norm() <= 1e-8 * full.sigma[0]);
}

TEST_CASE("svd input validation") {
  CHECK_THROWS_AS(svd(Matrix()), std::invalid_argument);
  CHECK_THROWS_AS(svd(Matrix::Ones(3, 3), 4), std::invalid_argument);
  CHECK_THROWS_AS(svd(Matrix::Ones(3, 3), 0), std::invalid_argument);
  Matrix bad = Matrix::Ones(2, 2);
  bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(svd(bad), std::invalid_argument);
}

TEST_CASE("soft_threshold shrinks toward zero") {
  CHECK(soft_threshold(2.0, 0.5) == 1.5);
  CHECK(soft_threshold(-2.0, 0.5) == -1.5);
  CHECK(soft_threshold(0.3, 0.5) == 0.0);
  CHECK(soft_threshold(-0.3, 0.5) == 0.0);
  CHECK(soft_threshold(0.7, 0.0) == 0.7);
  CHECK_THROWS_AS(soft_threshold(1.0, -0.1), std::invalid_argument);

  // odd and nonexpansive
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    const double x = rng.uniform(-5.0, 5.0);
    const double y = rng.uniform(-5.0, 5.0);
    const double tau = rng.uniform(0.0, 2.0);
    CHECK(soft_threshold(-x, tau) == -soft_threshold(x, tau));
    CHECK(std::abs(soft_threshold(x, tau) - soft_threshold(y, tau)) <=
          std::abs(x - y) + 1e-15);
  }
}

TEST_CASE("relative_error basics") {
  Matrix o = Matrix::Ones(2, 2) * 2.0;  // norm 4
  Matrix x = o;
  x(0, 0) += 1.0;
  CHECK(relative_error(x, o) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(relative_error(o, o) == 0.0);
  CHECK_THROWS_AS(relative_error(o, Matrix::Zero(2, 2)), std::domain_error);
  CHECK_THROWS_AS(relative_error(o, Matrix::Zero(3, 2)),
                  std::invalid_argument);
}

TEST_CASE("psnr reference points") {
  const Matrix o = Matrix::Zero(10, 10);
  CHECK(psnr(Matrix::Constant(10, 10, 0.1), o, 1.0) ==
        doctest::Approx(20.0).epsilon(1e-12));
  // mse = 0.0025 -> 10*log10(400) = 26.0206
  CHECK(psnr(Matrix::Constant(10, 10, 0.05), o, 1.0) ==
        doctest::Approx(26.0205999132796).epsilon(1e-12));
  CHECK(std::isinf(psnr(o, o, 1.0)));
  CHECK_THROWS_AS(psnr(o, o, 0.0), std::invalid_argument);
}

TEST_CASE("ObservationMask projects onto the observed set") {
  ObservationMask mask(3, 3, {{0, 0}, {1, 2}, {2, 1}});
  CHECK(mask.count() == 3);
  CHECK(mask.indicator().sum() == doctest::Approx(3.0));

  const Matrix x = random_matrix(3, 3, 9);
  const Matrix p = mask.project(x);
  CHECK(p(0, 0) == x(0, 0));
  CHECK(p(1, 2) == x(1, 2));
  CHECK(p(2, 1) == x(2, 1));
  CHECK(p(0, 1) == 0.0);
  CHECK(p.cwiseAbs().sum() ==
        doctest::Approx(std::abs(x(0, 0)) + std::abs(x(1, 2)) +
                        std::abs(x(2, 1))));
  // idempotent
  CHECK((mask.project(p) - p).norm() == 0.0);

  CHECK_THROWS_AS(ObservationMask(3, 3, {{0, 0}, {0, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ObservationMask(3, 3, {{3, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(mask.project(Matrix::Zero(2, 2)), std::invalid_argument);
}
