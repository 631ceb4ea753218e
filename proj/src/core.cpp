#include "slrkit/core.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "slrkit/rng.hpp"

namespace slrkit {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(std::string(what) +
                                ": input contains NaN or Inf");
  }
}

namespace {

// Largest-magnitude entry of each left vector made nonnegative, so the
// factorization does not depend on backend sign choices.
void fix_column_signs(Matrix& u, Matrix& v) {
  for (Index j = 0; j < u.cols(); ++j) {
    Index imax = 0;
    u.col(j).cwiseAbs().maxCoeff(&imax);
    if (u(imax, j) < 0.0) {
      u.col(j) = -u.col(j);
      v.col(j) = -v.col(j);
    }
  }
}

SvdFactors exact_svd(const Matrix& m) {
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() != Eigen::Success) {
    throw NumericalError("svd: backend failed to converge");
  }
  SvdFactors f{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  fix_column_signs(f.u, f.v);
  return f;
}

constexpr Index kOversampling = 10;
constexpr int kPowerIterations = 2;

Matrix orthonormal_basis(const Matrix& y) {
  Eigen::HouseholderQR<Matrix> qr(y);
  return qr.householderQ() *
         Matrix::Identity(y.rows(), std::min(y.rows(), y.cols()));
}

SvdFactors randomized_svd(const Matrix& m, Index rank) {
  const Index small = std::min(m.rows(), m.cols());
  const Index sample = std::min(rank + kOversampling, small);

  // Fixed seed keeps the factorization a pure function of its arguments.
  Rng rng(0x5eedULL);
  Matrix g(m.cols(), sample);
  for (Index j = 0; j < g.cols(); ++j) {
    for (Index i = 0; i < g.rows(); ++i) {
      g(i, j) = rng.normal();
    }
  }

  Matrix q = orthonormal_basis(m * g);
  for (int it = 0; it < kPowerIterations; ++it) {
    q = orthonormal_basis(m.transpose() * q);
    q = orthonormal_basis(m * q);
  }

  SvdFactors inner = exact_svd(q.transpose() * m);
  SvdFactors f;
  f.u = (q * inner.u).leftCols(rank);
  f.sigma = inner.sigma.head(rank);
  f.v = inner.v.leftCols(rank);
  fix_column_signs(f.u, f.v);
  return f;
}

}  // namespace

SvdFactors svd(const Matrix& m, std::optional<Index> rank_cap) {
  require_finite(m, "svd");
  if (m.size() == 0) {
    throw std::invalid_argument("svd: empty matrix");
  }
  const Index small = std::min(m.rows(), m.cols());
  if (rank_cap) {
    if (*rank_cap < 1 || *rank_cap > small) {
      throw std::invalid_argument("svd: rank_cap outside [1, min(rows, cols)]");
    }
    if (*rank_cap < small) {
      return randomized_svd(m, *rank_cap);
    }
  }
  return exact_svd(m);
}

double soft_threshold(double x, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("soft_threshold: tau must be nonnegative");
  }
  if (x > tau) return x - tau;
  if (x < -tau) return x + tau;
  return 0.0;
}

double relative_error(const Matrix& x, const Matrix& reference) {
  if (x.rows() != reference.rows() || x.cols() != reference.cols()) {
    throw std::invalid_argument("relative_error: shape mismatch");
  }
  const double denom = reference.norm();
  if (denom == 0.0) {
    throw std::domain_error("relative_error: reference is all-zero");
  }
  return (x - reference).norm() / denom;
}

double psnr(const Matrix& x, const Matrix& reference, double peak) {
  if (x.rows() != reference.rows() || x.cols() != reference.cols()) {
    throw std::invalid_argument("psnr: shape mismatch");
  }
  if (!(peak > 0.0)) {
    throw std::invalid_argument("psnr: peak must be positive");
  }
  if (x.size() == 0) {
    throw std::invalid_argument("psnr: empty matrix");
  }
  const double mse = (x - reference).squaredNorm() / static_cast<double>(x.size());
  if (mse == 0.0) {
    return std::numeric_limits<double>::infinity();
  }
  return 10.0 * std::log10(peak * peak / mse);
}

ObservationMask::ObservationMask(Index rows, Index cols,
                                 std::vector<std::pair<Index, Index>> observed)
    : observed_(std::move(observed)), indicator_(Matrix::Zero(rows, cols)) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument("ObservationMask: shape must be positive");
  }
  for (const auto& [i, j] : observed_) {
    if (i < 0 || i >= rows || j < 0 || j >= cols) {
      throw std::invalid_argument("ObservationMask: position out of bounds");
    }
    if (indicator_(i, j) != 0.0) {
      throw std::invalid_argument("ObservationMask: duplicate position");
    }
    indicator_(i, j) = 1.0;
  }
}

Matrix ObservationMask::project(const Matrix& x) const {
  if (x.rows() != rows() || x.cols() != cols()) {
    throw std::invalid_argument("ObservationMask::project: shape mismatch");
  }
  return x.cwiseProduct(indicator_);
}

}  // namespace slrkit
