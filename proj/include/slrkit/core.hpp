#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "slrkit/errors.hpp"

namespace slrkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Throws std::invalid_argument when m contains NaN or Inf.
void require_finite(const Matrix& m, const char* what);

// Thin SVD factors with singular values sorted nonincreasing. Column signs
// are normalized so the largest-magnitude entry of each left vector is
// nonnegative, which keeps factorizations reproducible across backends.
struct SvdFactors {
  Matrix u;      // rows x r, orthonormal columns
  Vector sigma;  // r, nonincreasing, >= 0
  Matrix v;      // cols x r, orthonormal columns

  Matrix reconstruct() const {
    return u * sigma.asDiagonal() * v.transpose();
  }
};

// Thin SVD. Without rank_cap the factorization is exact. With rank_cap the
// top-r factors come from a randomized range finder (Gaussian test matrix
// with oversampling 10, two power iterations, fixed internal seed), accurate
// when the spectrum decays past r. Throws std::invalid_argument for an empty
// matrix or a cap outside [1, min(rows, cols)], NumericalError if the
// backend fails to converge.
SvdFactors svd(const Matrix& m, std::optional<Index> rank_cap = std::nullopt);

// sign(x) * max(|x| - tau, 0). tau must be nonnegative.
double soft_threshold(double x, double tau);

// ||x - reference||_F / ||reference||_F.
// Throws std::domain_error when the reference is all-zero.
double relative_error(const Matrix& x, const Matrix& reference);

// Peak signal-to-noise ratio in dB: 10*log10(peak^2 / mean squared error).
// Returns +infinity when the matrices are identical. peak must be positive.
double psnr(const Matrix& x, const Matrix& reference, double peak);

// Set of observed entries of a rows x cols matrix. Positions must be in
// bounds and duplicate-free.
class ObservationMask {
 public:
  ObservationMask(Index rows, Index cols,
                  std::vector<std::pair<Index, Index>> observed);

  Index rows() const { return indicator_.rows(); }
  Index cols() const { return indicator_.cols(); }
  std::size_t count() const { return observed_.size(); }
  const std::vector<std::pair<Index, Index>>& observed() const {
    return observed_;
  }

  // 0/1 matrix with ones at observed positions.
  const Matrix& indicator() const { return indicator_; }

  // Keeps observed entries of x, zeroes the rest. Shape must match.
  Matrix project(const Matrix& x) const;

 private:
  std::vector<std::pair<Index, Index>> observed_;
  Matrix indicator_;
};

}  // namespace slrkit
