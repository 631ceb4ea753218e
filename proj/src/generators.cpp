#include "slrkit/generators.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "slrkit/rng.hpp"

namespace slrkit {

namespace {

Matrix fill_random(Index rows, Index cols, FactorDistribution dist, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      m(i, j) = dist == FactorDistribution::kStandardNormal ? rng.normal()
                                                            : rng.uniform01();
    }
  }
  return m;
}

// First `count` entries of a partial Fisher-Yates shuffle of 0..total-1:
// uniform positions without replacement.
std::vector<Index> sample_positions(Index total, Index count, Rng& rng) {
  std::vector<Index> pool(total);
  std::iota(pool.begin(), pool.end(), Index(0));
  for (Index i = 0; i < count; ++i) {
    const Index j = i + Index(rng.below(std::uint64_t(total - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(count);
  return pool;
}

void check_shape(Index rows, Index cols, const char* what) {
  if (rows <= 0 || cols <= 0) {
    throw std::invalid_argument(std::string(what) +
                                ": shape must be positive");
  }
}

}  // namespace

Matrix gen_lowrank(Index rows, Index cols, Index d, std::uint64_t seed,
                   FactorDistribution dist) {
  check_shape(rows, cols, "gen_lowrank");
  if (d < 1 || d > std::min(rows, cols)) {
    throw std::invalid_argument("gen_lowrank: rank outside [1, min(shape)]");
  }
  Rng rng(seed);
  const Matrix left = fill_random(rows, d, dist, rng);
  const Matrix right = fill_random(d, cols, dist, rng);
  return left * right;
}

Matrix gen_sparse_error(Index rows, Index cols, double fraction,
                        double magnitude, std::uint64_t seed) {
  check_shape(rows, cols, "gen_sparse_error");
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("gen_sparse_error: fraction outside [0, 1]");
  }
  if (!(magnitude >= 0.0)) {
    throw std::invalid_argument("gen_sparse_error: magnitude negative");
  }
  const Index total = rows * cols;
  const Index count = Index(std::floor(fraction * double(total)));
  Rng rng(seed);
  Matrix e = Matrix::Zero(rows, cols);
  for (Index pos : sample_positions(total, count, rng)) {
    e(pos % rows, pos / rows) = rng.uniform(-magnitude, magnitude);
  }
  return e;
}

ObservationMask gen_mask(Index rows, Index cols, double observed_fraction,
                         std::uint64_t seed) {
  check_shape(rows, cols, "gen_mask");
  if (!(observed_fraction >= 0.0 && observed_fraction <= 1.0)) {
    throw std::invalid_argument("gen_mask: fraction outside [0, 1]");
  }
  const Index total = rows * cols;
  const Index count = Index(std::floor(observed_fraction * double(total)));
  Rng rng(seed);
  std::vector<std::pair<Index, Index>> observed;
  observed.reserve(count);
  for (Index pos : sample_positions(total, count, rng)) {
    observed.emplace_back(pos % rows, pos / rows);
  }
  return ObservationMask(rows, cols, std::move(observed));
}

SubspaceData gen_subspaces(Index ambient, Index dim, Index k,
                           Index samples_per, std::uint64_t seed) {
  if (ambient < 1 || dim < 1 || k < 1 || samples_per < 1) {
    throw std::invalid_argument("gen_subspaces: sizes must be positive");
  }
  if (k * dim > ambient) {
    throw std::invalid_argument(
        "gen_subspaces: k * dim exceeds the ambient dimension");
  }
  Rng rng(seed);
  // One shared orthonormal ambient basis; consecutive blocks of dim columns
  // span exactly orthogonal subspaces.
  const Matrix g =
      fill_random(ambient, ambient, FactorDistribution::kStandardNormal, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(ambient, ambient);
  const Matrix r = q.transpose() * g;
  for (Index j = 0; j < ambient; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }

  SubspaceData data;
  data.d.resize(ambient, k * samples_per);
  data.truth.ids.assign(k * samples_per, 0);
  data.truth.outlier.assign(k * samples_per, 0);
  for (Index s = 0; s < k; ++s) {
    const Matrix coeff =
        fill_random(dim, samples_per, FactorDistribution::kStandardNormal, rng);
    data.d.middleCols(s * samples_per, samples_per) =
        q.middleCols(s * dim, dim) * coeff;
    for (Index t = 0; t < samples_per; ++t) {
      data.truth.ids[s * samples_per + t] = int(s);
    }
  }
  return data;
}

void append_outliers(SubspaceData& data, Index count, std::uint64_t seed) {
  if (count < 0) {
    throw std::invalid_argument("append_outliers: count negative");
  }
  if (count == 0) return;
  Rng rng(seed);
  const Index ambient = data.d.rows();
  const Index old_cols = data.d.cols();
  Matrix extended(ambient, old_cols + count);
  extended.leftCols(old_cols) = data.d;
  extended.rightCols(count) =
      fill_random(ambient, count, FactorDistribution::kStandardNormal, rng);
  data.d = std::move(extended);
  data.truth.ids.resize(old_cols + count, 0);
  data.truth.outlier.resize(old_cols + count, 0);
  for (Index j = old_cols; j < old_cols + count; ++j) {
    data.truth.ids[j] = 0;  // id is ignored for flagged samples
    data.truth.outlier[j] = 1;
  }
}

}  // namespace slrkit
