#include "slrkit/clustering.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "slrkit/rng.hpp"

namespace slrkit {

AffinityMatrix affinity(const Matrix& z_star, double rank_tol) {
  require_finite(z_star, "affinity");
  if (z_star.size() == 0) {
    throw std::invalid_argument("affinity: empty representation");
  }
  if (z_star.rows() < z_star.cols()) {
    throw std::invalid_argument(
        "affinity: representation must be square or tall");
  }
  if (!(rank_tol > 0.0)) {
    throw std::invalid_argument("affinity: rank_tol must be positive");
  }
  const SvdFactors f = svd(z_star);
  if (!(f.sigma[0] > 0.0)) {
    throw std::domain_error("affinity: representation is all-zero");
  }
  Index r = 0;
  while (r < f.sigma.size() && f.sigma[r] > rank_tol * f.sigma[0]) ++r;
  const Matrix ut = f.u.leftCols(r) * f.sigma.head(r).cwiseSqrt().asDiagonal();
  Matrix h = ut * ut.transpose();
  h = 0.5 * (h + h.transpose());
  return AffinityMatrix{h.cwiseProduct(h)};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct KmeansRun {
  std::vector<int> labels;
  double inertia = kInf;
};

// One seeded k-means++ run with Lloyd refinement. Assignment ties break
// toward the lower center index, so the run is a pure function of the rng
// state.
KmeansRun kmeans_once(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  Matrix centers(k, points.cols());

  std::vector<double> dist2(n, kInf);
  centers.row(0) = points.row(Index(rng.below(n)));
  for (int c = 1; c < k; ++c) {
    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
      dist2[i] = std::min(dist2[i],
                          (points.row(i) - centers.row(c - 1)).squaredNorm());
      total += dist2[i];
    }
    if (!(total > 0.0)) {
      centers.row(c) = points.row(Index(rng.below(n)));
      continue;
    }
    const double target = rng.uniform01() * total;
    double acc = 0.0;
    Index pick = n - 1;
    for (Index i = 0; i < n; ++i) {
      acc += dist2[i];
      if (acc >= target) {
        pick = i;
        break;
      }
    }
    centers.row(c) = points.row(pick);
  }

  KmeansRun run;
  run.labels.assign(n, 0);
  std::vector<Index> counts(k, 0);
  for (int round = 0; round < 100; ++round) {
    bool changed = round == 0;
    for (Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = (points.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const double d = (points.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (Index i = 0; i < n; ++i) ++counts[run.labels[i]];
    // Re-seed each empty cluster with the point farthest from its center.
    for (int c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      Index far = 0;
      double far_d = -1.0;
      for (Index i = 0; i < n; ++i) {
        if (counts[run.labels[i]] <= 1) continue;
        const double d =
            (points.row(i) - centers.row(run.labels[i])).squaredNorm();
        if (d > far_d) {
          far_d = d;
          far = i;
        }
      }
      --counts[run.labels[far]];
      run.labels[far] = c;
      ++counts[c];
      changed = true;
    }
    if (!changed) break;
    centers.setZero();
    for (Index i = 0; i < n; ++i) centers.row(run.labels[i]) += points.row(i);
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) centers.row(c) /= double(counts[c]);
    }
  }

  run.inertia = 0.0;
  for (Index i = 0; i < n; ++i) {
    run.inertia += (points.row(i) - centers.row(run.labels[i])).squaredNorm();
  }
  return run;
}

}  // namespace

ClusterLabels spectral_cluster(const AffinityMatrix& w, int k,
                               std::uint64_t seed) {
  const Matrix& a = w.w;
  require_finite(a, "spectral_cluster");
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("spectral_cluster: affinity must be square");
  }
  const Index n = a.rows();
  if (k < 2 || Index(k) > n) {
    throw std::invalid_argument("spectral_cluster: k outside [2, samples]");
  }
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(1.0, scale)) {
    throw std::invalid_argument("spectral_cluster: affinity not symmetric");
  }
  if (a.minCoeff() < 0.0) {
    throw std::invalid_argument("spectral_cluster: negative affinity");
  }

  const Vector degrees = a.rowwise().sum();
  std::vector<std::uint8_t> outlier(n, 0);
  Vector dinv_sqrt(n);
  for (Index i = 0; i < n; ++i) {
    if (degrees[i] > 0.0) {
      dinv_sqrt[i] = 1.0 / std::sqrt(degrees[i]);
    } else {
      // Fully disconnected sample: flag it instead of failing the solve.
      dinv_sqrt[i] = 0.0;
      outlier[i] = 1;
    }
  }
  const Matrix normalized = dinv_sqrt.asDiagonal() * a * dinv_sqrt.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(normalized);
  if (eig.info() != Eigen::Success) {
    throw NumericalError("spectral_cluster: eigendecomposition failed");
  }
  // Eigen sorts eigenvalues ascending; the embedding uses the top k.
  Matrix embedding = eig.eigenvectors().rightCols(k);
  for (Index i = 0; i < n; ++i) {
    const double norm = embedding.row(i).norm();
    if (norm > 0.0 && outlier[i] == 0) {
      embedding.row(i) /= norm;
    } else {
      embedding.row(i).setZero();
    }
  }

  Rng rng(seed);
  KmeansRun best;
  constexpr int kRestarts = 20;
  for (int r = 0; r < kRestarts; ++r) {
    KmeansRun run = kmeans_once(embedding, k, rng);
    if (run.inertia < best.inertia) best = std::move(run);
  }

  ClusterLabels labels;
  labels.ids = std::move(best.labels);
  labels.outlier = std::move(outlier);
  return labels;
}

namespace {

// Minimum-cost perfect assignment on a square matrix via shortest
// augmenting paths with potentials; returns row -> column.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost) {
  const int n = int(cost.size());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (match[j] > 0) assignment[match[j] - 1] = j - 1;
  }
  return assignment;
}

bool flagged(const std::vector<std::uint8_t>& outlier, std::size_t i) {
  return !outlier.empty() && outlier[i] != 0;
}

}  // namespace

double accuracy(const ClusterLabels& predicted, const ClusterLabels& truth) {
  const std::size_t n = predicted.ids.size();
  if (n == 0 || truth.ids.size() != n) {
    throw std::invalid_argument("accuracy: label vectors must match in size");
  }
  if (!predicted.outlier.empty() && predicted.outlier.size() != n) {
    throw std::invalid_argument("accuracy: predicted outlier size mismatch");
  }
  if (!truth.outlier.empty() && truth.outlier.size() != n) {
    throw std::invalid_argument("accuracy: truth outlier size mismatch");
  }

  int kp = 0, kt = 0;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (flagged(predicted.outlier, i) || flagged(truth.outlier, i)) continue;
    if (predicted.ids[i] < 0 || truth.ids[i] < 0) {
      throw std::invalid_argument("accuracy: negative cluster id");
    }
    kp = std::max(kp, predicted.ids[i] + 1);
    kt = std::max(kt, truth.ids[i] + 1);
    ++kept;
  }
  if (kept == 0) {
    throw std::domain_error("accuracy: no samples left to score");
  }

  const int s = std::max(kp, kt);
  std::vector<std::vector<double>> counts(s, std::vector<double>(s, 0.0));
  double max_count = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (flagged(predicted.outlier, i) || flagged(truth.outlier, i)) continue;
    double& cell = counts[predicted.ids[i]][truth.ids[i]];
    cell += 1.0;
    max_count = std::max(max_count, cell);
  }

  std::vector<std::vector<double>> cost(counts);
  for (auto& row : cost) {
    for (double& c : row) c = max_count - c;
  }
  const std::vector<int> assignment = hungarian(cost);

  double matched = 0.0;
  for (int i = 0; i < s; ++i) {
    if (assignment[i] >= 0) matched += counts[i][assignment[i]];
  }
  return matched / double(kept);
}

std::vector<std::uint8_t> detect_outliers(const AffinityMatrix& w,
                                          double threshold_fraction) {
  const Matrix& a = w.w;
  require_finite(a, "detect_outliers");
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("detect_outliers: affinity must be square");
  }
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw std::invalid_argument(
        "detect_outliers: threshold_fraction outside (0, 1)");
  }
  const Index n = a.rows();
  std::vector<double> strength(n, 0.0);
  for (Index i = 0; i < n; ++i) {
    strength[i] = a.row(i).sum() - a(i, i);
  }
  std::vector<double> sorted(strength);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t half = sorted.size() / 2;
  const double median = sorted.size() % 2 == 1
                            ? sorted[half]
                            : 0.5 * (sorted[half - 1] + sorted[half]);
  std::vector<std::uint8_t> flags(n, 0);
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (strength[i] < threshold_fraction * median) flags[i] = 1;
  }
  return flags;
}

}  // namespace slrkit
