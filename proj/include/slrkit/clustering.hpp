#pragma once

#include <cstdint>
#include <vector>

#include "slrkit/core.hpp"

namespace slrkit {

// Symmetric nonnegative sample-affinity matrix.
struct AffinityMatrix {
  Matrix w;
};

struct ClusterLabels {
  std::vector<int> ids;                // cluster id per sample, >= 0
  std::vector<std::uint8_t> outlier;   // 1 = excluded from scoring; may be
                                       // empty, meaning no outliers
};

// Affinity from a representation matrix: with Z = U S V^T truncated at
// singular values above rank_tol * s_1, form Ut = U * sqrt(S); the affinity
// is the elementwise square of Ut Ut^T (symmetrized). Squaring keeps entries
// nonnegative while preserving block structure. Z must have at least as
// many rows as columns; throws std::domain_error when Z is all-zero.
AffinityMatrix affinity(const Matrix& z_star, double rank_tol = 1e-6);

// Normalized spectral clustering: scale rows/columns of W by the inverse
// square-root degree, embed samples in the top-k eigenvector rows (unit
// normalized), then k-means with k-means++ seeding, 20 restarts, best
// inertia kept. Zero-degree samples are flagged as outliers and receive a
// zero embedding row rather than failing the solve. Deterministic for a
// fixed seed. Requires 2 <= k <= sample count, W square / symmetric /
// nonnegative.
ClusterLabels spectral_cluster(const AffinityMatrix& w, int k,
                               std::uint64_t seed);

// Best-assignment clustering accuracy: fraction of samples whose predicted
// cluster maps to their true cluster under the permutation that maximizes
// agreement. Samples flagged as outliers on either side are excluded.
// Label ids are matched by optimal assignment, so they need not coincide.
double accuracy(const ClusterLabels& predicted, const ClusterLabels& truth);

// Flags samples whose off-diagonal affinity row sum falls below
// threshold_fraction times the median off-diagonal row sum.
std::vector<std::uint8_t> detect_outliers(const AffinityMatrix& w,
                                          double threshold_fraction);

}  // namespace slrkit
