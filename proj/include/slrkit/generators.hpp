#pragma once

#include <cstdint>

#include "slrkit/clustering.hpp"
#include "slrkit/core.hpp"

namespace slrkit {

enum class FactorDistribution {
  kStandardNormal,
  kUniform01,
};

// Rank-d product of two i.i.d. factor matrices (rows x d) * (d x cols).
Matrix gen_lowrank(Index rows, Index cols, Index d, std::uint64_t seed,
                   FactorDistribution dist = FactorDistribution::kStandardNormal);

// Sparse error with floor(fraction * rows * cols) corrupted entries chosen
// uniformly without replacement, values uniform on [-magnitude, magnitude].
Matrix gen_sparse_error(Index rows, Index cols, double fraction,
                        double magnitude, std::uint64_t seed);

// Uniform observation pattern with floor(observed_fraction * rows * cols)
// entries kept.
ObservationMask gen_mask(Index rows, Index cols, double observed_fraction,
                         std::uint64_t seed);

struct SubspaceData {
  Matrix d;             // ambient x (k * samples_per), samples as columns
  ClusterLabels truth;  // ground-truth subspace id per column
};

// k disjoint dim-dimensional subspaces spanned by blocks of one random
// orthonormal ambient basis; samples_per points per subspace with standard
// normal coefficients. Requires k * dim <= ambient.
SubspaceData gen_subspaces(Index ambient, Index dim, Index k,
                           Index samples_per, std::uint64_t seed);

// Appends `count` standard normal ambient columns (unassignable to any
// subspace) to data; the new columns are flagged as outliers in the truth.
void append_outliers(SubspaceData& data, Index count, std::uint64_t seed);

}  // namespace slrkit
