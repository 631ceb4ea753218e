#pragma once

#include <optional>

#include "slrkit/core.hpp"
#include "slrkit/regularizers.hpp"

namespace slrkit {

struct GsvtResult {
  Matrix x;
  Vector sigma_in;   // spectrum of the input (length = computed rank)
  Vector sigma_out;  // spectrum after shrinkage, same length
};

// Default rank-cap policy for the thresholding operators: exact SVD up to
// 200 on the small side, randomized top-30 beyond that.
std::optional<Index> default_rank_cap(Index rows, Index cols);

// Weighted singular value shrinkage: factorize p, reduce each singular
// value by tau times its supergradient weight, clamp at zero, rebuild.
// The weights are evaluated on the spectrum of p itself, so already-large
// singular values receive the small (or zero) shrinkage of the concave
// penalty's flat region. With a nuclear spec every weight is lambda and
// this is plain singular value thresholding. An explicit rank_cap
// overrides the default policy. tau must be nonnegative.
GsvtResult gsvt_detailed(const Matrix& p, double tau,
                         const RegularizerSpec& spec,
                         std::optional<Index> rank_cap = std::nullopt);
Matrix gsvt(const Matrix& p, double tau, const RegularizerSpec& spec,
            std::optional<Index> rank_cap = std::nullopt);

// Elementwise soft threshold: minimizes tau*||E||_1 + 1/2*||E - T||_F^2.
Matrix prox_l1(const Matrix& t, double tau);

// Columnwise shrinkage: minimizes tau*sum_j||E_j||_2 + 1/2*||E - T||_F^2.
// Each column is scaled by max(0, 1 - tau/||t_j||); zero columns stay zero.
Matrix prox_l21(const Matrix& t, double tau);

}  // namespace slrkit
