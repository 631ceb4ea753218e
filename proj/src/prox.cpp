#include "slrkit/prox.hpp"

#include <utility>

#include "slrkit/core.hpp"

namespace slrkit {

std::optional<Index> default_rank_cap(Index rows, Index cols) {
  constexpr Index kExactLimit = 200;
  constexpr Index kRandomizedRank = 30;
  if (std::min(rows, cols) <= kExactLimit) return std::nullopt;
  return kRandomizedRank;
}

GsvtResult gsvt_detailed(const Matrix& p, double tau,
                         const RegularizerSpec& spec,
                         std::optional<Index> rank_cap) {
  if (tau < 0.0) {
    throw std::invalid_argument("gsvt: tau must be nonnegative");
  }
  spec.validate();
  const auto cap = rank_cap ? rank_cap : default_rank_cap(p.rows(), p.cols());
  SvdFactors f = svd(p, cap);
  const Vector w = weight_vector(spec, f.sigma);
  GsvtResult out;
  out.sigma_out = (f.sigma - tau * w).cwiseMax(0.0);
  out.x = f.u * out.sigma_out.asDiagonal() * f.v.transpose();
  out.sigma_in = std::move(f.sigma);
  return out;
}

Matrix gsvt(const Matrix& p, double tau, const RegularizerSpec& spec,
            std::optional<Index> rank_cap) {
  return gsvt_detailed(p, tau, spec, rank_cap).x;
}

Matrix prox_l1(const Matrix& t, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("prox_l1: tau must be nonnegative");
  }
  require_finite(t, "prox_l1");
  return t.unaryExpr([tau](double x) { return soft_threshold(x, tau); });
}

Matrix prox_l21(const Matrix& t, double tau) {
  if (tau < 0.0) {
    throw std::invalid_argument("prox_l21: tau must be nonnegative");
  }
  require_finite(t, "prox_l21");
  Matrix out(t.rows(), t.cols());
  for (Index j = 0; j < t.cols(); ++j) {
    const double norm = t.col(j).norm();
    const double scale = norm > tau ? 1.0 - tau / norm : 0.0;
    out.col(j) = scale * t.col(j);
  }
  return out;
}

}  // namespace slrkit
