#pragma once

#include <string>
#include <utility>
#include <vector>

#include "slrkit/core.hpp"

namespace slrkit {

// Concave penalties applied to each singular value. All are nondecreasing
// with nonincreasing (super)gradient, so larger singular values are shrunk
// no harder than smaller ones.
enum class RegularizerFamily {
  kNuclear,    // g(s) = s
  kLp,         // g(s) = s^p, 0 < p < 1
  kCappedL1,   // g(s) = min(s, theta)
  kEtp,        // g(s) = (1 - exp(-theta s)) / (1 - exp(-theta))
  kScad,       // quadratic blend between l1 and a constant cap
  kMcp,        // minimax concave penalty
  kPiecewise,  // piecewise-linear supergradient ramp, see below
};

const char* family_name(RegularizerFamily family);
RegularizerFamily family_from_name(const std::string& name);

// A scaled singular-value penalty lambda * g(s). `lambda` is the global
// weight; the remaining parameters belong to the selected family.
//
// The piecewise family is defined through its supergradient y(s): it starts
// at 2 for s = 0, falls linearly to a1 + a2 at the knot p1, to a2 at p2, and
// to 0 at p3, staying 0 beyond. Singular values past p3 are therefore not
// penalized at all, while small ones are shrunk harder than the nuclear
// norm would. g itself is the integral of the ramp (g(0) = 0).
struct RegularizerSpec {
  RegularizerFamily family = RegularizerFamily::kNuclear;
  double lambda = 1.0;
  double theta = 0.0;  // capped-l1 / etp / scad / mcp shape parameter
  double p = 0.0;      // lp exponent
  double a1 = 0.0;     // piecewise ramp drops
  double a2 = 0.0;
  double p1 = 0.0;     // piecewise knots, 0 < p1 < p2 < p3
  double p2 = 0.0;
  double p3 = 0.0;

  static RegularizerSpec nuclear(double lambda = 1.0);
  static RegularizerSpec lp(double lambda, double p);
  static RegularizerSpec capped_l1(double lambda, double theta);
  static RegularizerSpec etp(double lambda, double theta);
  static RegularizerSpec scad(double lambda, double theta);
  static RegularizerSpec mcp(double lambda, double theta);
  static RegularizerSpec piecewise(double lambda, double a1, double a2,
                                   double p1, double p2, double p3);

  // Throws std::invalid_argument when parameters are outside the family's
  // admissible range (lambda > 0; 0 < p < 1; theta > 0, scad needs
  // theta > 2, mcp theta > 1; piecewise needs 0 < p1 < p2 < p3,
  // a1 >= 0, a2 >= 0, a1 + a2 <= 2).
  void validate() const;
};

// One selected supergradient of the scaled penalty at sigma >= 0, i.e.
// lambda * dg(sigma). Nonincreasing in sigma and finite everywhere,
// including 0. Throws std::domain_error for sigma < 0.
double supergradient(const RegularizerSpec& spec, double sigma);

// lambda * g(sigma) with g(0) = 0. Same domain rules as supergradient.
double eval_g(const RegularizerSpec& spec, double sigma);

// Elementwise supergradient over a nonincreasing spectrum; the result is
// nondecreasing. Throws std::invalid_argument when sigmas is not sorted
// nonincreasing.
Vector weight_vector(const RegularizerSpec& spec, const Vector& sigmas);

struct PiecewiseThresholds {
  double p1 = 0.0;
  double p2 = 0.0;
  double p3 = 0.0;
};

// Places the piecewise knots from a sampled spectrum: p1/p2/p3 sit at the
// 95th/98th/99th percentile (nearest-rank) of the sample, so roughly the
// top 5% / 2% / 1% of values exceed them. Needs at least 100 nonnegative
// samples so the 1% level is resolvable; throws std::domain_error when the
// sample is degenerate (all equal, or the 95th percentile is not positive).
// Exact percentile ties are nudged upward so p1 < p2 < p3 strictly.
PiecewiseThresholds auto_thresholds(const Vector& sigma_sample);

// Flat key=value serialization used by the CLI config format. Keys:
// family, lambda, theta, p, a1, a2, p1, p2, p3 (only the relevant ones are
// emitted; unknown keys on parse are an error).
std::vector<std::pair<std::string, std::string>> to_key_values(
    const RegularizerSpec& spec);
RegularizerSpec spec_from_key_values(
    const std::vector<std::pair<std::string, std::string>>& kv);

}  // namespace slrkit
