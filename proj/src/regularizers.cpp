#include "slrkit/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "slrkit/keyvalue.hpp"

namespace slrkit {

namespace {

// Below this, the lp supergradient p*s^(p-1) is clamped: it diverges at 0
// and the solvers need finite weights.
constexpr double kLpFloor = 1e-10;

[[noreturn]] void bad_spec(const std::string& what) {
  throw std::invalid_argument("RegularizerSpec: " + what);
}

}  // namespace

const char* family_name(RegularizerFamily family) {
  switch (family) {
    case RegularizerFamily::kNuclear: return "nuclear";
    case RegularizerFamily::kLp: return "lp";
    case RegularizerFamily::kCappedL1: return "capped_l1";
    case RegularizerFamily::kEtp: return "etp";
    case RegularizerFamily::kScad: return "scad";
    case RegularizerFamily::kMcp: return "mcp";
    case RegularizerFamily::kPiecewise: return "piecewise";
  }
  throw std::invalid_argument("family_name: unknown family");
}

RegularizerFamily family_from_name(const std::string& name) {
  if (name == "nuclear") return RegularizerFamily::kNuclear;
  if (name == "lp") return RegularizerFamily::kLp;
  if (name == "capped_l1") return RegularizerFamily::kCappedL1;
  if (name == "etp") return RegularizerFamily::kEtp;
  if (name == "scad") return RegularizerFamily::kScad;
  if (name == "mcp") return RegularizerFamily::kMcp;
  if (name == "piecewise") return RegularizerFamily::kPiecewise;
  throw std::invalid_argument("unknown regularizer family: " + name);
}

RegularizerSpec RegularizerSpec::nuclear(double lambda) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kNuclear;
  s.lambda = lambda;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::lp(double lambda, double p) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kLp;
  s.lambda = lambda;
  s.p = p;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::capped_l1(double lambda, double theta) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kCappedL1;
  s.lambda = lambda;
  s.theta = theta;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::etp(double lambda, double theta) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kEtp;
  s.lambda = lambda;
  s.theta = theta;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::scad(double lambda, double theta) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kScad;
  s.lambda = lambda;
  s.theta = theta;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::mcp(double lambda, double theta) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kMcp;
  s.lambda = lambda;
  s.theta = theta;
  s.validate();
  return s;
}

RegularizerSpec RegularizerSpec::piecewise(double lambda, double a1, double a2,
                                           double p1, double p2, double p3) {
  RegularizerSpec s;
  s.family = RegularizerFamily::kPiecewise;
  s.lambda = lambda;
  s.a1 = a1;
  s.a2 = a2;
  s.p1 = p1;
  s.p2 = p2;
  s.p3 = p3;
  s.validate();
  return s;
}

void RegularizerSpec::validate() const {
  if (!(lambda > 0.0)) bad_spec("lambda must be positive");
  switch (family) {
    case RegularizerFamily::kNuclear:
      break;
    case RegularizerFamily::kLp:
      if (!(p > 0.0 && p < 1.0)) bad_spec("lp needs 0 < p < 1");
      break;
    case RegularizerFamily::kCappedL1:
    case RegularizerFamily::kEtp:
      if (!(theta > 0.0)) bad_spec("theta must be positive");
      break;
    case RegularizerFamily::kScad:
      if (!(theta > 2.0)) bad_spec("scad needs theta > 2");
      break;
    case RegularizerFamily::kMcp:
      if (!(theta > 1.0)) bad_spec("mcp needs theta > 1");
      break;
    case RegularizerFamily::kPiecewise:
      if (!(p1 > 0.0 && p1 < p2 && p2 < p3)) {
        bad_spec("piecewise needs 0 < p1 < p2 < p3");
      }
      if (a1 < 0.0 || a2 < 0.0) bad_spec("piecewise drops must be nonnegative");
      if (a1 + a2 > 2.0) {
        // keeps the ramp nonincreasing: the start value is 2
        bad_spec("piecewise needs a1 + a2 <= 2");
      }
      break;
  }
}

namespace {

// Supergradient ramp of the piecewise family (unscaled): 2 at 0, a1 + a2 at
// p1, a2 at p2, 0 at and beyond p3, linear in between.
double piecewise_ramp(const RegularizerSpec& s, double sigma) {
  const double knee1 = s.a1 + s.a2;
  if (sigma <= s.p1) {
    return 2.0 + (knee1 - 2.0) * (sigma / s.p1);
  }
  if (sigma <= s.p2) {
    return knee1 + (s.a2 - knee1) * ((sigma - s.p1) / (s.p2 - s.p1));
  }
  if (sigma <= s.p3) {
    return s.a2 * (1.0 - (sigma - s.p2) / (s.p3 - s.p2));
  }
  return 0.0;
}

// Integral of the ramp from 0 to sigma; trapezoids over the linear pieces.
double piecewise_value(const RegularizerSpec& s, double sigma) {
  const double knee1 = s.a1 + s.a2;
  auto trapezoid = [](double width, double y0, double y1) {
    return width * 0.5 * (y0 + y1);
  };
  if (sigma <= s.p1) {
    return trapezoid(sigma, 2.0, piecewise_ramp(s, sigma));
  }
  double acc = trapezoid(s.p1, 2.0, knee1);
  if (sigma <= s.p2) {
    return acc + trapezoid(sigma - s.p1, knee1, piecewise_ramp(s, sigma));
  }
  acc += trapezoid(s.p2 - s.p1, knee1, s.a2);
  if (sigma <= s.p3) {
    return acc + trapezoid(sigma - s.p2, s.a2, piecewise_ramp(s, sigma));
  }
  return acc + trapezoid(s.p3 - s.p2, s.a2, 0.0);
}

double unscaled_supergradient(const RegularizerSpec& s, double sigma) {
  switch (s.family) {
    case RegularizerFamily::kNuclear:
      return 1.0;
    case RegularizerFamily::kLp:
      return s.p * std::pow(std::max(sigma, kLpFloor), s.p - 1.0);
    case RegularizerFamily::kCappedL1:
      // at the kink the flat side's (zero) supergradient is selected
      return sigma < s.theta ? 1.0 : 0.0;
    case RegularizerFamily::kEtp:
      return s.theta * std::exp(-s.theta * sigma) /
             (1.0 - std::exp(-s.theta));
    case RegularizerFamily::kScad:
      if (sigma <= 1.0) return 1.0;
      if (sigma < s.theta) return (s.theta - sigma) / (s.theta - 1.0);
      return 0.0;
    case RegularizerFamily::kMcp:
      return sigma < s.theta ? 1.0 - sigma / s.theta : 0.0;
    case RegularizerFamily::kPiecewise:
      return piecewise_ramp(s, sigma);
  }
  throw std::invalid_argument("supergradient: unknown family");
}

double unscaled_value(const RegularizerSpec& s, double sigma) {
  switch (s.family) {
    case RegularizerFamily::kNuclear:
      return sigma;
    case RegularizerFamily::kLp:
      return std::pow(sigma, s.p);
    case RegularizerFamily::kCappedL1:
      return std::min(sigma, s.theta);
    case RegularizerFamily::kEtp:
      return (1.0 - std::exp(-s.theta * sigma)) / (1.0 - std::exp(-s.theta));
    case RegularizerFamily::kScad:
      if (sigma <= 1.0) return sigma;
      if (sigma < s.theta) {
        return (2.0 * s.theta * sigma - sigma * sigma - 1.0) /
               (2.0 * (s.theta - 1.0));
      }
      return (s.theta + 1.0) / 2.0;
    case RegularizerFamily::kMcp:
      if (sigma < s.theta) return sigma - sigma * sigma / (2.0 * s.theta);
      return s.theta / 2.0;
    case RegularizerFamily::kPiecewise:
      return piecewise_value(s, sigma);
  }
  throw std::invalid_argument("eval_g: unknown family");
}

}  // namespace

double supergradient(const RegularizerSpec& spec, double sigma) {
  spec.validate();
  if (sigma < 0.0) {
    throw std::domain_error("supergradient: sigma must be nonnegative");
  }
  return spec.lambda * unscaled_supergradient(spec, sigma);
}

double eval_g(const RegularizerSpec& spec, double sigma) {
  spec.validate();
  if (sigma < 0.0) {
    throw std::domain_error("eval_g: sigma must be nonnegative");
  }
  return spec.lambda * unscaled_value(spec, sigma);
}

Vector weight_vector(const RegularizerSpec& spec, const Vector& sigmas) {
  spec.validate();
  for (Index i = 0; i + 1 < sigmas.size(); ++i) {
    if (sigmas[i + 1] > sigmas[i]) {
      throw std::invalid_argument("weight_vector: spectrum must be sorted "
                                  "nonincreasing");
    }
  }
  Vector w(sigmas.size());
  for (Index i = 0; i < sigmas.size(); ++i) {
    if (sigmas[i] < 0.0) {
      throw std::domain_error("weight_vector: negative singular value");
    }
    w[i] = spec.lambda * unscaled_supergradient(spec, sigmas[i]);
  }
  return w;
}

PiecewiseThresholds auto_thresholds(const Vector& sigma_sample) {
  const Index n = sigma_sample.size();
  if (n < 100) {
    throw std::invalid_argument("auto_thresholds: need at least 100 samples");
  }
  std::vector<double> sorted(sigma_sample.data(), sigma_sample.data() + n);
  for (double v : sorted) {
    if (!(v >= 0.0)) {
      throw std::domain_error("auto_thresholds: samples must be nonnegative");
    }
  }
  std::sort(sorted.begin(), sorted.end());

  auto nearest_rank = [&](double percentile) {
    auto idx = static_cast<Index>(
        std::ceil(percentile / 100.0 * static_cast<double>(n)));
    idx = std::clamp<Index>(idx, 1, n);
    return sorted[static_cast<std::size_t>(idx - 1)];
  };

  PiecewiseThresholds t;
  t.p1 = nearest_rank(95.0);
  t.p2 = nearest_rank(98.0);
  t.p3 = nearest_rank(99.0);

  const double top = sorted.back();
  if (!(top > 0.0) || sorted.front() == top) {
    throw std::domain_error("auto_thresholds: degenerate spectrum");
  }
  if (!(t.p1 > 0.0)) {
    throw std::domain_error(
        "auto_thresholds: 95th percentile is not positive");
  }
  // Strictly increasing knots even when percentiles tie.
  const double nudge = 1e-9 * top;
  if (t.p2 <= t.p1) t.p2 = t.p1 + nudge;
  if (t.p3 <= t.p2) t.p3 = t.p2 + nudge;
  return t;
}

namespace {

std::string num_to_string(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("RegularizerSpec: bad value for " + key +
                                ": " + text);
  }
  if (pos != text.size()) {
    throw std::invalid_argument("RegularizerSpec: bad value for " + key +
                                ": " + text);
  }
  return v;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> to_key_values(
    const RegularizerSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("family", family_name(spec.family));
  kv.emplace_back("lambda", num_to_string(spec.lambda));
  switch (spec.family) {
    case RegularizerFamily::kNuclear:
      break;
    case RegularizerFamily::kLp:
      kv.emplace_back("p", num_to_string(spec.p));
      break;
    case RegularizerFamily::kCappedL1:
    case RegularizerFamily::kEtp:
    case RegularizerFamily::kScad:
    case RegularizerFamily::kMcp:
      kv.emplace_back("theta", num_to_string(spec.theta));
      break;
    case RegularizerFamily::kPiecewise:
      kv.emplace_back("a1", num_to_string(spec.a1));
      kv.emplace_back("a2", num_to_string(spec.a2));
      kv.emplace_back("p1", num_to_string(spec.p1));
      kv.emplace_back("p2", num_to_string(spec.p2));
      kv.emplace_back("p3", num_to_string(spec.p3));
      break;
  }
  return kv;
}

RegularizerSpec spec_from_key_values(
    const std::vector<std::pair<std::string, std::string>>& kv) {
  RegularizerSpec s;
  bool have_family = false;
  for (const auto& [key, value] : kv) {
    if (key == "family") {
      s.family = family_from_name(value);
      have_family = true;
    } else if (key == "lambda") {
      s.lambda = parse_double(key, value);
    } else if (key == "theta") {
      s.theta = parse_double(key, value);
    } else if (key == "p") {
      s.p = parse_double(key, value);
    } else if (key == "a1") {
      s.a1 = parse_double(key, value);
    } else if (key == "a2") {
      s.a2 = parse_double(key, value);
    } else if (key == "p1") {
      s.p1 = parse_double(key, value);
    } else if (key == "p2") {
      s.p2 = parse_double(key, value);
    } else if (key == "p3") {
      s.p3 = parse_double(key, value);
    } else {
      throw std::invalid_argument("RegularizerSpec: unknown key: " + key);
    }
  }
  if (!have_family) {
    throw std::invalid_argument("RegularizerSpec: missing family");
  }
  s.validate();
  return s;
}

}  // namespace slrkit
