#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace slrkit {

// Deterministic random source behind every generator in the library.
//
// The engine is std::mt19937_64, whose raw output sequence is pinned by the
// language standard, and every variate transform is implemented below rather
// than taken from <random> distributions (those are allowed to differ across
// standard libraries). A given seed therefore produces the same stream on
// every platform. Independent per-trial streams come from split(), which
// derives a child seed by mixing the parent seed with the stream id.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // Child generator for stream `stream`; children with distinct ids are
  // decorrelated from each other and from the parent.
  Rng split(std::uint64_t stream) const {
    return Rng(mix(seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1)));
  }

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  // Standard normal via the Marsaglia polar method; consumes only
  // uniform01() so the stream stays portable.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

  // Unbiased integer in [0, n); rejection from the top avoids modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  // splitmix64 finalizer
  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace slrkit
