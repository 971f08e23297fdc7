#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace shiftcut {

inline constexpr const char* kToolkitVersion = "0.1.0";

/// Bad user input (shapes, ranges, malformed data). CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Filesystem trouble (missing file, unwritable path). CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two routes to the same quantity disagreed beyond tolerance.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Deterministic RNG wrapper. The raw engine (mt19937_64) is fully specified
/// by the standard; the derived draws below avoid std::*_distribution, whose
/// output is implementation-defined, so streams are reproducible everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n). Multiply-shift; slight bias is irrelevant here
  /// and the result is platform-independent.
  std::uint32_t below(std::uint32_t n) {
    return static_cast<std::uint32_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

  /// Standard normal via Box-Muller (cached second draw).
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1]
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 6.28318530717958647692 * u2;
    cached_ = r * std::sin(theta);
    have_cached_ = true;
    return r * std::cos(theta);
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(static_cast<std::uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derives an independent substream seed (SplitMix64 over seed + stream).
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

/// Recursive pairwise summation; error grows O(log n) instead of O(n).
double pairwise_sum(const double* x, std::size_t n);
double pairwise_sum(const std::vector<double>& v);

/// Row accumulation used by the cost kernels: plain loop for short rows,
/// pairwise above 2048 entries to bound rounding on large instances.
double accumulate_row(const double* x, std::size_t n);

}  // namespace shiftcut
