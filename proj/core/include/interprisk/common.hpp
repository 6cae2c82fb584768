#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace interprisk {

// Invalid user input: bad config values, malformed files, unknown names.
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data that violates a precondition of an algorithm (single-class outcome,
// empty dataset, ...). The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Warnings = std::vector<std::string>;

inline double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// Mean binary log loss of probabilities, clamped away from {0,1}.
double log_loss(std::span<const double> probabilities, std::span<const std::uint8_t> labels);

// SplitMix64 finalizer; used to derive independent seeds for bags, trees,
// folds and per-row randomisation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Thin wrapper over mt19937_64 with hand-rolled distributions so that a seed
// yields the same stream regardless of the standard library in use.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Uniform in [0,1) determined only by (seed, key).
double keyed_uniform(std::uint64_t seed, std::uint64_t key);

// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 14695981039346656037ULL);
std::string hex64(std::uint64_t value);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. Work
// items must write to disjoint outputs; the result is independent of the
// number of threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace interprisk
