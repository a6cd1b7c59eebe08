#pragma once

// Seeded random substreams plus the fixed set of samplers shared by every
// case study. One generator algorithm (std::mt19937_64, fully specified by
// the standard) and one set of variate recipes are pinned here so that a
// (master seed, substream index) pair reproduces the same experiment output
// everywhere.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "impest/errors.hpp"

namespace impest::stats {

// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// A value-like random stream. Substream derivation is master_seed XOR
// splitmix64(substream): splitmix64 is a bijection, so distinct substream
// indices under one master seed can never collide.
class SeededStream {
 public:
  explicit SeededStream(std::uint64_t master_seed, std::uint64_t substream = 0)
      : master_seed_(master_seed),
        substream_(substream),
        engine_(master_seed ^ splitmix64(substream)) {}

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t substream() const { return substream_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  // Unbiased integer in [0, bound) by rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) {
      throw std::invalid_argument("uniform_int: bound must be positive");
    }
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t draw = engine_();
    while (draw < threshold) draw = engine_();
    return draw % bound;
  }

 private:
  std::uint64_t master_seed_;
  std::uint64_t substream_;
  std::mt19937_64 engine_;
};

inline SeededStream derive_stream(std::uint64_t master_seed,
                                  std::uint64_t replicate_index) {
  return SeededStream(master_seed, replicate_index);
}

// Standard normal via Box-Muller; consumes exactly two uniforms per call so
// the stream position never depends on rejection history.
inline double sample_standard_normal(SeededStream& rng) {
  const double u1 = rng.uniform_pos();
  const double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline double sample_normal(SeededStream& rng, double mean, double sd) {
  if (!(sd > 0.0)) throw std::invalid_argument("sample_normal: sd must be positive");
  return mean + sd * sample_standard_normal(rng);
}

inline double sample_lognormal(SeededStream& rng, double log_mean, double log_sd) {
  if (!(log_sd > 0.0)) {
    throw std::invalid_argument("sample_lognormal: log_sd must be positive");
  }
  return std::exp(log_mean + log_sd * sample_standard_normal(rng));
}

inline double sample_exponential(SeededStream& rng, double rate) {
  if (!(rate > 0.0)) {
    throw std::invalid_argument("sample_exponential: rate must be positive");
  }
  return -std::log(rng.uniform_pos()) / rate;
}

// Index draw by CDF inversion; probs need not be normalized.
inline std::size_t sample_categorical(SeededStream& rng,
                                      const std::vector<double>& probs) {
  if (probs.empty()) throw std::invalid_argument("sample_categorical: empty probs");
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw std::invalid_argument("sample_categorical: negative probability");
    }
    total += p;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("sample_categorical: probabilities sum to zero");
  }
  const double u = rng.uniform() * total;
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    cum += probs[i];
    if (u < cum) return i;
  }
  return probs.size() - 1;
}

inline std::vector<std::uint64_t> sample_multinomial(
    SeededStream& rng, std::uint64_t n, const std::vector<double>& probs) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    ++counts[sample_categorical(rng, probs)];
  }
  return counts;
}

// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 handled by the boost
// Gamma(shape+1) * U^(1/shape).
inline double sample_gamma(SeededStream& rng, double shape) {
  if (!(shape > 0.0)) {
    throw std::invalid_argument("sample_gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double boost = std::pow(rng.uniform_pos(), 1.0 / shape);
    return boost * sample_gamma(rng, shape + 1.0);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = sample_standard_normal(rng);
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform_pos();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

inline std::vector<double> sample_dirichlet(SeededStream& rng,
                                            const std::vector<double>& concentration) {
  if (concentration.empty()) {
    throw std::invalid_argument("sample_dirichlet: empty concentration");
  }
  std::vector<double> draw(concentration.size());
  double total = 0.0;
  for (std::size_t i = 0; i < concentration.size(); ++i) {
    if (!(concentration[i] > 0.0)) {
      throw std::invalid_argument("sample_dirichlet: concentration must be positive");
    }
    draw[i] = sample_gamma(rng, concentration[i]);
    total += draw[i];
  }
  for (double& v : draw) v /= total;
  return draw;
}

struct BootstrapPlan {
  std::uint64_t resamples = 1;  // B
};

// B index vectors, each an iid with-replacement draw of the original size.
inline std::vector<std::vector<std::uint64_t>> bootstrap_resample(
    SeededStream& rng, std::uint64_t data_size, const BootstrapPlan& plan) {
  if (data_size == 0) {
    throw std::invalid_argument("bootstrap_resample: data size must be positive");
  }
  if (plan.resamples == 0) {
    throw std::invalid_argument("bootstrap_resample: need at least one resample");
  }
  std::vector<std::vector<std::uint64_t>> out(plan.resamples);
  for (auto& indices : out) {
    indices.resize(data_size);
    for (auto& ix : indices) ix = rng.uniform_int(data_size);
  }
  return out;
}

// Type-7 empirical quantile (linear interpolation between order statistics).
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty data");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q outside [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

inline double median(std::vector<double> values) {
  return quantile(std::move(values), 0.5);
}

inline double mean(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("mean: empty data");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

// Unbiased sample variance.
inline double variance(const std::vector<double>& values) {
  if (values.size() < 2) throw std::invalid_argument("variance: need two points");
  const double m = mean(values);
  double acc = 0.0;
  for (double v : values) acc += (v - m) * (v - m);
  return acc / static_cast<double>(values.size() - 1);
}

}  // namespace impest::stats
