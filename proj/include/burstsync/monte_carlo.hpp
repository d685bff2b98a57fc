#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "alignment_lattice.hpp"
#include "deletion_model.hpp"
#include "exact_entropy.hpp"
#include "numerics.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace burstsync {

struct EstimateWithError {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct McOptions {
  unsigned workers = 1;
};

/// One draw of the joint experiment: uniform source, stationary deletion
/// pattern, and the side-information it leaves.
struct Draw {
  BitString source;
  BitString full_pattern;
  BitString side_info;

  BoundaryCondition boundary() const {
    return {full_pattern[0], full_pattern[full_pattern.size() - 1]};
  }
};

inline Draw draw_experiment(const DeletionParams& p, std::size_t n, Rng& rng) {
  Draw d;
  d.source = sample_source(n, rng);
  d.full_pattern = sample_pattern(p, n, rng);
  d.side_info = apply_deletion(d.source, interior(d.full_pattern));
  return d;
}

/// Sample mean with standard error. Sample i always uses the generator
/// derived from (seed, i) and the reduction is pairwise in index order, so the
/// estimate does not depend on the worker count.
template <class PerSample>
EstimateWithError sample_mean(std::size_t samples, std::uint64_t seed, const McOptions& opts, PerSample&& per_sample) {
  if (samples < 1) throw std::invalid_argument("sample_mean: need at least one sample");
  std::vector<double> values(samples);
  constexpr std::size_t kBlock = 256;
  const std::size_t blocks = (samples + kBlock - 1) / kBlock;
  parallel_tasks(blocks, opts.workers, [&](std::size_t block) {
    const std::size_t end = std::min(samples, (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i) {
      Rng rng = make_rng(seed, i);
      values[i] = per_sample(rng);
    }
  });
  const double count = static_cast<double>(samples);
  const double mean = pairwise_sum(values) / count;
  double std_error = 0.0;
  if (samples > 1) {
    std::vector<double> sq(samples);
    for (std::size_t i = 0; i < samples; ++i) sq[i] = (values[i] - mean) * (values[i] - mean);
    std_error = std::sqrt(pairwise_sum(sq) / (count - 1.0) / count);
  }
  return {mean, std_error, samples, seed};
}

/// Monte Carlo estimate of E_n = H(D_1 | D_0, X^n, Y, D_{n+1}).
inline EstimateWithError estimate_en(const DeletionParams& p, std::size_t n, std::size_t samples, std::uint64_t seed,
                                     const McOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("estimate_en: n must be at least 1");
  return sample_mean(samples, seed, opts, [&](Rng& rng) {
    const Draw d = draw_experiment(p, n, rng);
    return h2(d1_posterior(d.source, d.side_info, d.boundary(), p));
  });
}

/// Monte Carlo estimate of J_n = d + H(Y | X^n, D_0, D_{n+1}) / n.
inline EstimateWithError estimate_jn(const DeletionParams& p, std::size_t n, std::size_t samples, std::uint64_t seed,
                                     const McOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("estimate_jn: n must be at least 1");
  const double d = stationary_rate(p);
  const double nd = static_cast<double>(n);
  return sample_mean(samples, seed, opts, [&](Rng& rng) {
    const Draw draw = draw_experiment(p, n, rng);
    return d - emission_prob(draw.source, draw.side_info, draw.boundary(), p).log2() / nd;
  });
}

enum class BiasDirection { upper, none };

struct RminEstimate {
  EstimateWithError estimate;
  /// E_n is nondecreasing in n, so d + H(D_1|D_0) - E_n overestimates the
  /// minimum rate at finite n.
  BiasDirection bias = BiasDirection::upper;
};

/// d + H(D_1|D_0) - E_n with E_n estimated by Monte Carlo.
inline RminEstimate estimate_rmin(const DeletionParams& p, std::size_t n, std::size_t samples, std::uint64_t seed,
                                  const McOptions& opts = {}) {
  const EstimateWithError secret = estimate_en(p, n, samples, seed, opts);
  RminEstimate r;
  r.estimate = secret;
  r.estimate.mean = stationary_rate(p) + h_d1_given_d0(p) - secret.mean;
  return r;
}

/// Window constants for pattern typicality. k = max(6, -6 / log2(1 - alpha)),
/// window = ceil(-k log2 beta), ones_cap = ceil((k/3) log2(1/beta)).
struct TypicalityConfig {
  double k = 6.0;
  std::size_t window = 1;
  std::size_t ones_cap = 1;

  TypicalityConfig(double k_value, std::size_t window_length, std::size_t cap)
      : k(k_value), window(window_length), ones_cap(cap) {
    if (!(k > 0.0)) throw std::invalid_argument("TypicalityConfig: k must be positive");
    if (window < 1 || ones_cap < 1) throw std::invalid_argument("TypicalityConfig: window and ones_cap must be >= 1");
  }

  static TypicalityConfig from(const DeletionParams& p) {
    const double k = std::max(6.0, -6.0 / std::log2(1.0 - p.alpha()));
    const double log_inv_beta = -std::log2(p.beta());
    return {k, static_cast<std::size_t>(std::ceil(k * log_inv_beta)),
            static_cast<std::size_t>(std::ceil(k / 3.0 * log_inv_beta))};
  }
};

/// At most one run of ones, and at most ones_cap ones, among D_0..D_window.
inline bool is_typical(const BitString& full_pattern, const TypicalityConfig& config) {
  if (full_pattern.size() <= config.window)
    throw std::invalid_argument("is_typical: pattern must be longer than the window");
  std::size_t runs = 0;
  std::size_t ones = 0;
  for (std::size_t i = 0; i <= config.window; ++i) {
    if (full_pattern[i] == 0) continue;
    ++ones;
    if (i == 0 || full_pattern[i - 1] == 0) ++runs;
  }
  return runs <= 1 && ones <= config.ones_cap;
}

/// Fraction of atypical patterns at n = 2 * window.
inline EstimateWithError typicality_violation_rate(const DeletionParams& p, std::size_t samples, std::uint64_t seed,
                                                   const McOptions& opts = {}) {
  const TypicalityConfig config = TypicalityConfig::from(p);
  const std::size_t n = 2 * config.window;
  return sample_mean(samples, seed, opts, [&](Rng& rng) {
    return is_typical(sample_pattern(p, n, rng), config) ? 0.0 : 1.0;
  });
}

}  // namespace burstsync
