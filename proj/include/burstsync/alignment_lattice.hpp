#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bit_string.hpp"
#include "deletion_model.hpp"
#include "numerics.hpp"

namespace burstsync {

/// Arguments of a lattice evaluation. `d1_constraint`, when set, fixes D_1.
struct LatticeQuery {
  BitString x;
  BitString y;
  BoundaryCondition boundary;
  DeletionParams params;
  std::optional<Bit> d1_constraint;
};

struct LatticeResult {
  LogProb log_emission = LogProb::impossible();
  /// P(D_1 = 1 | x, y, D_0, D_{n+1}); empty when the emission is impossible.
  std::optional<double> d1_posterior;
};

namespace detail {

/// Forward pass over the (position, deletions so far, last pattern bit)
/// lattice. Returns log2 of
///   sum over patterns d_1..d_n with y(x, d) = y of
///     P(d_1 | d_0) P(d_2 | d_1) ... P(d_n | d_{n-1}) P(d_next | d_n),
/// with the P(d_1 | d_0) factor replaced by the indicator [d_1 = c] when the
/// first step is constrained to c. Rows are rescaled at every step, so long
/// blocks do not underflow. Only the band of width n - |y| + 1 is visited.
inline LogProb lattice_forward(const BitString& x, const BitString& y, const DeletionParams& params,
                               Bit d0, Bit d_next, std::optional<Bit> first_step) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (m > n) throw std::invalid_argument("lattice: side-information longer than source");
  const std::size_t k = n - m;

  const double kernel[2][2] = {{1.0 - params.beta(), params.beta()}, {params.alpha(), 1.0 - params.alpha()}};

  // weight[t * 2 + s]: t deletions so far, last pattern bit s.
  std::vector<double> cur((k + 1) * 2, 0.0);
  std::vector<double> next((k + 1) * 2, 0.0);
  cur[d0] = 1.0;
  double log_scale = 0.0;

  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(next.begin(), next.end(), 0.0);
    const Bit xi = x[i - 1];
    const std::size_t t_max = std::min(i - 1, k);
    for (std::size_t t = 0; t <= t_max; ++t) {
      const std::size_t j = i - 1 - t;  // symbols of y matched so far
      for (int s = 0; s < 2; ++s) {
        const double w = cur[t * 2 + s];
        if (w == 0.0) continue;
        double to_keep = kernel[s][0];
        double to_delete = kernel[s][1];
        if (i == 1 && first_step) {
          to_keep = *first_step == 0 ? 1.0 : 0.0;
          to_delete = *first_step == 1 ? 1.0 : 0.0;
        }
        if (j < m && y[j] == xi) next[t * 2 + 0] += w * to_keep;
        if (t < k) next[(t + 1) * 2 + 1] += w * to_delete;
      }
    }
    double peak = 0.0;
    for (double w : next) peak = std::max(peak, w);
    if (peak == 0.0) return LogProb::impossible();
    for (double& w : next) w /= peak;
    log_scale += std::log2(peak);
    std::swap(cur, next);
  }

  const double total = cur[k * 2 + 0] * kernel[0][d_next] + cur[k * 2 + 1] * kernel[1][d_next];
  if (total == 0.0) return LogProb::impossible();
  return LogProb::from_log2(std::log2(total) + log_scale);
}

inline double boundary_log2(const DeletionParams& params, std::size_t n, const BoundaryCondition& b) {
  return std::log2(kernel_power(params, n + 1, b.d0, b.d_next));
}

}  // namespace detail

/// log2 p(y | x, D_0, D_{n+1}). With a D_1 constraint c the value is the
/// emission restricted to D_1 = c and normalized by P(D_1 = c | D_0), so that
/// sum_c P(D_1 = c | D_0) * emission_c equals the unconstrained emission.
inline LogProb emission_prob(const BitString& x, const BitString& y, const BoundaryCondition& boundary,
                             const DeletionParams& params, std::optional<Bit> d1_constraint = std::nullopt) {
  if (d1_constraint && x.empty()) throw std::invalid_argument("emission_prob: D_1 constraint needs n >= 1");
  if (d1_constraint && *d1_constraint > 1) throw std::invalid_argument("emission_prob: D_1 constraint must be 0 or 1");
  const LogProb joint = detail::lattice_forward(x, y, params, boundary.d0, boundary.d_next, d1_constraint);
  if (joint.is_impossible()) return joint;
  return LogProb::from_log2(joint.log2() - detail::boundary_log2(params, x.size(), boundary));
}

inline LogProb emission_prob(const LatticeQuery& q) {
  return emission_prob(q.x, q.y, q.boundary, q.params, q.d1_constraint);
}

/// P(D_1 = 1 | x, y, D_0, D_{n+1}).
inline double d1_posterior(const BitString& x, const BitString& y, const BoundaryCondition& boundary,
                           const DeletionParams& params) {
  if (x.empty()) throw std::invalid_argument("d1_posterior: empty source has no D_1");
  const LogProb kept = detail::lattice_forward(x, y, params, boundary.d0, boundary.d_next, Bit{0});
  const LogProb deleted = detail::lattice_forward(x, y, params, boundary.d0, boundary.d_next, Bit{1});
  if (kept.is_impossible() && deleted.is_impossible())
    throw std::domain_error("d1_posterior: y is not a subsequence of x");
  if (deleted.is_impossible()) return 0.0;
  if (kept.is_impossible()) return 1.0;
  const double log_keep = kept.log2() + std::log2(transition_prob(params, boundary.d0, 0));
  const double log_delete = deleted.log2() + std::log2(transition_prob(params, boundary.d0, 1));
  return 1.0 / (1.0 + std::exp2(log_keep - log_delete));
}

/// d1_posterior for a query; the query's D_1 constraint is ignored.
inline double d1_posterior(const LatticeQuery& q) { return d1_posterior(q.x, q.y, q.boundary, q.params); }

inline LatticeResult evaluate(const LatticeQuery& q) {
  LatticeResult r;
  r.log_emission = emission_prob(q);
  if (r.log_emission.is_possible() && !q.x.empty()) r.d1_posterior = d1_posterior(q);
  return r;
}

/// Number of deletion patterns d with y(x, d) = y.
inline std::uint64_t consistent_pattern_count(const BitString& x, const BitString& y) {
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  if (m > n) return 0;
  if (n > 64) throw std::invalid_argument("consistent_pattern_count: n above 64 may overflow");
  // ways[j]: patterns over the processed prefix of x producing y_1..y_j.
  std::vector<std::uint64_t> ways(m + 1, 0);
  ways[0] = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = std::min(m, i + 1); j-- > 0;)
      if (y[j] == x[i]) ways[j + 1] += ways[j];
  return ways[m];
}

}  // namespace burstsync
