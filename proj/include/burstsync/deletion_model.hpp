#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "bit_string.hpp"
#include "numerics.hpp"
#include "rng.hpp"

namespace burstsync {

/// Parameters of the two-state deletion chain. State 1 deletes the current
/// source bit; beta is the burst start probability (0 -> 1) and alpha the
/// burst exit probability (1 -> 0).
class DeletionParams {
 public:
  DeletionParams(double alpha, double beta) : alpha_(alpha), beta_(beta) {
    if (!(alpha > 0.0 && alpha < 1.0))
      throw std::invalid_argument("DeletionParams: alpha must lie in (0,1), got " + std::to_string(alpha));
    if (!(beta > 0.0 && beta < 1.0))
      throw std::invalid_argument("DeletionParams: beta must lie in (0,1), got " + std::to_string(beta));
  }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  friend bool operator==(const DeletionParams&, const DeletionParams&) = default;

 private:
  double alpha_;
  double beta_;
};

/// The pair (D_0, D_{n+1}) every entropy quantity is conditioned on.
struct BoundaryCondition {
  Bit d0 = 0;
  Bit d_next = 0;

  BoundaryCondition() = default;
  BoundaryCondition(int first, int last) : d0(check(first)), d_next(check(last)) {}

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

  static constexpr std::array<std::array<int, 2>, 4> all{{{0, 0}, {0, 1}, {1, 0}, {1, 1}}};

 private:
  static Bit check(int b) {
    if (b != 0 && b != 1) throw std::invalid_argument("BoundaryCondition: bit must be 0 or 1");
    return static_cast<Bit>(b);
  }
};

/// Stationary probability of the delete state, beta / (alpha + beta).
inline double stationary_rate(const DeletionParams& p) noexcept { return p.beta() / (p.alpha() + p.beta()); }

/// One-step kernel entry P(D_i = to | D_{i-1} = from).
inline double transition_prob(const DeletionParams& p, int from, int to) {
  if ((from != 0 && from != 1) || (to != 0 && to != 1))
    throw std::invalid_argument("transition_prob: states are 0 or 1");
  const double leave = from == 0 ? p.beta() : p.alpha();
  return from == to ? 1.0 - leave : leave;
}

/// Entry of the k-step kernel, P(D_{i+k} = to | D_i = from), in closed form
/// P^k = Pi + lambda^k (I - Pi) with lambda = 1 - alpha - beta.
inline double kernel_power(const DeletionParams& p, std::size_t steps, int from, int to) {
  const double d = stationary_rate(p);
  const double decay = std::pow(1.0 - p.alpha() - p.beta(), static_cast<double>(steps));
  const double stationary = to == 1 ? d : 1.0 - d;
  const double indicator = from == to ? 1.0 : 0.0;
  return stationary + decay * (indicator - stationary);
}

/// Largest total-variation distance between P^k(from, .) and the stationary law.
inline double mixing_distance(const DeletionParams& p, std::size_t steps) {
  const double d = stationary_rate(p);
  double worst = 0.0;
  for (int from = 0; from < 2; ++from)
    worst = std::max(worst, std::abs(kernel_power(p, steps, from, 1) - d));
  return worst;
}

/// Draws (D_0, ..., D_{n+1}) with D_0 from the stationary law.
inline BitString sample_pattern(const DeletionParams& p, std::size_t n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_pattern: n must be at least 1");
  BitString pattern(n + 2);
  Bit state = uniform01(rng) < stationary_rate(p) ? 1 : 0;
  pattern.set(0, state);
  for (std::size_t i = 1; i < n + 2; ++i) {
    const double leave = state == 0 ? p.beta() : p.alpha();
    if (uniform01(rng) < leave) state ^= 1u;
    pattern.set(i, state);
  }
  return pattern;
}

/// Uniform source block of length n.
inline BitString sample_source(std::size_t n, Rng& rng) {
  BitString x(n);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = rng();
    x.set(i, static_cast<Bit>((word >> (i % 64)) & 1u));
  }
  return x;
}

/// Keeps x_i where pattern_i == 0. `pattern` is the interior slice D_1..D_n.
inline BitString apply_deletion(const BitString& x, const BitString& pattern) {
  if (x.size() != pattern.size())
    throw std::invalid_argument("apply_deletion: pattern length " + std::to_string(pattern.size()) +
                                " does not match source length " + std::to_string(x.size()));
  BitString y;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (pattern[i] == 0) y.push_back(x[i]);
  return y;
}

/// Interior slice D_1..D_n of a full pattern D_0..D_{n+1}.
inline BitString interior(const BitString& full_pattern) {
  if (full_pattern.size() < 2) throw std::invalid_argument("interior: pattern lacks boundary bits");
  return full_pattern.slice(1, full_pattern.size() - 2);
}

/// log2 probability of a stationary-start path D_0..D_m.
inline double pattern_log_prob(const DeletionParams& p, const BitString& full_pattern) {
  if (full_pattern.empty()) return 0.0;
  const double d = stationary_rate(p);
  KahanSum acc;
  acc += std::log2(full_pattern[0] == 1 ? d : 1.0 - d);
  for (std::size_t i = 1; i < full_pattern.size(); ++i)
    acc += std::log2(transition_prob(p, full_pattern[i - 1], full_pattern[i]));
  return acc.value();
}

}  // namespace burstsync
