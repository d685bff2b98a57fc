#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>

#include "deletion_model.hpp"
#include "numerics.hpp"

namespace burstsync {

/// A truncated series value with a certified bound on the omitted tail.
struct CertifiedValue {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t terms = 0;
};

/// Term l of C = sum_{l>=1} 2^{-l-1} l log2 l.
inline double constant_c_term(std::size_t l) {
  const double x = static_cast<double>(l);
  return std::ldexp(x * std::log2(x), -static_cast<int>(l) - 1);
}

/// Bound on sum_{l>=m} 2^{-l-1} l log2 l, via log2 l <= l and
/// sum_{l>=m} 2^{-l-1} l^2 = 2^{-m} (m^2 + 2m + 3).
inline double constant_c_tail(std::size_t m) {
  const double x = static_cast<double>(m);
  return std::ldexp(x * x + 2.0 * x + 3.0, -static_cast<int>(m));
}

inline CertifiedValue constant_c_partial(std::size_t terms) {
  KahanSum sum;
  for (std::size_t l = 1; l <= terms; ++l) sum += constant_c_term(l);
  return {sum.value(), constant_c_tail(terms + 1), terms};
}

/// C summed until the certified tail drops below `tolerance`.
inline CertifiedValue constant_c(double tolerance = 1e-12) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("constant_c: tolerance must be positive");
  std::size_t terms = 1;
  while (constant_c_tail(terms + 1) >= tolerance) ++terms;
  return constant_c_partial(terms);
}

/// f(beta) = -leading * beta log2 beta + linear * beta.
struct ExpansionTerms {
  double leading = 0.0;
  double linear = 0.0;

  double value_at(double beta) const { return -leading * beta * std::log2(beta) + linear * beta; }
};

/// Two-term small-beta expansion of the minimum rate at fixed alpha.
inline ExpansionTerms rate_expansion_terms(double alpha) {
  const double c = constant_c().value;
  return {1.0, (1.0 + h2(alpha)) / alpha + kLog2E - c};
}

inline double rmin_expansion(const DeletionParams& p, std::optional<double> beta_override = std::nullopt) {
  const double beta = beta_override.value_or(p.beta());
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("rmin_expansion: beta must lie in (0,1)");
  return rate_expansion_terms(p.alpha()).value_at(beta);
}

/// Leading-order forms of d, H(D_1|D_0) and -E_inf.
struct ComponentExpansions {
  double d_term = 0.0;
  double entropy_rate_term = 0.0;
  double secret_term = 0.0;

  double sum() const { return d_term + entropy_rate_term + secret_term; }
};

inline ComponentExpansions component_expansions(const DeletionParams& p) {
  const double a = p.alpha();
  const double b = p.beta();
  const double c = constant_c().value;
  return {b / a, -b * std::log2(b) + b * h2(a) / a + b * kLog2E, -c * b};
}

/// Two-term expansion for iid deletions with probability d.
inline double iid_expansion(double d) {
  if (!(d > 0.0 && d < 1.0)) throw std::invalid_argument("iid_expansion: d must lie in (0,1)");
  const double c = constant_c().value;
  return -d * std::log2(d) + d * (1.0 + kLog2E - c);
}

/// Expansion of the per-symbol mutual information across the bursty deletion
/// channel under a uniform input. Only a lower-bound expansion for capacity.
inline double channel_mi_expansion(const DeletionParams& p) { return 1.0 - rmin_expansion(p); }

/// Rate in the regime of few long bursts (alpha, beta small, alpha/beta fixed).
inline double case1_rate(const DeletionParams& p) { return stationary_rate(p); }

/// (R + beta log2 beta) / beta, comparable with the linear coefficient.
inline double linear_coefficient_diagnostic(double rate, double beta) { return (rate + beta * std::log2(beta)) / beta; }

}  // namespace burstsync
