#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <utility>

namespace burstsync {

/// Base-2 log-probability with an explicit "impossible" state, so a
/// structurally zero probability is never confused with underflow.
class LogProb {
 public:
  static LogProb impossible() noexcept { return LogProb{}; }
  static LogProb from_log2(double value) noexcept { return LogProb{value}; }
  static LogProb from_linear(double p) {
    if (p < 0.0) throw std::domain_error("LogProb: negative probability");
    return p == 0.0 ? impossible() : LogProb{std::log2(p)};
  }

  bool is_impossible() const noexcept { return impossible_; }
  bool is_possible() const noexcept { return !impossible_; }

  /// log2 p; -inf when impossible.
  double log2() const noexcept {
    return impossible_ ? -std::numeric_limits<double>::infinity() : value_;
  }
  double linear() const noexcept { return impossible_ ? 0.0 : std::exp2(value_); }

 private:
  LogProb() = default;
  explicit LogProb(double v) : value_(v), impossible_(false) {}

  double value_ = 0.0;
  bool impossible_ = true;
};

/// Neumaier-compensated running sum.
class KahanSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  KahanSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Pairwise summation in a fixed reduction order.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline constexpr double kLog2E = std::numbers::log2e;

/// -p log2 p with 0 log 0 = 0.
inline double entropy_term(double p) noexcept { return p > 0.0 ? -p * std::log2(p) : 0.0; }

/// Binary entropy in bits.
inline double h2(double p) noexcept {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return entropy_term(p) + entropy_term(1.0 - p);
}

/// log2(2^a + 2^b) without overflow.
inline double log2_add(double a, double b) noexcept {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log2(1.0 + std::exp2(b - a));
}

/// Ordinary least-squares slope of ys against xs.
inline double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares_slope: need >= 2 points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace burstsync
