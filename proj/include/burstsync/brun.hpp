#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "bit_string.hpp"
#include "deletion_model.hpp"
#include "rng.hpp"

namespace burstsync {

/// A burst of `b` deletions starting at 1-based `position`.
struct BurstSpec {
  std::size_t b = 1;
  std::size_t position = 1;

  BurstSpec(std::size_t burst, std::size_t start) : b(burst), position(start) {
    if (b < 1 || position < 1) throw std::invalid_argument("BurstSpec: b and position must be positive");
  }

  /// Interior deletion pattern of length n: position-1 zeros, b ones, zeros.
  BitString pattern(std::size_t n) const {
    if (position + b - 1 > n) throw std::invalid_argument("BurstSpec: burst runs past the block");
    BitString d(n);
    for (std::size_t i = 0; i < b; ++i) d.set(position - 1 + i, 1);
    return d;
  }
};

/// Extent of the first b-run, and whether it was cut off by the end of x.
struct BrunExtent {
  std::size_t extent = 0;
  bool censored = false;
};

namespace detail {
inline void require_length(const BitString& x, std::size_t b, const char* who) {
  if (b < 1) throw std::invalid_argument(std::string(who) + ": b must be positive");
  if (x.size() < b)
    throw std::invalid_argument(std::string(who) + ": sequence length " + std::to_string(x.size()) +
                                " is shorter than b = " + std::to_string(b));
}
}  // namespace detail

/// True iff x is periodic with period b; its extent is then |x| - b + 1.
inline bool is_brun(const BitString& x, std::size_t b) {
  detail::require_length(x, b, "is_brun");
  for (std::size_t i = b; i < x.size(); ++i)
    if (x[i] != x[i - b]) return false;
  return true;
}

/// Extent l of the longest b-run prefix x_1..x_{b+l-1}. `censored` is set
/// when that prefix is all of x, so a longer run may continue past the end.
inline BrunExtent first_brun(const BitString& x, std::size_t b) {
  detail::require_length(x, b, "first_brun_extent");
  std::size_t end = b;
  while (end < x.size() && x[end] == x[end - b]) ++end;
  return {end - b + 1, end == x.size()};
}

inline std::size_t first_brun_extent(const BitString& x, std::size_t b) { return first_brun(x, b).extent; }

/// y(x, d_{i,b}) for every start i = 1..|x|-b+1.
inline std::vector<BitString> burst_delete_outcomes(const BitString& x, std::size_t b) {
  detail::require_length(x, b, "burst_delete_outcomes");
  std::vector<BitString> out;
  out.reserve(x.size() - b + 1);
  for (std::size_t i = 1; i + b - 1 <= x.size(); ++i) out.push_back(apply_deletion(x, BurstSpec(b, i).pattern(x.size())));
  return out;
}

/// Empirical law of the first b-run extent of uniform random sequences.
struct ExtentHistogram {
  std::size_t b = 1;
  std::vector<std::size_t> counts;  // counts[l] for l = 1..max_extent; index 0 unused
  std::size_t overflow = 0;         // uncensored extents above max_extent
  std::size_t censored = 0;         // runs that reached the end of the sequence
  std::size_t samples = 0;

  std::size_t uncensored() const noexcept { return samples - censored; }
  double pmf(std::size_t l) const {
    return l < counts.size() ? static_cast<double>(counts[l]) / static_cast<double>(uncensored()) : 0.0;
  }
};

/// Draws `samples` uniform sequences of length b + max_extent + tail_padding;
/// censored extents are tallied separately.
inline ExtentHistogram extent_histogram(std::size_t b, std::size_t samples, std::uint64_t seed,
                                        std::size_t max_extent = 16, std::size_t tail_padding = 48) {
  if (b < 1) throw std::invalid_argument("extent_histogram: b must be positive");
  ExtentHistogram h;
  h.b = b;
  h.counts.assign(max_extent + 1, 0);
  h.samples = samples;
  const std::size_t length = b + max_extent + tail_padding;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng = make_rng(seed, i);
    const BrunExtent e = first_brun(sample_source(length, rng), b);
    if (e.censored)
      ++h.censored;
    else if (e.extent <= max_extent)
      ++h.counts[e.extent];
    else
      ++h.overflow;
  }
  return h;
}

/// Generates random b-runs (b <= max_b, extent <= max_extent) followed by a
/// short random tail and counts those whose first `extent` burst-deletion
/// outcomes are not all equal.
inline std::size_t brun_invariance_violations(std::size_t trials, std::uint64_t seed, std::size_t max_b = 8,
                                    std::size_t max_extent = 20) {
  std::size_t violations = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng = make_rng(seed, t);
    const std::size_t b = 1 + rng() % max_b;
    const std::size_t extent = 1 + rng() % max_extent;
    const std::size_t tail = rng() % 6;
    const BitString period = sample_source(b, rng);
    BitString x(b + extent - 1 + tail);
    for (std::size_t i = 0; i < b + extent - 1; ++i) x.set(i, period[i % b]);
    const BitString suffix = sample_source(tail, rng);
    for (std::size_t i = 0; i < tail; ++i) x.set(b + extent - 1 + i, suffix[i]);
    const auto outcomes = burst_delete_outcomes(x, b);
    for (std::size_t i = 1; i < extent; ++i) {
      if (outcomes[i] != outcomes[0]) {
        ++violations;
        break;
      }
    }
  }
  return violations;
}

}  // namespace burstsync
