#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "alignment_lattice.hpp"
#include "bit_string.hpp"
#include "deletion_model.hpp"
#include "monte_carlo.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace burstsync {

/// A random-binning code: the encoder sends a GF(2)-linear hash of the source
/// block, drawn from a universal family keyed by `hash_seed`.
class BinCode {
 public:
  BinCode(std::size_t n, double rate, std::uint64_t hash_seed) : n_(n), rate_(rate), hash_seed_(hash_seed) {
    if (n < 1 || n > 64) throw std::invalid_argument("BinCode: block length must be in [1, 64]");
    if (!(rate > 0.0 && rate <= 1.0)) throw std::invalid_argument("BinCode: rate must lie in (0, 1]");
    // The 1e-9 absorbs representation error in products such as 10 * 0.3.
    message_bits_ = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * rate - 1e-9));
    message_bits_ = std::clamp<std::size_t>(message_bits_, 1, n);
    draw_rows();
  }

  std::size_t n() const noexcept { return n_; }
  double rate() const noexcept { return rate_; }
  std::size_t message_bits() const noexcept { return message_bits_; }
  std::uint64_t hash_seed() const noexcept { return hash_seed_; }

  /// Hash of a source block packed least-significant-bit first.
  std::uint64_t hash_word(std::uint64_t source) const noexcept {
    std::uint64_t out = 0;
    for (std::size_t r = 0; r < message_bits_; ++r)
      out |= std::uint64_t((std::popcount(rows_[r] & source) + ((offset_ >> r) & 1u)) & 1u) << r;
    return out;
  }

 private:
  // Uniform random rows give P[h(x) = h(x')] = 2^-m for x != x'. At full rate
  // the rows are redrawn until independent, which makes the hash injective.
  void draw_rows() {
    Rng rng{mix64(hash_seed_)};
    const std::uint64_t mask = n_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_) - 1;
    do {
      rows_.clear();
      for (std::size_t r = 0; r < message_bits_; ++r) rows_.push_back(rng() & mask);
    } while (message_bits_ == n_ && !full_rank());
    offset_ = rng() & ((message_bits_ == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << message_bits_) - 1);
  }

  bool full_rank() const {
    std::vector<std::uint64_t> basis;
    for (std::uint64_t v : rows_) {
      for (std::uint64_t b : basis) v = std::min(v, v ^ b);
      if (v == 0) return false;
      basis.push_back(v);
    }
    return true;
  }

  std::size_t n_;
  double rate_;
  std::size_t message_bits_ = 1;
  std::uint64_t hash_seed_;
  std::vector<std::uint64_t> rows_;
  std::uint64_t offset_ = 0;
};

/// f_n: the bin index of x, as a bit string of length message_bits.
inline BitString encode(const BitString& x, const BinCode& code) {
  if (x.size() != code.n())
    throw std::invalid_argument("encode: source length " + std::to_string(x.size()) + " does not match code length " +
                                std::to_string(code.n()));
  return BitString::from_word(code.hash_word(x.to_word()), code.message_bits());
}

class DeletionCapExceeded : public std::length_error {
 public:
  DeletionCapExceeded(std::size_t deletions, std::size_t cap)
      : std::length_error(std::to_string(deletions) + " deletions exceed the decoder cap " + std::to_string(cap)) {}
};

/// Visits every distinct length-n supersequence of y in lexicographic order.
/// Each candidate is produced once, through its greedy leftmost embedding of y.
inline void for_each_supersequence(const BitString& y, std::size_t n,
                                   const std::function<void(const BitString&)>& visit) {
  if (y.size() > n) return;
  BitString candidate(n);
  const std::size_t m = y.size();
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t i, std::size_t j) {
    if (i == n) {
      if (j == m) visit(candidate);
      return;
    }
    for (Bit c = 0; c < 2; ++c) {
      const std::size_t matched = (j < m && y[j] == c) ? j + 1 : j;
      if (m - matched > n - i - 1) continue;
      candidate.set(i, c);
      extend(i + 1, matched);
    }
  };
  extend(0, 0);
}

inline constexpr std::size_t kDefaultDeletionCap = 6;

/// Scores closer than this (in bits) count as tied; equal posteriors reached
/// through different lattice paths differ in the last few ulps.
inline constexpr double kScoreTieBits = 1e-9;

/// g_n: among the supersequences of y in the announced bin, the one with the
/// largest p(y | x', boundary); ties go to the lexicographically smallest.
/// Returns nullopt when no candidate lands in the bin.
inline std::optional<BitString> decode(const BitString& message, const BitString& y, const BinCode& code,
                                       const DeletionParams& params, const BoundaryCondition& boundary,
                                       std::size_t deletion_cap = kDefaultDeletionCap) {
  if (y.size() > code.n()) throw std::invalid_argument("decode: side-information longer than the block");
  if (message.size() != code.message_bits()) throw std::invalid_argument("decode: message length mismatch");
  const std::size_t deletions = code.n() - y.size();
  if (deletions > deletion_cap) throw DeletionCapExceeded(deletions, deletion_cap);

  const std::uint64_t bin = message.to_word();
  std::optional<BitString> best;
  double best_score = 0.0;
  for_each_supersequence(y, code.n(), [&](const BitString& candidate) {
    if (code.hash_word(candidate.to_word()) != bin) return;
    const LogProb score = emission_prob(candidate, y, boundary, params);
    if (score.is_impossible()) return;
    if (!best || score.log2() > best_score + kScoreTieBits) {
      best = candidate;
      best_score = score.log2();
    }
  });
  return best;
}

struct SyncStats {
  double error_rate = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  std::size_t redraws = 0;  // draws discarded for exceeding the deletion cap
};

/// Empirical block error probability of the binning code at the given rate.
/// Each trial draws a fresh code from the family; decoding failures count as
/// errors.
inline SyncStats error_rate(const DeletionParams& params, std::size_t n, double rate, std::size_t trials,
                            std::uint64_t seed, const McOptions& opts = {},
                            std::size_t deletion_cap = kDefaultDeletionCap) {
  if (trials < 1) throw std::invalid_argument("error_rate: need at least one trial");
  std::vector<char> wrong(trials, 0);
  std::vector<std::size_t> redraws(trials, 0);
  parallel_tasks(trials, opts.workers, [&](std::size_t t) {
    Rng rng = make_rng(seed, t);
    Draw draw = draw_experiment(params, n, rng);
    while (n - draw.side_info.size() > deletion_cap) {
      ++redraws[t];
      draw = draw_experiment(params, n, rng);
    }
    const BinCode code(n, rate, derive_seed(~seed, t));
    const auto decoded = decode(encode(draw.source, code), draw.side_info, code, params, draw.boundary(), deletion_cap);
    wrong[t] = !decoded || *decoded != draw.source;
  });
  SyncStats s;
  s.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    s.errors += static_cast<std::size_t>(wrong[t]);
    s.redraws += redraws[t];
  }
  s.error_rate = static_cast<double>(s.errors) / static_cast<double>(trials);
  s.std_error = std::sqrt(s.error_rate * (1.0 - s.error_rate) / static_cast<double>(trials));
  return s;
}

}  // namespace burstsync
