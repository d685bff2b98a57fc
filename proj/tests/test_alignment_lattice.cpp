#include <burstsync/alignment_lattice.hpp>

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace burstsync;

namespace {

// Random (x, y, boundary, params) with y drawn as a genuine deletion of x
// half the time and as an arbitrary short string otherwise.
struct Instance {
  BitString x, y;
  BoundaryCondition b;
  DeletionParams p{0.5, 0.5};
};

Instance random_instance(std::uint64_t seed, std::size_t max_n) {
  Rng rng = make_rng(seed, 0);
  Instance in;
  const std::size_t n = 1 + rng() % max_n;
  in.p = DeletionParams(0.05 + 0.9 * uniform01(rng), 0.05 + 0.9 * uniform01(rng));
  in.x = sample_source(n, rng);
  in.b = BoundaryCondition(static_cast<int>(rng() & 1u), static_cast<int>(rng() & 1u));
  if (rng() & 1u) {
    in.y = apply_deletion(in.x, sample_source(n, rng));
  } else {
    in.y = sample_source(rng() % (n + 1), rng);
  }
  return in;
}

}  // namespace

TEST(EmissionProb, TwoBitAllKeep) {
  const BitString x{0, 1};
  for (double a : {0.3, 0.7})
    for (double b : {0.1, 0.6}) {
      const DeletionParams p(a, b);
      for (auto [d0, dn] : BoundaryCondition::all) {
        const double expected = oracle::emission(x, x, d0, dn, p);
        // Only the all-keep pattern explains y = x.
        const double keep_path = transition_prob(p, d0, 0) * transition_prob(p, 0, 0) * transition_prob(p, 0, dn) /
                                 oracle::matrix_power(p, 3)[d0][dn];
        EXPECT_NEAR(expected, keep_path, 1e-15);
        EXPECT_NEAR(emission_prob(x, x, {d0, dn}, p).linear(), expected, 1e-14);
      }
    }
}

TEST(EmissionProb, NotASubsequenceIsImpossible) {
  const LogProb lp = emission_prob(BitString{0, 0}, BitString{1}, {0, 0}, DeletionParams(0.5, 0.5));
  EXPECT_TRUE(lp.is_impossible());
  EXPECT_EQ(lp.linear(), 0.0);
  EXPECT_EQ(lp.log2(), -std::numeric_limits<double>::infinity());
}

TEST(EmissionProb, LongerSideInfoIsCallerError) {
  EXPECT_THROW(emission_prob(BitString{0}, BitString{0, 1}, {0, 0}, DeletionParams(0.5, 0.5)), std::invalid_argument);
}

TEST(EmissionProb, MatchesBruteForce) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance in = random_instance(s, 10);
    const double expected = oracle::emission(in.x, in.y, in.b.d0, in.b.d_next, in.p);
    worst = std::max(worst, std::abs(emission_prob(in.x, in.y, in.b, in.p).linear() - expected));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(EmissionProb, ConstrainedMatchesBruteForce) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Instance in = random_instance(1000 + s, 9);
    for (Bit c = 0; c < 2; ++c) {
      const double expected = oracle::emission(in.x, in.y, in.b.d0, in.b.d_next, in.p, c);
      EXPECT_NEAR(emission_prob(in.x, in.y, in.b, in.p, c).linear(), expected, 1e-12);
    }
  }
}

TEST(EmissionProb, ConstraintConsistency) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const Instance in = random_instance(2000 + s, 12);
    const double whole = emission_prob(in.x, in.y, in.b, in.p).linear();
    const double split = transition_prob(in.p, in.b.d0, 0) * emission_prob(in.x, in.y, in.b, in.p, Bit{0}).linear() +
                         transition_prob(in.p, in.b.d0, 1) * emission_prob(in.x, in.y, in.b, in.p, Bit{1}).linear();
    EXPECT_NEAR(split, whole, 1e-12 * std::max(1.0, whole));
  }
}

TEST(EmissionProb, CompletenessOverSubsequences) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Rng rng = make_rng(77, s);
    const std::size_t n = 1 + rng() % 10;
    const BitString x = sample_source(n, rng);
    const DeletionParams p(0.1 + 0.8 * uniform01(rng), 0.1 + 0.8 * uniform01(rng));
    std::set<BitString> subsequences;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << n); ++pat) subsequences.insert(oracle::delete_bits(x, pat));
    for (auto [d0, dn] : BoundaryCondition::all) {
      KahanSum total;
      for (const BitString& y : subsequences) total += emission_prob(x, y, {d0, dn}, p).linear();
      EXPECT_NEAR(total.value(), 1.0, 1e-12);
    }
  }
}

TEST(EmissionProb, ComplementSymmetry) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Instance in = random_instance(3000 + s, 16);
    const LogProb a = emission_prob(in.x, in.y, in.b, in.p);
    const LogProb b = emission_prob(in.x.complemented(), in.y.complemented(), in.b, in.p);
    ASSERT_EQ(a.is_possible(), b.is_possible());
    if (a.is_possible()) {
      EXPECT_DOUBLE_EQ(a.log2(), b.log2());
      EXPECT_DOUBLE_EQ(d1_posterior(in.x, in.y, in.b, in.p),
                       d1_posterior(in.x.complemented(), in.y.complemented(), in.b, in.p));
    }
  }
}

TEST(EmissionProb, LongBlocksDoNotUnderflow) {
  // 2000 deletions at alpha = beta = 0.5 have probability far below 1e-308.
  Rng rng = make_rng(8, 0);
  const DeletionParams p(0.5, 0.5);
  const BitString x = sample_source(4000, rng);
  const BitString y = apply_deletion(x, sample_source(4000, rng));
  const LogProb lp = emission_prob(x, y, {0, 1}, p);
  ASSERT_TRUE(lp.is_possible());
  EXPECT_TRUE(std::isfinite(lp.log2()));
  EXPECT_LT(lp.log2(), -1000.0);
}

TEST(D1Posterior, MatchesBruteForce) {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    Instance in = random_instance(4000 + s, 10);
    if (!oracle::is_subsequence(in.y, in.x)) continue;
    const double expected = oracle::posterior(in.x, in.y, in.b.d0, in.b.d_next, in.p);
    worst = std::max(worst, std::abs(d1_posterior(in.x, in.y, in.b, in.p) - expected));
  }
  EXPECT_LE(worst, 1e-12);
}

TEST(D1Posterior, SingleDeletionInFirstRun) {
  const double post = d1_posterior(BitString{0, 0, 0, 1}, BitString{0, 0, 1}, {0, 0}, DeletionParams(0.5, 1e-4));
  EXPECT_NEAR(post, 1.0 / 3.0, 0.01);
}

TEST(D1Posterior, BurstOfTwoInFirstTwoRun) {
  const double post = d1_posterior(BitString{0, 1, 0, 1, 1}, BitString{0, 1, 1}, {0, 0}, DeletionParams(0.5, 1e-4));
  EXPECT_NEAR(post, 1.0 / 3.0, 0.01);
}

TEST(D1Posterior, EqualLengthsForceKeep) {
  const BitString x = BitString::parse("0110101");
  EXPECT_EQ(d1_posterior(x, x, {1, 0}, DeletionParams(0.3, 0.4)), 0.0);
}

TEST(D1Posterior, InconsistentPairThrows) {
  EXPECT_THROW(d1_posterior(BitString{0, 0}, BitString{1}, {0, 0}, DeletionParams(0.5, 0.5)), std::domain_error);
}

TEST(D1Posterior, QueryInterface) {
  const LatticeQuery q{BitString{0, 0, 0, 1}, BitString{0, 0, 1}, {0, 0}, DeletionParams(0.5, 0.2), std::nullopt};
  const LatticeResult r = evaluate(q);
  ASSERT_TRUE(r.d1_posterior.has_value());
  EXPECT_GE(*r.d1_posterior, 0.0);
  EXPECT_LE(*r.d1_posterior, 1.0);
  EXPECT_NEAR(r.log_emission.linear(), oracle::emission(q.x, q.y, 0, 0, q.params), 1e-14);
  const LatticeQuery bad{BitString{0, 0}, BitString{1}, {0, 0}, DeletionParams(0.5, 0.2), std::nullopt};
  EXPECT_FALSE(evaluate(bad).d1_posterior.has_value());
}

TEST(ConsistentPatternCount, Examples) {
  EXPECT_EQ(consistent_pattern_count(BitString{0, 0, 0, 1}, BitString{0, 0, 1}), 3u);
  // Three single bursts of length 2 explain (0,1,1), plus the two-burst
  // pattern (0,0,1,0,1); only the single bursts survive as beta -> 0.
  EXPECT_EQ(consistent_pattern_count(BitString{0, 1, 0, 1, 1}, BitString{0, 1, 1}), 4u);
  std::size_t single_bursts = 0;
  for (std::size_t i = 1; i <= 4; ++i) {
    BitString d(5);
    d.set(i - 1, 1);
    d.set(i, 1);
    single_bursts += apply_deletion(BitString{0, 1, 0, 1, 1}, d) == BitString{0, 1, 1};
  }
  EXPECT_EQ(single_bursts, 3u);
  const BitString x = BitString::parse("1001011101");
  EXPECT_EQ(consistent_pattern_count(x, x), 1u);
  EXPECT_EQ(consistent_pattern_count(BitString{0, 0}, BitString{1}), 0u);
}

TEST(ConsistentPatternCount, MatchesEnumeration) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Instance in = random_instance(5000 + s, 11);
    std::uint64_t count = 0;
    for (std::uint64_t pat = 0; pat < (std::uint64_t{1} << in.x.size()); ++pat)
      count += oracle::delete_bits(in.x, pat) == in.y;
    EXPECT_EQ(consistent_pattern_count(in.x, in.y), count);
  }
}
