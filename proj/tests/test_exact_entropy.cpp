#include <burstsync/exact_entropy.hpp>

#include <gtest/gtest.h>

#include <iostream>

#include "oracles.hpp"

using namespace burstsync;

namespace {
const DeletionParams kGrid[] = {{0.3, 0.05}, {0.5, 0.05}, {0.8, 0.05}, {0.3, 0.2}, {0.5, 0.2}, {0.8, 0.2}};
constexpr double kConstantC = 1.2885312757793885;  // high-precision series value
}  // namespace

TEST(ExactEntropy, MatchesJointTabulation) {
  for (const DeletionParams& p : {DeletionParams(0.5, 0.5), DeletionParams(0.3, 0.1), DeletionParams(0.8, 0.6)}) {
    for (std::size_t n = 1; n <= 6; ++n) {
      const ExactQuantities q = exact_quantities(p, n);
      const oracle::JointEntropies o = oracle::joint_entropies(p, n);
      EXPECT_NEAR(q.rate, o.rate, 1e-12) << n;
      EXPECT_NEAR(q.j_rate, o.j_rate, 1e-12) << n;
      EXPECT_NEAR(q.secret, o.secret, 1e-12) << n;
      EXPECT_NEAR(q.expected_length, o.expected_length, 1e-12) << n;
      EXPECT_NEAR(h_d1_given_d0_dn1(p, n), o.h_d1_given_d0_dn1, 1e-12) << n;
    }
  }
}

TEST(ExactEntropy, FairChainTwoBits) {
  const DeletionParams p(0.5, 0.5);
  EXPECT_NEAR(exact_rn(p, 2), oracle::joint_entropies(p, 2).rate, 1e-12);
}

TEST(ExactEntropy, OneBitRateIsDeletionFraction) {
  for (const DeletionParams& p : kGrid) {
    EXPECT_NEAR(exact_rn(p, 1), stationary_rate(p), 1e-12);
    EXPECT_NEAR(exact_jn(p, 1), oracle::joint_entropies(p, 1).j_rate, 1e-12);
  }
}

TEST(ExactEntropy, Bounds) {
  for (const DeletionParams& p : kGrid) {
    for (std::size_t n = 1; n <= 8; ++n) {
      const ExactQuantities q = exact_quantities(p, n);
      EXPECT_GE(q.rate, -1e-12);
      EXPECT_LE(q.rate, 1.0 + 1e-12);
      EXPECT_GE(q.j_rate, stationary_rate(p) - 1e-12);
      EXPECT_GE(q.secret, -1e-12);
      EXPECT_LE(q.secret, h_d1_given_d0_dn1(p, n) + 1e-12);
    }
  }
}

TEST(ExactEntropy, SecretNondecreasing) {
  const DeletionParams p(0.5, 0.2);
  double prev = 0.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    const double e = exact_en(p, n);
    EXPECT_GE(e, prev - 1e-12) << n;
    EXPECT_LE(e, 1.0);
    prev = e;
  }
}

TEST(ExactEntropy, SmallBetaSecretNearC) {
  const DeletionParams p(0.5, 0.01);
  const double ratio = exact_en(p, 10) / p.beta() / kConstantC;
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 2.0);
}

TEST(ExactEntropy, HD1GivenD0ClosedForm) {
  EXPECT_NEAR(h_d1_given_d0({0.5, 0.5}), 1.0, 1e-15);
  EXPECT_NEAR(h_d1_given_d0({0.5, 0.05}), 0.3512699610145057, 1e-14);
  for (const DeletionParams& p : kGrid) {
    const double d = stationary_rate(p);
    double h01 = 0.0, h0 = oracle::plogp(d) + oracle::plogp(1.0 - d);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) h01 += oracle::plogp((a ? d : 1.0 - d) * oracle::kernel(p)[a][b]);
    EXPECT_NEAR(h_d1_given_d0(p), h01 - h0, 1e-12);
  }
}

TEST(ExactEntropy, HD1GivenBoundaryConverges) {
  EXPECT_NEAR(h_d1_given_d0_dn1({0.5, 0.5}, 1), 1.0, 1e-12);
  EXPECT_NEAR(h_d1_given_d0_dn1({0.5, 0.5}, 9), 1.0, 1e-12);
  for (const DeletionParams& p : kGrid) {
    double prev_gap = std::abs(h_d1_given_d0_dn1(p, 1) - h_d1_given_d0(p));
    for (std::size_t n = 2; n <= 200; ++n) {
      const double gap = std::abs(h_d1_given_d0_dn1(p, n) - h_d1_given_d0(p));
      EXPECT_LE(gap, prev_gap + 1e-15);
      prev_gap = gap;
    }
    EXPECT_LT(prev_gap, 1e-9);
  }
}

TEST(ExactEntropy, IdentityHoldsOnGrid) {
  for (const DeletionParams& p : kGrid) {
    for (const EntropyReport& r : entropy_reports(p, 2, 10)) {
      ASSERT_TRUE(r.identity_residual.has_value());
      EXPECT_LE(*r.identity_residual, 1e-9) << "alpha=" << p.alpha() << " beta=" << p.beta() << " n=" << r.n;
    }
  }
  for (std::size_t n = 2; n <= 10; ++n) EXPECT_LE(identity_residual({0.5, 0.5}, n), 1e-9);
}

TEST(ExactEntropy, IdentityDetectsPerturbation) {
  const DeletionParams p(0.5, 0.2);
  ExactQuantities at = exact_quantities(p, 6);
  const ExactQuantities prev = exact_quantities(p, 5);
  const double clean = identity_residual(p, at, prev);
  at.secret += 1e-6;
  EXPECT_GT(identity_residual(p, at, prev), clean + 0.9e-6);
}

TEST(ExactEntropy, Superadditivity) {
  EXPECT_GE(superadditivity_check({0.5, 0.2}, 10), -1e-9);
  EXPECT_GE(superadditivity_check({0.5, 0.5}, 10), -1e-9);
  const DeletionParams p(0.5, 0.2);
  EXPECT_GE(2.0 * exact_rn(p, 2), 2.0 * exact_rn(p, 1) - 1e-12);
}

TEST(ExactEntropy, ExpectedLength) {
  EXPECT_DOUBLE_EQ(expected_side_info_length({0.5, 0.5}, 10), 5.0);
  for (const DeletionParams& p : kGrid) {
    EXPECT_NEAR(expected_side_info_length(p, 7), 7.0 * (1.0 - stationary_rate(p)), 1e-12);
    EXPECT_NEAR(exact_quantities(p, 8).expected_length, expected_side_info_length(p, 8), 1e-12);
  }
}

TEST(ExactEntropy, CapIsEnforced) {
  const DeletionParams p(0.5, 0.2);
  EXPECT_THROW(exact_rn(p, 13), EnumerationCapExceeded);
  EXPECT_THROW(exact_rn(p, 5, {4, 1}), EnumerationCapExceeded);
  try {
    exact_rn(p, 13);
  } catch (const EnumerationCapExceeded& e) {
    EXPECT_EQ(e.cap(), 12u);
    EXPECT_NE(std::string(e.what()).find("12"), std::string::npos);
  }
}

TEST(ExactEntropy, WorkerCountDoesNotChangeResults) {
  const DeletionParams p(0.3, 0.2);
  const ExactQuantities one = exact_quantities(p, 9, {12, 1});
  const ExactQuantities four = exact_quantities(p, 9, {12, 4});
  EXPECT_EQ(one.rate, four.rate);
  EXPECT_EQ(one.j_rate, four.j_rate);
  EXPECT_EQ(one.secret, four.secret);
}

TEST(ExactEntropy, DecompositionGapReport) {
  // Both R_n and d + H(D_1|D_0) - E_n tend to the minimum rate; the gap is
  // reported, not asserted.
  for (const DeletionParams& p : {DeletionParams(0.5, 0.2), DeletionParams(0.5, 0.05)}) {
    std::cout << "alpha=" << p.alpha() << " beta=" << p.beta() << " gap:";
    for (const EntropyReport& r : entropy_reports(p, 1, 10)) std::cout << ' ' << decomposition_gap(r);
    std::cout << '\n';
  }
}
