#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "arboreal/recursion.hpp"

namespace arboreal {
namespace {

using Q = Rational;

// K_n as (1-p)/(dp)^n * sum_{i<n} (dp)^i, summed term by term.
Q k_by_sum(int n, int d, const Q& p) {
  const Q dp = Q(d) * p;
  Q sum;
  for (int i = 0; i < n; ++i) sum += pow(dp, i);
  return (1 - p) / pow(dp, n) * sum;
}

TEST(Recursion, PartitionExamples) {
  const auto z = partition_recursion(2, GasParams<Q>{2, Q(1, 2)});
  ASSERT_EQ(z.size(), 3u);
  EXPECT_EQ(z[0].surviving, 1);
  EXPECT_EQ(z[0].extinct, 0);
  EXPECT_EQ(z[1].surviving, Q(1, 2));
  EXPECT_EQ(z[1].extinct, Q(1, 4));
  EXPECT_EQ(z[2].surviving, Q(1, 4));
  EXPECT_EQ(z[2].extinct, Q(1, 4));
}

TEST(Recursion, SurvivalMatchesPartitionRatio) {
  for (int d : {2, 3}) {
    for (const Q& p : {Q(1, 4), Q(1, 2), Q(3, 4)}) {
      const GasParams<Q> params{d, p};
      const auto z = partition_recursion(5, params);
      const auto s = k_recursive(5, params);
      for (int m = 0; m <= 5; ++m) EXPECT_EQ(s.q[m], z[m].surviving / z[m].total());
    }
  }
}

TEST(Recursion, KExamples) {
  const auto s = k_recursive(4, GasParams<Q>{2, Q(1, 2)});
  EXPECT_EQ(s.K[1], Q(1, 2));
  EXPECT_EQ(s.q[4], Q(1, 3));
  EXPECT_EQ(k_closed_form(4, GasParams<Q>{2, Q(1, 2)}), 2);
  // (1/4)/(1/2) * (1 - 2/3); K_1 = (1 - p)/(dp) gives the same value.
  EXPECT_EQ(k_closed_form(1, GasParams<Q>{2, Q(3, 4)}), Q(1, 6));
  EXPECT_EQ(k_recursive(1, GasParams<Q>{2, Q(3, 4)}).K[1], Q(1, 6));
  EXPECT_EQ(k_closed_form(2, GasParams<Q>{3, Q(1, 6)}), 5);
  EXPECT_EQ(k_recursive(2, GasParams<Q>{3, Q(1, 6)}).K[2], 5);
}

TEST(Recursion, ClosedFormEqualsRecursion) {
  for (int d : {2, 3, 4}) {
    for (const Q& p : {Q(1, 4), Q(1, 3), Q(1, 2), Q(2, 3), Q(3, 4), Q(1, d)}) {
      const GasParams<Q> params{d, p};
      const auto s = k_recursive(50, params);
      for (int n = 0; n <= 50; n += 7) {
        EXPECT_EQ(k_closed_form(n, params), s.K[n]);
        EXPECT_EQ(k_by_sum(n, d, p), s.K[n]);
      }
    }
  }
}

TEST(Recursion, CriticalSurvivalIsHarmonic) {
  const auto s = k_recursive(100, GasParams<Q>{2, Q(1, 2)});
  for (int n = 0; n <= 100; ++n) EXPECT_EQ(s.q[n], Q(2) / Q(n + 2));
  const auto s3 = k_recursive(30, GasParams<Q>{3, Q(1, 3)});
  for (int n = 0; n <= 30; ++n) EXPECT_EQ(s3.q[n], Q(3) / Q(2 * n + 3));
}

TEST(Recursion, FloatPath) {
  const auto s = k_recursive(50, GasParams<double>{2, 0.75});
  EXPECT_NEAR(s.q[50], 2.0 / 3.0, 1e-9);
  const double k20 = 0.5 * (1 - std::pow(1.5, -20));
  EXPECT_NEAR(s.q[20], 1 / (1 + k20), 1e-14);
  EXPECT_NEAR(k_closed_form(20, GasParams<double>{2, 0.75}), k20, 1e-14);
  EXPECT_DOUBLE_EQ(k_closed_form(10, GasParams<double>{2, 0.5}), 5.0);
  EXPECT_NEAR(k_closed_form(10, GasParams<double>{2, 0.5 + 1e-9}), 5.0, 1e-6);

  const auto exact = k_recursive(30, GasParams<Q>{3, Q(2, 5)});
  const auto approx = k_recursive(30, GasParams<double>{3, 0.4});
  for (int n = 0; n <= 30; ++n) EXPECT_NEAR(approx.q[n], exact.q[n].get_d(), 1e-13);
}

TEST(Recursion, SubcriticalDecay) {
  const auto s = k_recursive(60, GasParams<double>{2, 0.4});
  for (int n = 0; n <= 60; ++n) EXPECT_LE(s.q[n], std::pow(0.8, n) * s.q[0] * (1 + 1e-12));
}

TEST(Recursion, ZeroProbability) {
  const auto s = k_recursive(3, GasParams<Q>{2, Q(0)});
  EXPECT_TRUE(s.degenerate);
  EXPECT_EQ(s.q[0], 1);
  EXPECT_EQ(s.q[3], 0);
  EXPECT_THROW(k_closed_form(3, GasParams<Q>{2, Q(0)}), std::domain_error);
  const auto z = partition_recursion(3, GasParams<Q>{2, Q(0)});
  EXPECT_EQ(z[3].surviving, 0);
  EXPECT_EQ(z[3].extinct, 1);
}

TEST(Recursion, Validation) {
  EXPECT_THROW(k_recursive(3, GasParams<Q>{1, Q(1, 2)}), std::invalid_argument);
  EXPECT_THROW(k_recursive(3, GasParams<Q>{2, Q(1)}), std::domain_error);
  EXPECT_THROW(k_recursive(-1, GasParams<Q>{2, Q(1, 2)}), std::invalid_argument);
  EXPECT_THROW(k_recursive(3, GasParams<double>{2, -0.1}), std::domain_error);
}

TEST(Recursion, LimitValues) {
  EXPECT_EQ(survival_prob_limit(GasParams<Q>{2, Q(3, 4)}), Q(2, 3));
  EXPECT_EQ(survival_prob_limit(GasParams<Q>{2, Q(1, 2)}), 0);
  EXPECT_EQ(limit_kernel(GasParams<Q>{2, Q(3, 4)}), (KernelParams<Q>{Q(2, 3), Q(1, 2)}));
  EXPECT_EQ(limit_kernel(GasParams<Q>{3, Q(1, 2)}), (KernelParams<Q>{Q(1, 2), Q(1, 3)}));
  EXPECT_EQ(limit_kernel(GasParams<Q>{2, Q(2, 5)}), (KernelParams<Q>{Q(0), Q(2, 5)}));
}

TEST(Recursion, FiniteKernel) {
  const GasParams<Q> half{2, Q(1, 2)};
  const auto s = k_recursive(30, half);
  EXPECT_EQ(finite_kernel(1, half, s).theta, Q(2, 3));
  EXPECT_EQ(finite_kernel(1, half, s).alpha, 0);
  EXPECT_THROW(finite_kernel(0, half, s), std::invalid_argument);

  for (int d : {2, 3}) {
    for (const Q& p : {Q(1, 4), Q(1, 3), Q(1, 2), Q(2, 3), Q(3, 4)}) {
      const GasParams<Q> params{d, p};
      const auto seq = k_recursive(30, params);
      for (int m = 1; m <= 30; ++m) ASSERT_EQ(finite_kernel(m, params, seq).theta, seq.q[m]);
    }
  }

  const GasParams<double> three_quarters{2, 0.75};
  const auto f = k_recursive(200, three_quarters);
  const auto kp = finite_kernel(200, three_quarters, f);
  EXPECT_NEAR(kp.theta, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(kp.alpha, 0.5, 1e-12);
}

TEST(Recursion, BlockProbabilityExample) {
  const KernelParams<Q> kp{Q(2, 3), Q(1, 2)};
  const std::array<EdgeState, 2> closed{EdgeState::closed, EdgeState::closed};
  EXPECT_EQ(kernel_block_probability<Q>(EdgeState::closed, closed, kp), Q(1, 12));
  const std::array<EdgeState, 2> two_spines{EdgeState::open_surviving, EdgeState::open_surviving};
  EXPECT_EQ(kernel_block_probability<Q>(EdgeState::open_surviving, two_spines, kp), 0);
  EXPECT_THROW(kernel_block_probability<Q>(EdgeState::closed, std::span<const EdgeState>{}, kp),
               std::invalid_argument);
}

TEST(Recursion, BlocksAreNormalized) {
  for (int d : {2, 3, 4}) {
    for (const KernelParams<Q>& kp : {KernelParams<Q>{Q(2, 3), Q(1, 2)}, KernelParams<Q>{Q(1, 7), Q(3, 11)}}) {
      for (EdgeState parent : {EdgeState::closed, EdgeState::open_extinct, EdgeState::open_surviving}) {
        Q total;
        std::vector<EdgeState> kids(d);
        int patterns = 1;
        for (int j = 0; j < d; ++j) patterns *= 3;
        for (int code = 0; code < patterns; ++code) {
          int c = code;
          for (int j = 0; j < d; ++j, c /= 3) kids[j] = static_cast<EdgeState>(c % 3);
          total += kernel_block_probability<Q>(parent, kids, kp);
        }
        EXPECT_EQ(total, 1) << d;
      }
    }
  }
}

TEST(Recursion, KernelTables) {
  const GasParams<Q> params{2, Q(3, 4)};
  const auto table = finite_kernel_table(4, params);
  const auto s = k_recursive(4, params);
  ASSERT_EQ(table.depth(), 4);
  for (int k = 0; k < 4; ++k) EXPECT_EQ(table.at(k).theta, s.q[4 - k]);
  EXPECT_EQ(table.at(3).alpha, 0);
  EXPECT_EQ(finite_kernel_table(0, params).depth(), 0);
  const auto limit = limit_kernel_table(5, params);
  EXPECT_EQ(limit.depth(), 5);
  EXPECT_EQ(limit.at(4), limit_kernel(params));
}

}  // namespace
}  // namespace arboreal
