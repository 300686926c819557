// Copyright 2026 The ppsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppsyn/privacy.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

TEST(GaussianTest, SigmaForRho) {
  EXPECT_DOUBLE_EQ(sigma_for_rho(0.5), 1.0);
  EXPECT_DOUBLE_EQ(sigma_for_rho(2.0), 0.5);
  for (double rho : {1e-6, 0.01, 0.3, 7.0}) {
    EXPECT_NEAR(rho_for_sigma(sigma_for_rho(rho)), rho, 1e-15 * rho);
  }
  EXPECT_THROW(sigma_for_rho(0.0), InvalidArgument);
  EXPECT_THROW(sigma_for_rho(-1.0), InvalidArgument);
}

TEST(GaussianTest, NoiseSpecKeepsInvariant) {
  for (double rho : {1e-5, 0.125, 4.0}) {
    const NoiseSpec s = NoiseSpec::from_rho(rho);
    EXPECT_NEAR(s.rho(), 1.0 / (2.0 * s.sigma() * s.sigma()), 1e-12 * rho);
  }
  const NoiseSpec s = NoiseSpec::from_sigma(3.0);
  EXPECT_DOUBLE_EQ(s.rho(), 1.0 / 18.0);
}

TEST(GaussianTest, PerturbRejectsNonPositiveSigma) {
  Engine rng = make_stream(1, 0, "g");
  const std::vector<double> v{1.0};
  EXPECT_THROW(gaussian_perturb(v, 0.0, rng), InvalidArgument);
}

TEST(GaussianTest, PerturbIsDeterministicPerStream) {
  const std::vector<double> v{1, 2, 3};
  Engine a = make_stream(2, 1, "m");
  Engine b = make_stream(2, 1, "m");
  EXPECT_EQ(gaussian_perturb(v, 2.0, a), gaussian_perturb(v, 2.0, b));
}

TEST(GaussianTest, MeanOfZeroVectorPerturbations) {
  Engine rng = make_stream(3, 0, "g");
  const double sigma = 2.0;
  const int trials = 100000;
  std::vector<double> sum(4, 0.0);
  const std::vector<double> zero(4, 0.0);
  for (int t = 0; t < trials; ++t) {
    const auto out = gaussian_perturb(zero, sigma, rng);
    for (std::size_t i = 0; i < 4; ++i) sum[i] += out[i];
  }
  for (double s : sum) EXPECT_LT(std::abs(s / trials), 5.0 * sigma / std::sqrt(trials));
}

TEST(GaussianTest, EmpiricalStdWithinOnePercent) {
  Engine rng = make_stream(4, 0, "g");
  const double sigma = 3.5;
  const std::vector<double> zero(1000, 0.0);
  double s2 = 0.0;
  for (int t = 0; t < 1000; ++t) {
    for (double x : gaussian_perturb(zero, sigma, rng)) s2 += x * x;
  }
  EXPECT_NEAR(std::sqrt(s2 / 1e6), sigma, 0.01 * sigma);
}

TEST(GaussianTest, MeanL1NoiseMatchesHalfNormal) {
  Engine rng = make_stream(5, 0, "g");
  const std::vector<double> zero(99, 0.0);
  double total = 0.0;
  for (int t = 0; t < 10000; ++t) {
    for (double x : gaussian_perturb(zero, 10.0, rng)) total += std::abs(x);
  }
  const double expected = std::sqrt(2.0 / std::numbers::pi) * 990.0;
  EXPECT_NEAR(total / 10000, expected, 0.02 * expected);
}

TEST(ExponentialTest, EpsilonForRho) {
  EXPECT_DOUBLE_EQ(em_epsilon_for_rho(0.5), 2.0);
  EXPECT_NEAR(em_epsilon_for_rho(0.00125), 0.1, 1e-15);
  for (double eps : {0.01, 0.7, 3.0}) {
    EXPECT_NEAR(em_epsilon_for_rho(eps * eps / 8.0), eps, 1e-14);
  }
  EXPECT_THROW(em_epsilon_for_rho(0.0), InvalidArgument);
}

TEST(ExponentialTest, SingleCandidateAndEmpty) {
  Engine rng = make_stream(6, 0, "e");
  const std::vector<double> one{42.0};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(exponential_select(one, 1.0, 1.0, rng), 0u);
  EXPECT_THROW(exponential_select(std::vector<double>{}, 1.0, 1.0, rng), InvalidArgument);
}

TEST(ExponentialTest, EqualScoresAreUniform) {
  Engine rng = make_stream(7, 0, "e");
  const std::vector<double> scores(6, 3.0);
  std::vector<double> counts(6, 0.0);
  for (int i = 0; i < 100000; ++i) counts[exponential_select(scores, 1.0, 1.0, rng)] += 1;
  EXPECT_GT(oracle::chi_square_pvalue(counts, std::vector<double>(6, 1.0 / 6)), 0.001);
}

TEST(ExponentialTest, OddsRatioOfTwoScores) {
  Engine rng = make_stream(8, 0, "e");
  const std::vector<double> scores{5.0, 3.0};
  std::vector<double> counts(2, 0.0);
  for (int i = 0; i < 100000; ++i) counts[exponential_select(scores, 2.0, 1.0, rng)] += 1;
  const double p0 = std::exp(2.0) / (1.0 + std::exp(2.0));
  EXPECT_GT(oracle::chi_square_pvalue(counts, {p0, 1.0 - p0}), 0.001);
}

TEST(ExponentialTest, HugeScoresDoNotOverflow) {
  Engine rng = make_stream(9, 0, "e");
  const std::vector<double> scores{1e300, 1e300 - 1e285, 0.0};
  const std::size_t i = exponential_select(scores, 1.0, 1.0, rng);
  EXPECT_LT(i, 2u);
}

TEST(ExponentialTest, ArgmaxBreaksTiesLow) {
  EXPECT_EQ(argmax_select(std::vector<double>{1, 4, 4, 2}), 1u);
}

TEST(ConversionTest, ResidualAndMonotonicity) {
  for (double eps : {0.05, 0.1, 1.0, 2.0, 10.0}) {
    for (double delta : {1e-9, 1e-6, 0.01}) {
      const double rho = eps_delta_to_rho(eps, delta);
      EXPECT_GT(rho, 0.0);
      EXPECT_LT(std::abs(rho + 2.0 * std::sqrt(rho * std::log(1.0 / delta)) - eps), 1e-9);
    }
  }
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.001, 5.0);
  for (int i = 0; i < 200; ++i) {
    double a = u(gen), b = u(gen);
    if (a > b) std::swap(a, b);
    if (a == b) continue;
    EXPECT_LT(eps_delta_to_rho(a, 1e-9), eps_delta_to_rho(b, 1e-9));
  }
  EXPECT_LT(eps_delta_to_rho(1e-8, 1e-9), 1e-17);
}

TEST(ConversionTest, RejectsBadArguments) {
  EXPECT_THROW(eps_delta_to_rho(0.0, 1e-9), InvalidArgument);
  EXPECT_THROW(eps_delta_to_rho(1.0, 0.0), InvalidArgument);
  EXPECT_THROW(eps_delta_to_rho(1.0, 1.0), InvalidArgument);
}

TEST(AccountantTest, ChargesCompose) {
  PrivacyAccountant acc(1.0);
  acc.charge(0.1, "a");
  acc.charge(0.2, "b");
  EXPECT_NEAR(acc.spent(), 0.3, 1e-15);
  ASSERT_EQ(acc.log().size(), 2u);
  EXPECT_EQ(acc.log()[1].label, "b");
}

TEST(AccountantTest, ExactRemainderAndOverdraft) {
  PrivacyAccountant acc(1.0);
  acc.charge(0.25, "a");
  acc.charge(acc.remaining(), "rest");
  EXPECT_EQ(acc.spent(), acc.total());

  PrivacyAccountant acc2(1.0);
  acc2.charge(0.5, "a");
  EXPECT_THROW(acc2.charge(acc2.remaining() + 1e-6, "over"), BudgetError);
  EXPECT_EQ(acc2.log().size(), 1u);
  EXPECT_THROW(acc2.charge(0.0, "zero"), InvalidArgument);
  EXPECT_THROW(PrivacyAccountant(0.0), std::exception);
}

TEST(AccountantTest, AdditivityUnderManyCharges) {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(1e-6, 1e-3);
  PrivacyAccountant acc(1.0);
  double sum = 0.0;
  std::size_t k = 0;
  while (true) {
    const double r = u(gen);
    if (!acc.can_afford(r)) break;
    acc.charge(r, "c");
    ++k;
    sum = 0.0;
    for (const auto& e : acc.log()) sum += e.rho;
    ASSERT_LE(std::abs(acc.spent() - sum), 1e-12 * static_cast<double>(k));
    ASSERT_LE(acc.spent(), acc.total() + 1e-12);
  }
  EXPECT_GT(k, 1000u);
}

}  // namespace
}  // namespace ppsyn
