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

#include "ppsyn/selection.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ppsyn/errors.hpp"
#include "ppsyn/privacy.hpp"

namespace ppsyn {
namespace {

Dataset skewed_dataset() {
  const std::vector<std::size_t> cards{4, 3, 5};
  const DomainSpec d = make_domain(cards);
  std::mt19937_64 gen(8);
  std::vector<Row> rows;
  for (int i = 0; i < 600; ++i) {
    const std::uint32_t a = std::min<std::uint32_t>(3, static_cast<std::uint32_t>(gen() % 7));
    const std::uint32_t b = gen() % 5 == 0 ? static_cast<std::uint32_t>(gen() % 3) : a % 3;
    const std::uint32_t c = static_cast<std::uint32_t>((a + gen() % 2) % 5);
    rows.push_back({a, b, c});
  }
  return Dataset(d, rows);
}

Workload all_cliques(const DomainSpec& d) {
  Workload w;
  for (std::vector<std::size_t> attrs :
       std::vector<std::vector<std::size_t>>{{0}, {1}, {2}, {0, 1}, {0, 2}, {1, 2}}) {
    w.entries.push_back({Clique(attrs, d), 1.0});
  }
  return w;
}

TEST(ContributionTest, Examples) {
  const std::vector<std::size_t> cards{2};
  const DomainSpec d = make_domain(cards);
  const Clique c({0}, d);
  EXPECT_EQ(potential_contribution({c, {4, 0}}, {c, {2, 2}}), 4.0);
  EXPECT_EQ(potential_contribution({c, {4, 0}}, {c, {4, 0}}), 0.0);
  EXPECT_LE(potential_contribution({c, {4, 0}}, {c, {0, 4}}), 8.0);
}

TEST(PartSeleTest, CandidatesCarryContractAndScore) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), static_cast<double>(data.n()));
  Engine rng = make_stream(1, 0, "select");
  SelectionOptions opts;
  const SelectionOutcome out = part_sele(w, model, data, 10.0, 0.01, opts, rng);
  ASSERT_FALSE(out.exhausted);
  for (const Candidate& c : out.candidates) {
    const Marginal truth = compute_marginal(data, c.clique);
    EXPECT_DOUBLE_EQ(c.contr, marginal_l1(truth, model_marginal(model, c.clique)));
    EXPECT_LE(c.contr, 2.0 * static_cast<double>(data.n()));
    ASSERT_TRUE(c.partition_result.has_value());
    const auto& r = *c.partition_result;
    EXPECT_DOUBLE_EQ(c.score, c.contr / r.rho);
    EXPECT_LE(r.re + static_cast<double>(r.partition.size()) / std::sqrt(std::numbers::pi * r.rho),
              opts.eta * c.contr + 1e-9);
  }
}

TEST(PartSeleTest, NoiselessPicksArgmax) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), static_cast<double>(data.n()));
  SelectionOptions opts;
  opts.noiseless = true;
  Engine rng = make_stream(1, 0, "select");
  const SelectionOutcome out = part_sele(w, model, data, 10.0, 0.01, opts, rng);
  ASSERT_FALSE(out.exhausted);
  for (const Candidate& c : out.candidates) {
    if (c.feasible) EXPECT_LE(c.score, out.selected().score);
  }
}

TEST(PartSeleTest, FiltersUnaffordableCandidates) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), static_cast<double>(data.n()));
  SelectionOptions opts;
  opts.noiseless = true;
  Engine rng = make_stream(2, 0, "select");
  const auto probe = part_sele(w, model, data, 1e9, 1e-6, opts, rng);
  std::vector<double> rhos;
  for (const auto& c : probe.candidates) rhos.push_back(c.partition_result->rho);
  std::sort(rhos.begin(), rhos.end());
  // Budget that admits exactly the cheapest candidate.
  const double rho_exp = 1e-6;
  const double remaining = rho_exp + 0.5 * (rhos[0] + rhos[1]);
  const auto out = part_sele(w, model, data, remaining, rho_exp, opts, rng);
  ASSERT_FALSE(out.exhausted);
  int feasible = 0;
  for (const auto& c : out.candidates) feasible += c.feasible ? 1 : 0;
  EXPECT_EQ(feasible, 1);
  EXPECT_LE(out.selected().partition_result->rho, remaining - rho_exp);

  const auto none = part_sele(w, model, data, rho_exp + 0.5 * rhos[0], rho_exp, opts, rng);
  EXPECT_TRUE(none.exhausted);
}

TEST(PartSeleTest, ExactModelIsExhausted) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const std::vector<std::size_t> all{0, 1, 2};
  const Marginal full = compute_marginal(data, Clique(all, data.domain()));
  const DistributionModel exact(data.domain(), full.counts);
  Engine rng = make_stream(3, 0, "select");
  const auto out = part_sele(w, exact, data, 1.0, 0.01, SelectionOptions{}, rng);
  EXPECT_TRUE(out.exhausted);
  for (const auto& c : out.candidates) EXPECT_EQ(c.contr, 0.0);
}

TEST(PartSeleTest, RejectsBadBudgets) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), 600.0);
  Engine rng = make_stream(4, 0, "select");
  EXPECT_THROW(part_sele(w, model, data, 0.01, 0.02, SelectionOptions{}, rng), BudgetError);
  EXPECT_THROW(part_sele(w, model, data, 0.01, 0.0, SelectionOptions{}, rng), InvalidArgument);
  EXPECT_THROW(part_sele(Workload{}, model, data, 1.0, 0.1, SelectionOptions{}, rng),
               InvalidArgument);
}

TEST(PartSeleTest, WithoutPartitioningUsesCellByCellBudget) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), 600.0);
  SelectionOptions opts;
  opts.partitioning = false;
  Engine rng = make_stream(5, 0, "select");
  const auto out = part_sele(w, model, data, 1e9, 0.01, opts, rng);
  for (const auto& c : out.candidates) {
    const double n = static_cast<double>(c.clique.cell_count());
    EXPECT_NEAR(c.partition_result->rho,
                n * n / (std::numbers::pi * std::pow(opts.eta * c.contr, 2)),
                1e-12 * c.partition_result->rho);
    EXPECT_EQ(c.partition_result->partition.size(), c.clique.cell_count());
    EXPECT_EQ(c.partition_result->re, 0.0);
  }
}

TEST(PartSeleTest, PartitioningNeverCostsMore) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), 600.0);
  SelectionOptions with;
  SelectionOptions without;
  without.partitioning = false;
  Engine rng = make_stream(6, 0, "select");
  const auto a = part_sele(w, model, data, 1e9, 0.01, with, rng);
  const auto b = part_sele(w, model, data, 1e9, 0.01, without, rng);
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    EXPECT_LE(a.candidates[i].partition_result->rho,
              b.candidates[i].partition_result->rho * (1.0 + 1e-12));
  }
}

TEST(PartSeleTest, ThreadCountDoesNotChangeResults) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), 600.0);
  SelectionOptions one;
  SelectionOptions four;
  four.threads = 4;
  Engine r1 = make_stream(7, 0, "select");
  Engine r2 = make_stream(7, 0, "select");
  const auto a = part_sele(w, model, data, 1.0, 0.01, one, r1);
  const auto b = part_sele(w, model, data, 1.0, 0.01, four, r2);
  EXPECT_EQ(a.chosen, b.chosen);
  for (std::size_t i = 0; i < a.candidates.size(); ++i) {
    EXPECT_EQ(a.candidates[i].score, b.candidates[i].score);
  }
}

TEST(PartSeleTest, SingleFeasibleCandidateAlwaysChosen) {
  const std::vector<std::size_t> cards{3};
  const DomainSpec d = make_domain(cards);
  const Dataset data(d, {{0}, {0}, {0}, {1}});
  const Workload w{{{Clique({0}, d), 1.0}}};
  const auto model = DistributionModel::uniform(d, 4.0);
  Engine rng = make_stream(8, 0, "select");
  for (int i = 0; i < 50; ++i) {
    const auto out = part_sele(w, model, data, 100.0, 0.5, SelectionOptions{}, rng);
    ASSERT_FALSE(out.exhausted);
    EXPECT_EQ(out.chosen, 0u);
  }
}

TEST(PartSeleTest, FrequenciesFollowSoftmaxOfScores) {
  const Dataset data = skewed_dataset();
  const Workload w = all_cliques(data.domain());
  const auto model = DistributionModel::uniform(data.domain(), 600.0);
  CandidatePool pool(data, w);
  SelectionOptions opts;
  opts.noiseless = true;
  Engine probe_rng = make_stream(9, 0, "probe");
  const auto probe = part_sele(pool, model, 1e9, 1e-6, opts, probe_rng);
  double lo = 1e300, hi = 0.0;
  for (const auto& c : probe.candidates) {
    lo = std::min(lo, c.score);
    hi = std::max(hi, c.score);
  }
  // Spread the scores over about four units of epsilon * score / 2.
  const double eps = 8.0 / (hi - lo);
  const double rho_exp = eps * eps / 8.0;
  opts.noiseless = false;
  std::vector<double> counts(w.size(), 0.0);
  std::vector<double> scores;
  Engine rng = make_stream(9, 0, "select");
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) {
    const auto out = part_sele(pool, model, 1e9, rho_exp, opts, rng);
    counts[out.chosen] += 1;
    if (scores.empty()) {
      for (const auto& c : out.candidates) scores.push_back(c.score);
    }
  }
  const auto probs = oracle::softmax(scores, eps / 2.0);
  std::vector<double> obs, exp;
  double tail_obs = 0.0, tail_exp = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] * draws < 5.0) {
      tail_obs += counts[i];
      tail_exp += probs[i];
    } else {
      obs.push_back(counts[i]);
      exp.push_back(probs[i]);
    }
  }
  if (tail_exp > 0.0) {
    obs.push_back(tail_obs);
    exp.push_back(tail_exp);
  }
  ASSERT_GE(obs.size(), 2u);
  EXPECT_GT(oracle::chi_square_pvalue(obs, exp), 0.001);
}

}  // namespace
}  // namespace ppsyn
