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
#include <thread>

#include "ppsyn/errors.hpp"
#include "ppsyn/privacy.hpp"

namespace ppsyn {
namespace {

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index writes
// only its own output slot, so results do not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t threads, Fn&& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += threads) fn(i);
    });
  }
}

}  // namespace

double potential_contribution(const Marginal& true_m, const Marginal& model_m) {
  return marginal_l1(true_m, model_m);
}

CandidatePool::CandidatePool(const Dataset& data, const Workload& workload) {
  if (workload.empty()) throw InvalidArgument("workload is empty");
  const std::size_t n = workload.size();
  true_marginals_.reserve(n);
  for (const auto& e : workload.entries) {
    true_marginals_.push_back(compute_marginal(data, e.clique));
  }
  merges_.resize(n);
  splits_.resize(n);
}

CandidatePool::~CandidatePool() = default;
CandidatePool::CandidatePool(CandidatePool&&) noexcept = default;
CandidatePool& CandidatePool::operator=(CandidatePool&&) noexcept = default;

PartitionResult CandidatePool::partition(std::size_t i, double contr, double eta) {
  const Marginal& m = true_marginals_.at(i);
  if (m.clique.dims() == 1) {
    if (!merges_[i]) merges_[i] = std::make_unique<MergeSequence>(m);
    return partition_1d(*merges_[i], contr, eta);
  }
  if (!splits_[i]) splits_[i] = std::make_unique<SplitSequence>(m);
  return partition_md(*splits_[i], contr, eta);
}

SelectionOutcome part_sele(CandidatePool& pool, const DistributionModel& model,
                           double remaining_rho, double rho_exp,
                           const SelectionOptions& options, Engine& rng) {
  if (!(rho_exp > 0.0)) throw InvalidArgument("rho_exp must be positive");
  if (rho_exp > remaining_rho) throw BudgetError("rho_exp exceeds the remaining budget");
  const double measure_budget = remaining_rho - rho_exp;

  SelectionOutcome out;
  out.candidates.resize(pool.size());
  parallel_for(pool.size(), options.threads, [&](std::size_t i) {
    Candidate& c = out.candidates[i];
    const Marginal& truth = pool.true_marginal(i);
    c.clique = truth.clique;
    c.contr = potential_contribution(truth, model_marginal(model, truth.clique));
    if (!(c.contr > 0.0)) return;  // model already exact here
    if (options.partitioning) {
      c.partition_result = pool.partition(i, c.contr, options.eta);
    } else {
      const std::size_t cells = truth.clique.cell_count();
      c.partition_result = PartitionResult{Partition::singletons(truth.clique),
                                           required_rho(cells, c.contr, options.eta, 0.0),
                                           0.0};
    }
    const double rho = c.partition_result->rho;
    c.score = c.contr / rho;  // 0 when rho is infinite
    c.feasible = std::isfinite(rho) && rho <= measure_budget;
  });

  std::vector<std::size_t> feasible;
  std::vector<double> scores;
  for (std::size_t i = 0; i < out.candidates.size(); ++i) {
    if (out.candidates[i].feasible) {
      feasible.push_back(i);
      scores.push_back(out.candidates[i].score);
    }
  }
  if (feasible.empty()) return out;

  const std::size_t pick =
      options.noiseless
          ? argmax_select(scores)
          : exponential_select(scores, em_epsilon_for_rho(rho_exp), options.delta_sens, rng);
  out.exhausted = false;
  out.chosen = feasible[pick];
  return out;
}

SelectionOutcome part_sele(const Workload& workload, const DistributionModel& model,
                           const Dataset& data, double remaining_rho, double rho_exp,
                           const SelectionOptions& options, Engine& rng) {
  CandidatePool pool(data, workload);
  return part_sele(pool, model, remaining_rho, rho_exp, options, rng);
}

}  // namespace ppsyn
