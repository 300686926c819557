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

// Per-round marginal selection by contribution per unit of budget.
//
// Each workload clique's contribution is the L1 gap between its true marginal
// and the current model's. The partitioner turns that contribution into the
// budget rho_w the marginal would need; candidates that are unaffordable,
// need an infinite budget, or contribute nothing are dropped, and one of the
// rest is drawn by the exponential mechanism on score = contr / rho_w.

#ifndef PPSYN_SELECTION_HPP_
#define PPSYN_SELECTION_HPP_

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "ppsyn/domain.hpp"
#include "ppsyn/estimator.hpp"
#include "ppsyn/partition.hpp"
#include "ppsyn/rng.hpp"

namespace ppsyn {

double potential_contribution(const Marginal& true_m, const Marginal& model_m);

struct Candidate {
  Clique clique;
  double contr = 0.0;
  std::optional<PartitionResult> partition_result;
  double score = 0.0;
  bool feasible = false;
};

struct SelectionOptions {
  double eta = 0.7;
  double delta_sens = 1.0;
  bool noiseless = false;
  // When false every candidate is measured cell by cell (the ablation).
  bool partitioning = true;
  std::size_t threads = 1;
};

// True marginals and partition trajectories of a workload, computed once and
// reused across rounds. Only contributions change from round to round.
class CandidatePool {
 public:
  CandidatePool(const Dataset& data, const Workload& workload);
  ~CandidatePool();
  CandidatePool(CandidatePool&&) noexcept;
  CandidatePool& operator=(CandidatePool&&) noexcept;

  std::size_t size() const { return true_marginals_.size(); }
  const Marginal& true_marginal(std::size_t i) const { return true_marginals_[i]; }

  // Minimum-budget partition of candidate i for the given contribution.
  PartitionResult partition(std::size_t i, double contr, double eta);

 private:
  std::vector<Marginal> true_marginals_;
  std::vector<std::unique_ptr<MergeSequence>> merges_;
  std::vector<std::unique_ptr<SplitSequence>> splits_;
};

struct SelectionOutcome {
  bool exhausted = true;        // no feasible candidate
  std::size_t chosen = 0;       // index into the workload / candidates
  std::vector<Candidate> candidates;

  const Candidate& selected() const { return candidates.at(chosen); }
};

// Scores every candidate against `model` and draws one. The caller charges
// rho_exp (and the chosen rho_w once measured).
SelectionOutcome part_sele(CandidatePool& pool, const DistributionModel& model,
                           double remaining_rho, double rho_exp,
                           const SelectionOptions& options, Engine& rng);

SelectionOutcome part_sele(const Workload& workload, const DistributionModel& model,
                           const Dataset& data, double remaining_rho, double rho_exp,
                           const SelectionOptions& options, Engine& rng);

}  // namespace ppsyn

#endif  // PPSYN_SELECTION_HPP_
