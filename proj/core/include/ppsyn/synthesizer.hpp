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

// The select-measure-fit loop.
//
// A tenth of the budget measures every one-way marginal (split across
// attributes in proportion to cardinality^(2/3)) and seeds the model.
// Each later round spends rho_exp = 0.1 rho / T on choosing a workload
// marginal and the chosen marginal's required budget on measuring it through
// its partition; the model is refitted after every measurement. The loop
// ends when less than rho_exp remains or no candidate is affordable, and the
// final model is sampled.

#ifndef PPSYN_SYNTHESIZER_HPP_
#define PPSYN_SYNTHESIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ppsyn/domain.hpp"
#include "ppsyn/estimator.hpp"
#include "ppsyn/partition.hpp"
#include "ppsyn/privacy.hpp"
#include "ppsyn/rng.hpp"

namespace ppsyn {

struct SynthesisConfig {
  double rho_total = 0.0;
  // Set when rho_total was converted from (epsilon, delta); echoed in reports.
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::size_t rounds = 16;  // T
  double eta = 0.7;
  std::uint64_t seed = 0;
  double delta_sens = 1.0;
  bool noiseless = false;
  bool partitioning = true;
  std::optional<std::size_t> records;  // defaults to the input record count
  std::size_t threads = 1;
  FitOptions fit;
};

// Throws InvalidArgument for eta outside (0,1), T == 0, or delta_sens <= 0,
// and BudgetError for rho_total <= 0.
void validate(const SynthesisConfig& config);

// rho_init split over attributes proportionally to cardinality^(2/3).
std::vector<double> one_way_allocation(std::span<const std::size_t> cardinalities,
                                       double rho_init);

// Measures every one-way marginal cell by cell, charging each to `ledger`.
std::vector<NoisyMeasurement> one_way_init(const Dataset& data, double rho_init,
                                           PrivacyAccountant& ledger, bool noiseless,
                                           Engine& rng);

struct CandidateTrace {
  std::string clique;
  double contr = 0.0;
  double rho = kInfiniteRho;
  double score = 0.0;
  std::size_t partition_size = 0;
  bool feasible = false;
};

struct RoundRecord {
  std::size_t round = 0;
  std::string clique;
  double contr = 0.0;
  double rho_measure = 0.0;
  double rho_select = 0.0;
  double sigma = 0.0;
  std::size_t partition_size = 0;
  std::size_t cells = 0;
  double re = 0.0;
  FitStats fit;
  std::vector<CandidateTrace> candidates;
  std::optional<Partition> partition;
};

struct SynthesisReport {
  SynthesisConfig config;
  std::size_t records_in = 0;
  std::size_t records_out = 0;
  double rho_init = 0.0;
  double rho_exp = 0.0;
  FitStats init_fit;
  std::vector<RoundRecord> rounds;
  std::vector<LedgerEntry> ledger;
  double rho_spent = 0.0;
  std::string stop_reason;
  // Wall-clock seconds per phase. Not part of any byte-stable output.
  std::map<std::string, double> timings;
};

struct SynthesisResult {
  Dataset synthetic;
  DistributionModel model;
  SynthesisReport report;
};

SynthesisResult synthesize(const Dataset& data, const Workload& workload,
                           const SynthesisConfig& config);

}  // namespace ppsyn

#endif  // PPSYN_SYNTHESIZER_HPP_
