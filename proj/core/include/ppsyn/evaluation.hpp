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

// Utility metrics for synthetic data and the no-partition ablation.

#ifndef PPSYN_EVALUATION_HPP_
#define PPSYN_EVALUATION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ppsyn/domain.hpp"
#include "ppsyn/rng.hpp"
#include "ppsyn/synthesizer.hpp"

namespace ppsyn {

struct WorkloadErrorBreakdown {
  double mean = 0.0;                // (1 / (N |W|)) sum_w ||p(w) - p_hat(w)||_1
  std::vector<double> per_marginal;  // ||p(w) - p_hat(w)||_1 / N
};

// Normalized L1 workload error. N is the true record count; the synthetic
// marginals are rescaled to N records when the synthetic set has a
// different size.
WorkloadErrorBreakdown workload_error_breakdown(const Dataset& truth, const Dataset& synth,
                                                const Workload& workload);
double workload_error(const Dataset& truth, const Dataset& synth, const Workload& workload);

// Conjunction of closed index ranges; attributes without a range are free.
struct RangeQuery {
  std::vector<std::optional<std::pair<std::uint32_t, std::uint32_t>>> ranges;

  bool matches(std::span<const std::uint32_t> row) const;
};

// Fraction of records satisfying `q`.
double range_answer(const Dataset& data, const RangeQuery& q);

// Mean over queries of (f(q) - f_hat(q))^2 with answers as fractions.
double range_query_error(const Dataset& truth, const Dataset& synth,
                         std::span<const RangeQuery> queries);

struct RangeQueryOptions {
  std::size_t dims = 3;
  std::size_t n_cliques = 210;
  std::size_t queries_per_clique = 1;
  std::uint64_t seed = 0;
  bool full_ranges = false;  // every constrained range spans its attribute
};

// Attribute weights z_a^2 with z_a standard exponential draws.
std::vector<double> attribute_weights(std::size_t d, std::uint64_t seed);

// One `dims`-subset drawn with probability proportional to the product of
// its members' weights.
std::vector<std::size_t> sample_weighted_clique(std::span<const double> weights,
                                                std::size_t dims, Engine& rng);

// Distinct weighted cliques (up to n_cliques, fewer if the domain runs out),
// each with queries_per_clique uniformly random sub-range queries.
std::vector<RangeQuery> generate_range_queries(const DomainSpec& domain,
                                               const RangeQueryOptions& options);

// The synthesizer with partitioning switched off: every candidate is measured
// cell by cell at rho = |cells|^2 / (pi (eta contr)^2).
SynthesisResult baseline_no_partition(const Dataset& data, const Workload& workload,
                                      SynthesisConfig config);

}  // namespace ppsyn

#endif  // PPSYN_EVALUATION_HPP_
