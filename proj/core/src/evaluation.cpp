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

#include "ppsyn/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ppsyn/errors.hpp"

namespace ppsyn {

WorkloadErrorBreakdown workload_error_breakdown(const Dataset& truth, const Dataset& synth,
                                                const Workload& workload) {
  if (!(truth.domain() == synth.domain())) {
    throw InvalidArgument("workload_error: datasets have different domains");
  }
  if (workload.empty()) throw InvalidArgument("workload_error: empty workload");
  if (truth.n() == 0 || synth.n() == 0) {
    throw InvalidArgument("workload_error: datasets must be non-empty");
  }
  const double n = static_cast<double>(truth.n());
  const double scale = n / static_cast<double>(synth.n());
  WorkloadErrorBreakdown out;
  double sum = 0.0;
  for (const auto& e : workload.entries) {
    const Marginal p = compute_marginal(truth, e.clique);
    Marginal q = compute_marginal(synth, e.clique);
    for (double& c : q.counts) c *= scale;
    const double l1 = marginal_l1(p, q);
    out.per_marginal.push_back(l1 / n);
    sum += l1;
  }
  out.mean = sum / (n * static_cast<double>(workload.size()));
  return out;
}

double workload_error(const Dataset& truth, const Dataset& synth, const Workload& workload) {
  return workload_error_breakdown(truth, synth, workload).mean;
}

bool RangeQuery::matches(std::span<const std::uint32_t> row) const {
  for (std::size_t a = 0; a < ranges.size(); ++a) {
    if (ranges[a] && (row[a] < ranges[a]->first || row[a] > ranges[a]->second)) {
      return false;
    }
  }
  return true;
}

double range_answer(const Dataset& data, const RangeQuery& q) {
  if (q.ranges.size() != data.domain().size()) {
    throw InvalidArgument("range query does not match the domain");
  }
  if (data.n() == 0) return 0.0;
  std::size_t hits = 0;
  for (const Row& row : data.rows()) hits += q.matches(row) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(data.n());
}

double range_query_error(const Dataset& truth, const Dataset& synth,
                         std::span<const RangeQuery> queries) {
  if (queries.empty()) throw InvalidArgument("range_query_error: no queries");
  if (!(truth.domain() == synth.domain())) {
    throw InvalidArgument("range_query_error: datasets have different domains");
  }
  double sum = 0.0;
  for (const RangeQuery& q : queries) {
    const double diff = range_answer(truth, q) - range_answer(synth, q);
    sum += diff * diff;
  }
  return sum / static_cast<double>(queries.size());
}

std::vector<double> attribute_weights(std::size_t d, std::uint64_t seed) {
  Engine rng = make_stream(seed, 0, "attribute-weights");
  std::vector<double> w(d);
  for (double& x : w) {
    const double z = standard_exponential(rng);
    x = z * z;
  }
  return w;
}

std::vector<std::size_t> sample_weighted_clique(std::span<const double> weights,
                                                std::size_t dims, Engine& rng) {
  const std::size_t d = weights.size();
  if (dims == 0 || dims > d) throw InvalidArgument("clique size out of range");
  // esp[i][j]: elementary symmetric polynomial of degree j over weights[i..d).
  std::vector<std::vector<double>> esp(d + 1, std::vector<double>(dims + 1, 0.0));
  esp[d][0] = 1.0;
  for (std::size_t i = d; i-- > 0;) {
    esp[i][0] = 1.0;
    for (std::size_t j = 1; j <= dims; ++j) {
      esp[i][j] = esp[i + 1][j] + weights[i] * esp[i + 1][j - 1];
    }
  }
  if (!(esp[0][dims] > 0.0)) throw InvalidArgument("all clique weights are zero");
  std::vector<std::size_t> out;
  std::size_t j = dims;
  for (std::size_t i = 0; i < d && j > 0; ++i) {
    const double p_take = weights[i] * esp[i + 1][j - 1] / esp[i][j];
    if (uniform01(rng) < p_take) {
      out.push_back(i);
      --j;
    }
  }
  return out;
}

std::vector<RangeQuery> generate_range_queries(const DomainSpec& domain,
                                               const RangeQueryOptions& options) {
  const std::size_t d = domain.size();
  if (options.dims == 0 || options.dims > d) {
    throw InvalidArgument("range query dims must be in [1, " + std::to_string(d) + "]");
  }
  const std::vector<double> weights = attribute_weights(d, options.seed);
  Engine rng = make_stream(options.seed, 0, "range-queries");

  std::set<std::vector<std::size_t>> seen;
  std::vector<std::vector<std::size_t>> cliques;
  const std::size_t max_attempts = 1000 * options.n_cliques + 1000;
  for (std::size_t attempt = 0;
       attempt < max_attempts && cliques.size() < options.n_cliques; ++attempt) {
    auto clique = sample_weighted_clique(weights, options.dims, rng);
    if (seen.insert(clique).second) cliques.push_back(std::move(clique));
  }

  std::vector<RangeQuery> queries;
  for (const auto& clique : cliques) {
    for (std::size_t k = 0; k < options.queries_per_clique; ++k) {
      RangeQuery q;
      q.ranges.resize(d);
      for (std::size_t a : clique) {
        const std::uint64_t card = domain.cardinality(a);
        if (options.full_ranges) {
          q.ranges[a] = std::make_pair(0u, static_cast<std::uint32_t>(card - 1));
          continue;
        }
        auto x = static_cast<std::uint32_t>(uniform_index(rng, card));
        auto y = static_cast<std::uint32_t>(uniform_index(rng, card));
        q.ranges[a] = std::make_pair(std::min(x, y), std::max(x, y));
      }
      queries.push_back(std::move(q));
    }
  }
  return queries;
}

SynthesisResult baseline_no_partition(const Dataset& data, const Workload& workload,
                                      SynthesisConfig config) {
  config.partitioning = false;
  return synthesize(data, workload, config);
}

}  // namespace ppsyn
