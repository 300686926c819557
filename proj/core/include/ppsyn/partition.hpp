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

// Adaptive partitioning of a marginal's cells.
//
// Measuring a marginal through a partition adds one Gaussian draw per
// interval instead of one per cell and spreads each noisy interval sum
// uniformly over its cells. Fewer intervals mean less noise error but more
// reconstruction error (RE), the L1 gap between the true counts and their
// interval averages. For a target total error eta * contr the budget that
// makes the expected noise error |P| / sqrt(pi rho) fill exactly the slack
// left by RE is
//
//     rho = |P|^2 / (pi (eta * contr - RE)^2),
//
// and the partitioners below search for the partition minimizing it:
//
//   * one attribute: sort cells by count, start from singletons and greedily
//     merge the adjacent pair whose merge raises RE the least;
//   * several attributes: start from the whole grid as one box and greedily
//     cut boxes along the dimensions in round-robin order.
//
// Both stop the first time the required budget increases. All structure is
// derived from the true counts.

#ifndef PPSYN_PARTITION_HPP_
#define PPSYN_PARTITION_HPP_

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ppsyn/domain.hpp"

namespace ppsyn {

inline constexpr double kInfiniteRho = std::numeric_limits<double>::infinity();

enum class PartitionKind { kOneDim, kMultiDim };

// Axis-aligned box over a clique's grid: half-open [lo[k], hi[k]) per
// dimension k.
struct Box {
  std::vector<std::size_t> lo;
  std::vector<std::size_t> hi;

  std::size_t extent(std::size_t dim) const { return hi[dim] - lo[dim]; }
  std::size_t cell_count() const;
  bool operator==(const Box&) const = default;
};

// Disjoint cover of a clique's cells. `intervals` lists the member cells of
// each interval; for one-dim partitions they are runs of `perm`, for
// multi-dim partitions the cells of the matching entry in `boxes`.
class Partition {
 public:
  // One-dim partition: `perm` lists cells in ascending count order and
  // `starts` are the first perm positions of each run (starts[0] == 0).
  static Partition one_dim(Clique clique, std::vector<std::size_t> perm,
                           std::vector<std::size_t> starts);
  static Partition multi_dim(Clique clique, std::vector<Box> boxes);
  // Every cell its own interval (the unpartitioned measurement).
  static Partition singletons(const Clique& clique);

  const Clique& clique() const { return clique_; }
  PartitionKind kind() const { return kind_; }
  std::size_t size() const { return intervals_.size(); }
  const std::vector<std::vector<std::size_t>>& intervals() const { return intervals_; }
  const std::vector<std::size_t>& perm() const { return perm_; }
  const std::vector<std::size_t>& starts() const { return starts_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  // interval_of()[cell] is the interval containing `cell`.
  const std::vector<std::size_t>& interval_of() const { return interval_of_; }
  std::size_t interval_size(std::size_t i) const { return intervals_[i].size(); }

 private:
  Partition() = default;
  void index_cells();

  Clique clique_;
  PartitionKind kind_ = PartitionKind::kOneDim;
  std::vector<std::vector<std::size_t>> intervals_;
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> starts_;
  std::vector<Box> boxes_;
  std::vector<std::size_t> interval_of_;
};

struct PartitionResult {
  Partition partition;
  double rho = kInfiniteRho;
  double re = 0.0;
};

// Sum over intervals of sum_{i in I} |q(I)/|I| - q(i)|.
double reconstruction_error(const Marginal& m, const Partition& p);

// |P|^2 / (pi (eta*contr - re)^2), or kInfiniteRho when re >= eta*contr.
double required_rho(std::size_t p_size, double contr, double eta, double re);

// RE change from merging one-dim intervals u and u+1 (perm order). Zero for
// equal-valued runs; not guaranteed non-negative once runs hold several cells,
// because interval averages are means rather than medians.
double merge_error(const Marginal& m, const Partition& p, std::size_t u);

// Exact per-interval sums q(I).
std::vector<double> interval_sums(const Marginal& m, const Partition& p);

// Spreads each (noisy) interval sum evenly over the interval's cells, in the
// original cell order. Negative values pass through.
Marginal expand_uniform(std::span<const double> sums, const Partition& p);

PartitionResult partition_1d(const Marginal& m, double contr, double eta);
PartitionResult partition_md(const Marginal& m, double contr, double eta);

// Picks partition_1d or partition_md by the clique's dimensionality.
PartitionResult partition_marginal(const Marginal& m, double contr, double eta);

// Precomputed greedy merge trajectory of a one-attribute marginal. Step t
// (1-based) merges run `merged_at[t-1]` with its right neighbour; `re[t]` is
// the RE after t merges. Independent of contr and eta.
class MergeSequence {
 public:
  explicit MergeSequence(const Marginal& m);

  std::size_t cells() const { return perm_.size(); }
  std::size_t steps() const { return merged_at_.size(); }
  const std::vector<std::size_t>& perm() const { return perm_; }
  const std::vector<std::size_t>& merged_at() const { return merged_at_; }
  const std::vector<double>& re() const { return re_; }

  // Partition after t merges.
  Partition partition_at(std::size_t t) const;

 private:
  Clique clique_;
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> merged_at_;
  std::vector<double> re_;
};

// Greedy split trajectory of a multi-attribute marginal, extended on demand.
// State t has t + 1 boxes; re(t) is its RE.
class SplitSequence {
 public:
  explicit SplitSequence(const Marginal& m);

  struct Step {
    std::size_t box = 0;  // index of the box that was cut
    std::size_t dim = 0;
    std::size_t cut = 0;  // absolute index of the first cell of the upper half
  };

  // Extends to at least t splits; false if the grid cannot be cut that often.
  bool ensure(std::size_t t);
  std::size_t computed() const { return steps_.size(); }
  double re(std::size_t t) const { return re_.at(t); }
  const std::vector<Step>& steps() const { return steps_; }
  Partition partition_at(std::size_t t) const;

 private:
  Marginal marginal_;
  std::vector<Step> steps_;
  std::vector<double> re_;
  // Current boxes and their RE after computed() splits.
  std::vector<Box> boxes_;
  std::vector<double> box_re_;
  bool exhausted_ = false;
};

// Stopping rule over cached trajectories; identical results to the uncached
// partitioners.
PartitionResult partition_1d(const MergeSequence& seq, double contr, double eta);
PartitionResult partition_md(SplitSequence& seq, double contr, double eta);

// Building blocks exposed for step-level checks.
namespace detail {

// RE of one box of `m`.
double box_re(const Marginal& m, const Box& box);

// Best cut for `box` along `dim`: (cut, RE reduction). Lowest cut position wins
// ties. nullopt if the box has extent 1 along `dim`.
std::optional<std::pair<std::size_t, double>> best_cut(const Marginal& m,
                                                       const Box& box,
                                                       std::size_t dim);

// Greedy candidates whose scores differ by less than this (relative) are
// tied; the lowest index among them wins.
inline constexpr double kTieTolerance = 1e-9;
inline bool tied(double value, double best) {
  return std::abs(value - best) <= kTieTolerance * (1.0 + std::abs(best));
}

}  // namespace detail

}  // namespace ppsyn

#endif  // PPSYN_PARTITION_HPP_
