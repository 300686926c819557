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

#include "ppsyn/partition.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

void check_contr_eta(double contr, double eta) {
  if (!(contr > 0.0) || !std::isfinite(contr)) {
    throw InvalidArgument("contribution must be positive");
  }
  if (!(eta > 0.0 && eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
}

// sum_i |S - k q_i| / k over `values`, where S is their sum and k their
// count. For integer counts every term is an exact integer, so results are
// reproducible bit for bit regardless of summation route.
double spread(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double k = static_cast<double>(values.size());
  const double s = std::accumulate(values.begin(), values.end(), 0.0);
  double num = 0.0;
  for (double q : values) num += std::abs(s - k * q);
  return num / k;
}

// Cell counts in ascending order with prefix sums; RE of any contiguous run
// in O(log n).
class SortedRuns {
 public:
  explicit SortedRuns(const Marginal& m) {
    perm_.resize(m.counts.size());
    std::iota(perm_.begin(), perm_.end(), 0);
    std::stable_sort(perm_.begin(), perm_.end(),
                     [&](std::size_t a, std::size_t b) {
                       return m.counts[a] < m.counts[b];
                     });
    sorted_.reserve(perm_.size());
    prefix_.assign(1, 0.0);
    for (std::size_t c : perm_) {
      sorted_.push_back(m.counts[c]);
      prefix_.push_back(prefix_.back() + m.counts[c]);
    }
  }

  const std::vector<std::size_t>& perm() const { return perm_; }
  std::size_t size() const { return sorted_.size(); }

  // RE of the run [a, b) in sorted order.
  double run_re(std::size_t a, std::size_t b) const {
    const double k = static_cast<double>(b - a);
    const double s = prefix_[b] - prefix_[a];
    // First position whose value reaches the run mean.
    const auto first = sorted_.begin() + static_cast<std::ptrdiff_t>(a);
    const auto last = sorted_.begin() + static_cast<std::ptrdiff_t>(b);
    const std::size_t j = static_cast<std::size_t>(
        std::partition_point(first, last,
                             [&](double q) { return k * q < s; }) -
        sorted_.begin());
    const double below = s * static_cast<double>(j - a) - k * (prefix_[j] - prefix_[a]);
    const double above = k * (prefix_[b] - prefix_[j]) - s * static_cast<double>(b - j);
    return (below + above) / k;
  }

  double merge_delta(std::size_t a, std::size_t mid, std::size_t b) const {
    return run_re(a, b) - run_re(a, mid) - run_re(mid, b);
  }

  // RE of the partition whose runs start at `starts`.
  double total_re(const std::vector<std::size_t>& starts) const {
    double re = 0.0;
    for (std::size_t r = 0; r < starts.size(); ++r) {
      const std::size_t end = r + 1 < starts.size() ? starts[r + 1] : size();
      re += run_re(starts[r], end);
    }
    return re;
  }

 private:
  std::vector<std::size_t> perm_;
  std::vector<double> sorted_;
  std::vector<double> prefix_;
};

// Index of the greedy merge: lowest run u whose merge delta ties the minimum.
std::size_t choose_merge(const SortedRuns& runs,
                         const std::vector<std::size_t>& starts) {
  const std::size_t pairs = starts.size() - 1;
  std::vector<double> delta(pairs);
  for (std::size_t u = 0; u < pairs; ++u) {
    const std::size_t end = u + 2 < starts.size() ? starts[u + 2] : runs.size();
    delta[u] = runs.merge_delta(starts[u], starts[u + 1], end);
  }
  const double best = *std::min_element(delta.begin(), delta.end());
  for (std::size_t u = 0; u < pairs; ++u) {
    if (detail::tied(delta[u], best)) return u;
  }
  return 0;
}

std::vector<std::size_t> iota_vector(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Calls fn(cell) for every cell of `box`, in row-major order.
template <typename Fn>
void for_each_cell(const std::vector<std::size_t>& shape, const Box& box, Fn&& fn) {
  const std::size_t d = shape.size();
  for (std::size_t k = 0; k < d; ++k) {
    if (box.lo[k] >= box.hi[k]) return;
  }
  std::vector<std::size_t> idx = box.lo;
  for (;;) {
    std::size_t cell = 0;
    for (std::size_t k = 0; k < d; ++k) cell = cell * shape[k] + idx[k];
    fn(cell);
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < box.hi[k]) break;
      idx[k] = box.lo[k];
      if (k == 0) return;
    }
  }
}

Box whole_box(const Clique& clique) {
  Box b;
  b.lo.assign(clique.dims(), 0);
  b.hi = clique.shape();
  return b;
}

void check_same_clique(const Marginal& m, const Partition& p) {
  if (!(m.clique == p.clique()) || m.counts.size() != p.interval_of().size()) {
    throw InvalidArgument("partition does not cover the marginal's cells");
  }
}

}  // namespace

std::size_t Box::cell_count() const {
  std::size_t n = 1;
  for (std::size_t k = 0; k < lo.size(); ++k) n *= hi[k] - lo[k];
  return n;
}

void Partition::index_cells() {
  const std::size_t n = clique_.cell_count();
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  interval_of_.assign(n, kUnset);
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (intervals_[i].empty()) throw InvalidArgument("partition has an empty interval");
    for (std::size_t c : intervals_[i]) {
      if (c >= n) throw InvalidArgument("partition cell index out of range");
      if (interval_of_[c] != kUnset) {
        throw InvalidArgument("partition intervals overlap");
      }
      interval_of_[c] = i;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (interval_of_[c] == kUnset) {
      throw InvalidArgument("partition does not cover every cell");
    }
  }
}

Partition Partition::one_dim(Clique clique, std::vector<std::size_t> perm,
                             std::vector<std::size_t> starts) {
  if (perm.size() != clique.cell_count()) {
    throw InvalidArgument("permutation length does not match the clique");
  }
  if (starts.empty() || starts.front() != 0) {
    throw InvalidArgument("first run must start at position 0");
  }
  Partition p;
  p.clique_ = std::move(clique);
  p.kind_ = PartitionKind::kOneDim;
  for (std::size_t r = 0; r < starts.size(); ++r) {
    const std::size_t end = r + 1 < starts.size() ? starts[r + 1] : perm.size();
    if (starts[r] >= end) throw InvalidArgument("run starts must increase");
    p.intervals_.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(starts[r]),
                              perm.begin() + static_cast<std::ptrdiff_t>(end));
  }
  p.perm_ = std::move(perm);
  p.starts_ = std::move(starts);
  p.index_cells();
  return p;
}

Partition Partition::multi_dim(Clique clique, std::vector<Box> boxes) {
  Partition p;
  p.clique_ = std::move(clique);
  p.kind_ = PartitionKind::kMultiDim;
  const auto& shape = p.clique_.shape();
  for (const Box& b : boxes) {
    if (b.lo.size() != shape.size() || b.hi.size() != shape.size()) {
      throw InvalidArgument("box dimensionality does not match the clique");
    }
    for (std::size_t k = 0; k < shape.size(); ++k) {
      if (b.lo[k] >= b.hi[k] || b.hi[k] > shape[k]) {
        throw InvalidArgument("box bounds out of range");
      }
    }
    std::vector<std::size_t> cells;
    cells.reserve(b.cell_count());
    for_each_cell(shape, b, [&](std::size_t c) { cells.push_back(c); });
    p.intervals_.push_back(std::move(cells));
  }
  p.boxes_ = std::move(boxes);
  p.index_cells();
  return p;
}

Partition Partition::singletons(const Clique& clique) {
  const std::size_t n = clique.cell_count();
  if (clique.dims() == 1) return one_dim(clique, iota_vector(n), iota_vector(n));
  std::vector<Box> boxes;
  boxes.reserve(n);
  const auto& shape = clique.shape();
  for (std::size_t cell = 0; cell < n; ++cell) {
    Box b;
    b.lo.resize(shape.size());
    std::size_t rest = cell;
    for (std::size_t k = shape.size(); k-- > 0;) {
      b.lo[k] = rest % shape[k];
      rest /= shape[k];
    }
    b.hi = b.lo;
    for (auto& h : b.hi) ++h;
    boxes.push_back(std::move(b));
  }
  return multi_dim(clique, std::move(boxes));
}

double reconstruction_error(const Marginal& m, const Partition& p) {
  check_same_clique(m, p);
  double re = 0.0;
  std::vector<double> values;
  for (const auto& interval : p.intervals()) {
    values.clear();
    for (std::size_t c : interval) values.push_back(m.counts[c]);
    re += spread(values);
  }
  return re;
}

double required_rho(std::size_t p_size, double contr, double eta, double re) {
  if (!(contr > 0.0)) throw InvalidArgument("contribution must be positive");
  const double slack = eta * contr - re;
  if (!(slack > 0.0)) return kInfiniteRho;
  const double size = static_cast<double>(p_size);
  return size * size / (std::numbers::pi * slack * slack);
}

double merge_error(const Marginal& m, const Partition& p, std::size_t u) {
  check_same_clique(m, p);
  if (p.kind() != PartitionKind::kOneDim) {
    throw InvalidArgument("merge_error needs a one-dim partition");
  }
  if (u + 1 >= p.size()) throw InvalidArgument("merge index out of range");
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t c : p.intervals()[u]) a.push_back(m.counts[c]);
  for (std::size_t c : p.intervals()[u + 1]) b.push_back(m.counts[c]);
  std::vector<double> merged = a;
  merged.insert(merged.end(), b.begin(), b.end());
  return spread(merged) - spread(a) - spread(b);
}

std::vector<double> interval_sums(const Marginal& m, const Partition& p) {
  check_same_clique(m, p);
  std::vector<double> sums(p.size(), 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t c : p.intervals()[i]) sums[i] += m.counts[c];
  }
  return sums;
}

Marginal expand_uniform(std::span<const double> sums, const Partition& p) {
  if (sums.size() != p.size()) {
    throw InvalidArgument("expand_uniform: need one sum per interval");
  }
  Marginal out{p.clique(), std::vector<double>(p.clique().cell_count(), 0.0)};
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double share = sums[i] / static_cast<double>(p.interval_size(i));
    for (std::size_t c : p.intervals()[i]) out.counts[c] = share;
  }
  return out;
}

PartitionResult partition_1d(const Marginal& m, double contr, double eta) {
  if (m.clique.dims() != 1) throw InvalidArgument("partition_1d needs a 1-way marginal");
  check_contr_eta(contr, eta);
  const SortedRuns runs(m);
  std::vector<std::size_t> starts = iota_vector(runs.size());
  double re = 0.0;
  double rho = required_rho(starts.size(), contr, eta, re);
  while (starts.size() > 1) {
    const std::size_t u = choose_merge(runs, starts);
    std::vector<std::size_t> next = starts;
    next.erase(next.begin() + static_cast<std::ptrdiff_t>(u + 1));
    const double next_re = runs.total_re(next);
    const double next_rho = required_rho(next.size(), contr, eta, next_re);
    if (next_rho > rho) break;
    starts = std::move(next);
    re = next_re;
    rho = next_rho;
  }
  return {Partition::one_dim(m.clique, runs.perm(), std::move(starts)), rho, re};
}

MergeSequence::MergeSequence(const Marginal& m) : clique_(m.clique) {
  if (m.clique.dims() != 1) throw InvalidArgument("MergeSequence needs a 1-way marginal");
  const SortedRuns runs(m);
  perm_ = runs.perm();
  std::vector<std::size_t> starts = iota_vector(runs.size());
  re_.push_back(0.0);
  while (starts.size() > 1) {
    const std::size_t u = choose_merge(runs, starts);
    starts.erase(starts.begin() + static_cast<std::ptrdiff_t>(u + 1));
    merged_at_.push_back(u);
    re_.push_back(runs.total_re(starts));
  }
}

Partition MergeSequence::partition_at(std::size_t t) const {
  if (t > steps()) throw InvalidArgument("merge step out of range");
  std::vector<std::size_t> starts = iota_vector(cells());
  for (std::size_t s = 0; s < t; ++s) {
    starts.erase(starts.begin() + static_cast<std::ptrdiff_t>(merged_at_[s] + 1));
  }
  return Partition::one_dim(clique_, perm_, std::move(starts));
}

PartitionResult partition_1d(const MergeSequence& seq, double contr, double eta) {
  check_contr_eta(contr, eta);
  std::size_t t = 0;
  double rho = required_rho(seq.cells(), contr, eta, seq.re()[0]);
  while (t < seq.steps()) {
    const double next_rho =
        required_rho(seq.cells() - (t + 1), contr, eta, seq.re()[t + 1]);
    if (next_rho > rho) break;
    ++t;
    rho = next_rho;
  }
  return {seq.partition_at(t), rho, seq.re()[t]};
}

namespace detail {

double box_re(const Marginal& m, const Box& box) {
  std::vector<double> values;
  values.reserve(box.cell_count());
  for_each_cell(m.clique.shape(), box,
                [&](std::size_t c) { values.push_back(m.counts[c]); });
  return spread(values);
}

std::optional<std::pair<std::size_t, double>> best_cut(const Marginal& m,
                                                       const Box& box,
                                                       std::size_t dim) {
  const std::size_t extent = box.extent(dim);
  if (extent < 2) return std::nullopt;
  // Gather the box's values slab by slab along `dim`.
  const auto& shape = m.clique.shape();
  std::vector<std::vector<double>> slabs(extent);
  for (std::size_t s = 0; s < extent; ++s) {
    Box slab = box;
    slab.lo[dim] = box.lo[dim] + s;
    slab.hi[dim] = slab.lo[dim] + 1;
    for_each_cell(shape, slab,
                  [&](std::size_t c) { slabs[s].push_back(m.counts[c]); });
  }
  std::vector<double> all;
  for (const auto& s : slabs) all.insert(all.end(), s.begin(), s.end());
  const double whole = spread(all);

  std::vector<double> reduction(extent - 1);
  std::vector<double> left;
  for (std::size_t c = 1; c < extent; ++c) {
    left.insert(left.end(), slabs[c - 1].begin(), slabs[c - 1].end());
    const std::span<const double> right(all.data() + left.size(),
                                        all.size() - left.size());
    reduction[c - 1] = whole - spread(left) - spread(right);
  }
  const double best = *std::max_element(reduction.begin(), reduction.end());
  for (std::size_t c = 0; c < reduction.size(); ++c) {
    if (tied(reduction[c], best)) {
      return std::make_pair(box.lo[dim] + c + 1, reduction[c]);
    }
  }
  return std::nullopt;
}

}  // namespace detail

SplitSequence::SplitSequence(const Marginal& m) : marginal_(m) {
  if (m.clique.dims() < 2) throw InvalidArgument("SplitSequence needs a multi-way marginal");
  boxes_.push_back(whole_box(m.clique));
  box_re_.push_back(detail::box_re(m, boxes_.front()));
  re_.push_back(box_re_.front());
}

bool SplitSequence::ensure(std::size_t t) {
  const std::size_t d = marginal_.clique.dims();
  while (steps_.size() < t) {
    if (exhausted_) return false;
    // Boxes by descending RE, lowest index first among equals.
    std::vector<std::size_t> order = iota_vector(boxes_.size());
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return box_re_[a] > box_re_[b];
    });
    bool split = false;
    const std::size_t base = steps_.size() % d;
    for (std::size_t off = 0; off < d && !split; ++off) {
      const std::size_t dim = (base + off) % d;
      for (std::size_t b : order) {
        auto cut = detail::best_cut(marginal_, boxes_[b], dim);
        if (!cut) continue;
        Box upper = boxes_[b];
        upper.lo[dim] = cut->first;
        boxes_[b].hi[dim] = cut->first;
        box_re_[b] = detail::box_re(marginal_, boxes_[b]);
        boxes_.push_back(std::move(upper));
        box_re_.push_back(detail::box_re(marginal_, boxes_.back()));
        steps_.push_back({b, dim, cut->first});
        re_.push_back(std::accumulate(box_re_.begin(), box_re_.end(), 0.0));
        split = true;
        break;
      }
    }
    if (!split) {
      exhausted_ = true;
      return false;
    }
  }
  return true;
}

Partition SplitSequence::partition_at(std::size_t t) const {
  if (t > steps_.size()) throw InvalidArgument("split step out of range");
  std::vector<Box> boxes{whole_box(marginal_.clique)};
  for (std::size_t s = 0; s < t; ++s) {
    const Step& st = steps_[s];
    Box upper = boxes[st.box];
    upper.lo[st.dim] = st.cut;
    boxes[st.box].hi[st.dim] = st.cut;
    boxes.push_back(std::move(upper));
  }
  return Partition::multi_dim(marginal_.clique, std::move(boxes));
}

PartitionResult partition_md(SplitSequence& seq, double contr, double eta) {
  check_contr_eta(contr, eta);
  std::size_t t = 0;
  double rho = required_rho(1, contr, eta, seq.re(0));
  while (seq.ensure(t + 1)) {
    const double next_rho = required_rho(t + 2, contr, eta, seq.re(t + 1));
    // Only a finite-to-finite increase stops the search; while RE exceeds the
    // error target the required budget is infinite and splitting continues.
    if (std::isfinite(next_rho) && next_rho > rho) break;
    ++t;
    rho = next_rho;
  }
  return {seq.partition_at(t), rho, seq.re(t)};
}

PartitionResult partition_md(const Marginal& m, double contr, double eta) {
  if (m.clique.dims() < 2) throw InvalidArgument("partition_md needs a multi-way marginal");
  check_contr_eta(contr, eta);
  SplitSequence seq(m);
  return partition_md(seq, contr, eta);
}

PartitionResult partition_marginal(const Marginal& m, double contr, double eta) {
  return m.clique.dims() == 1 ? partition_1d(m, contr, eta)
                              : partition_md(m, contr, eta);
}

}  // namespace ppsyn
