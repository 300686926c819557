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

#include "ppsyn/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_set>

#include "ppsyn/errors.hpp"
#include "ppsyn/rng.hpp"

namespace ppsyn {

DomainSpec::DomainSpec(std::vector<Attribute> attributes)
    : attributes_(std::move(attributes)) {
  std::unordered_set<std::string> names;
  for (const Attribute& a : attributes_) {
    if (a.cardinality == 0) {
      throw InvalidArgument("attribute '" + a.name + "' has cardinality 0");
    }
    if (!a.values.empty() && a.values.size() != a.cardinality) {
      throw InvalidArgument("attribute '" + a.name +
                            "' value list does not match its cardinality");
    }
    if (!names.insert(a.name).second) {
      throw InvalidArgument("duplicate attribute name '" + a.name + "'");
    }
  }
}

std::size_t DomainSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name == name) return i;
  }
  throw InvalidArgument("unknown attribute '" + name + "'");
}

std::uint64_t DomainSpec::total_cells() const {
  std::uint64_t total = 1;
  for (const Attribute& a : attributes_) {
    if (total > std::numeric_limits<std::uint64_t>::max() / a.cardinality) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= a.cardinality;
  }
  return total;
}

bool DomainSpec::operator==(const DomainSpec& other) const {
  if (attributes_.size() != other.attributes_.size()) return false;
  for (std::size_t i = 0; i < attributes_.size(); ++i) {
    const Attribute& a = attributes_[i];
    const Attribute& b = other.attributes_[i];
    if (a.name != b.name || a.cardinality != b.cardinality) return false;
  }
  return true;
}

DomainSpec make_domain(std::span<const std::size_t> cardinalities) {
  std::vector<Attribute> attrs;
  attrs.reserve(cardinalities.size());
  for (std::size_t i = 0; i < cardinalities.size(); ++i) {
    attrs.push_back({"a" + std::to_string(i), cardinalities[i], false, {}});
  }
  return DomainSpec(std::move(attrs));
}

Dataset::Dataset(DomainSpec domain, std::vector<Row> rows)
    : domain_(std::move(domain)), rows_(std::move(rows)) {
  const std::size_t d = domain_.size();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (rows_[r].size() != d) {
      throw InvalidArgument("row " + std::to_string(r) + " has " +
                            std::to_string(rows_[r].size()) +
                            " entries, expected " + std::to_string(d));
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (rows_[r][i] >= domain_.cardinality(i)) {
        throw InvalidArgument("row " + std::to_string(r) + " column '" +
                              domain_.attribute(i).name + "' value " +
                              std::to_string(rows_[r][i]) + " out of range");
      }
    }
  }
}

Clique::Clique(std::vector<std::size_t> attrs, const DomainSpec& domain)
    : attrs_(std::move(attrs)) {
  if (attrs_.empty()) throw InvalidArgument("clique must not be empty");
  cell_count_ = 1;
  for (std::size_t k = 0; k < attrs_.size(); ++k) {
    if (attrs_[k] >= domain.size()) {
      throw InvalidArgument("clique attribute index " +
                            std::to_string(attrs_[k]) + " out of range");
    }
    if (k > 0 && attrs_[k] <= attrs_[k - 1]) {
      throw InvalidArgument("clique attributes must be strictly increasing");
    }
    const std::size_t c = domain.cardinality(attrs_[k]);
    if (cell_count_ > std::numeric_limits<std::size_t>::max() / c) {
      throw InvalidArgument("clique cell count overflows");
    }
    shape_.push_back(c);
    cell_count_ *= c;
  }
}

std::size_t Clique::cell_of(std::span<const std::uint32_t> row) const {
  std::size_t cell = 0;
  for (std::size_t k = 0; k < attrs_.size(); ++k) {
    cell = cell * shape_[k] + row[attrs_[k]];
  }
  return cell;
}

std::string clique_label(const Clique& clique, const DomainSpec& domain) {
  std::string out;
  for (std::size_t a : clique.attrs()) {
    if (!out.empty()) out += ',';
    out += domain.attribute(a).name;
  }
  return out;
}

double Marginal::total() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

Marginal compute_marginal(const Dataset& data, const Clique& clique) {
  for (std::size_t a : clique.attrs()) {
    if (a >= data.domain().size()) {
      throw InvalidArgument("clique attribute index out of range");
    }
  }
  Marginal m{clique, std::vector<double>(clique.cell_count(), 0.0)};
  for (const Row& row : data.rows()) {
    m.counts[clique.cell_of(row)] += 1.0;
  }
  return m;
}

double marginal_l1(const Marginal& a, const Marginal& b) {
  if (!(a.clique == b.clique) || a.counts.size() != b.counts.size()) {
    throw InvalidArgument("marginal_l1: clique mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.counts.size(); ++i) {
    sum += std::abs(a.counts[i] - b.counts[i]);
  }
  return sum;
}

void validate_workload(const Workload& workload) {
  std::set<std::vector<std::size_t>> seen;
  for (const WorkloadEntry& e : workload.entries) {
    if (!(e.weight > 0.0)) {
      throw InvalidArgument("workload weights must be positive");
    }
    if (!seen.insert(e.clique.attrs()).second) {
      throw InvalidArgument("workload contains a duplicate clique");
    }
  }
}

namespace {

// Enumerating all subsets is exact but only affordable for moderate C(d, k).
constexpr double kMaxEnumeratedCliques = 2e6;

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

std::uint64_t cells_of(const std::vector<std::size_t>& attrs,
                       const DomainSpec& domain) {
  std::uint64_t cells = 1;
  for (std::size_t a : attrs) {
    const std::uint64_t c = domain.cardinality(a);
    if (cells > std::numeric_limits<std::uint64_t>::max() / c) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    cells *= c;
  }
  return cells;
}

}  // namespace

Workload generate_workload(const DomainSpec& domain, std::size_t dims,
                           std::size_t count, std::uint64_t max_cells,
                           std::uint64_t seed) {
  const std::size_t d = domain.size();
  if (dims == 0 || dims > d) {
    throw InvalidArgument("workload dims must be in [1, " + std::to_string(d) +
                          "]");
  }
  if (count == 0) throw InvalidArgument("workload count must be positive");
  Engine rng = make_stream(seed, 0, "workload");

  std::vector<std::vector<std::size_t>> chosen;
  if (binomial(d, dims) <= kMaxEnumeratedCliques) {
    std::vector<std::vector<std::size_t>> all;
    std::vector<std::size_t> idx(dims);
    std::iota(idx.begin(), idx.end(), 0);
    for (;;) {
      if (cells_of(idx, domain) <= max_cells) all.push_back(idx);
      // Next combination in lexicographic order.
      std::size_t k = dims;
      while (k > 0 && idx[k - 1] == d - dims + k - 1) --k;
      if (k == 0) break;
      ++idx[k - 1];
      for (std::size_t j = k; j < dims; ++j) idx[j] = idx[j - 1] + 1;
    }
    // Partial Fisher-Yates: a uniformly random ordered subset.
    const std::size_t take = std::min(count, all.size());
    for (std::size_t i = 0; i < take; ++i) {
      const std::size_t j = i + uniform_index(rng, all.size() - i);
      std::swap(all[i], all[j]);
    }
    all.resize(take);
    chosen = std::move(all);
  } else {
    std::set<std::vector<std::size_t>> seen;
    const std::size_t max_attempts = 1000 * count + 100000;
    std::vector<std::size_t> pool(d);
    for (std::size_t attempt = 0;
         attempt < max_attempts && chosen.size() < count; ++attempt) {
      std::iota(pool.begin(), pool.end(), 0);
      for (std::size_t i = 0; i < dims; ++i) {
        std::swap(pool[i], pool[i + uniform_index(rng, d - i)]);
      }
      std::vector<std::size_t> attrs(pool.begin(), pool.begin() + dims);
      std::sort(attrs.begin(), attrs.end());
      if (cells_of(attrs, domain) > max_cells) continue;
      if (seen.insert(attrs).second) chosen.push_back(std::move(attrs));
    }
  }
  if (chosen.empty()) {
    throw InvalidArgument("no " + std::to_string(dims) +
                          "-way clique satisfies max_cells=" +
                          std::to_string(max_cells));
  }
  Workload w;
  for (auto& attrs : chosen) {
    w.entries.push_back({Clique(std::move(attrs), domain), 1.0});
  }
  return w;
}

}  // namespace ppsyn
