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

// Attribute schema, integer-encoded datasets, cliques, and exact marginals.
//
// Cells of a marginal are indexed row-major over the clique's attributes in
// increasing attribute order: the last attribute varies fastest. The same
// layout is used for the full domain (the clique of every attribute), so a
// full-domain cell index decodes directly into a record.

#ifndef PPSYN_DOMAIN_HPP_
#define PPSYN_DOMAIN_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ppsyn {

struct Attribute {
  std::string name;
  std::size_t cardinality = 1;
  bool ordinal = false;
  // Value labels; position is the encoded value index. May be empty when the
  // attribute was declared by cardinality only.
  std::vector<std::string> values;
};

class DomainSpec {
 public:
  DomainSpec() = default;
  // Throws InvalidArgument on a zero cardinality or duplicate name.
  explicit DomainSpec(std::vector<Attribute> attributes);

  std::size_t size() const { return attributes_.size(); }
  const Attribute& attribute(std::size_t i) const { return attributes_.at(i); }
  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t cardinality(std::size_t i) const { return attributes_.at(i).cardinality; }

  // Index of the attribute called `name`; throws InvalidArgument if absent.
  std::size_t index_of(const std::string& name) const;

  // Product of all cardinalities, saturating at UINT64_MAX.
  std::uint64_t total_cells() const;

  bool operator==(const DomainSpec& other) const;

 private:
  std::vector<Attribute> attributes_;
};

// Convenience constructor for tests and generators: attributes named
// a0, a1, ... with the given cardinalities.
DomainSpec make_domain(std::span<const std::size_t> cardinalities);

using Row = std::vector<std::uint32_t>;

class Dataset {
 public:
  Dataset() = default;
  // Validates every row against the domain.
  Dataset(DomainSpec domain, std::vector<Row> rows);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<Row>& rows() const { return rows_; }
  std::size_t n() const { return rows_.size(); }

 private:
  DomainSpec domain_;
  std::vector<Row> rows_;
};

class Clique {
 public:
  Clique() = default;
  // `attrs` must be non-empty and strictly increasing, with every index inside
  // the domain; throws InvalidArgument otherwise.
  Clique(std::vector<std::size_t> attrs, const DomainSpec& domain);

  const std::vector<std::size_t>& attrs() const { return attrs_; }
  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t dims() const { return attrs_.size(); }
  std::size_t cell_count() const { return cell_count_; }

  // Row-major cell index of the projection of `row` onto this clique.
  std::size_t cell_of(std::span<const std::uint32_t> row) const;

  bool operator==(const Clique& other) const { return attrs_ == other.attrs_; }
  bool operator<(const Clique& other) const { return attrs_ < other.attrs_; }

 private:
  std::vector<std::size_t> attrs_;
  std::vector<std::size_t> shape_;
  std::size_t cell_count_ = 0;
};

// Human-readable "a,b,c" (attribute names).
std::string clique_label(const Clique& clique, const DomainSpec& domain);

// Exact, noisy, or model marginal over a clique. Counts are reals so the same
// type carries all three.
struct Marginal {
  Clique clique;
  std::vector<double> counts;

  double total() const;
};

Marginal compute_marginal(const Dataset& data, const Clique& clique);

// L1 distance between two marginals on the same clique.
double marginal_l1(const Marginal& a, const Marginal& b);

struct WorkloadEntry {
  Clique clique;
  double weight = 1.0;
};

struct Workload {
  std::vector<WorkloadEntry> entries;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

// Throws InvalidArgument on duplicate cliques or non-positive weights.
void validate_workload(const Workload& workload);

// Up to `count` distinct uniformly random cliques of `dims` attributes whose
// cell count does not exceed `max_cells`. When fewer than `count` qualifying
// cliques exist, all of them are returned. Deterministic in `seed`.
Workload generate_workload(const DomainSpec& domain, std::size_t dims,
                           std::size_t count, std::uint64_t max_cells,
                           std::uint64_t seed);

}  // namespace ppsyn

#endif  // PPSYN_DOMAIN_HPP_
