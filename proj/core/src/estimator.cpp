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

#include "ppsyn/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

void check_cap(const DomainSpec& domain, std::uint64_t cap) {
  const std::uint64_t cells = domain.total_cells();
  if (cells > cap) {
    throw CapacityError("full domain has " + std::to_string(cells) +
                        " cells, above the cap of " + std::to_string(cap));
  }
}

// Full-domain cell -> clique cell, row-major on both sides.
std::vector<std::uint32_t> build_cell_map(const DomainSpec& domain, const Clique& clique) {
  const std::size_t d = domain.size();
  std::size_t cells = 1;
  for (std::size_t a = 0; a < d; ++a) cells *= domain.cardinality(a);
  // Stride of each attribute inside the clique's row-major layout (0 if the
  // attribute is not in the clique).
  std::vector<std::size_t> stride(d, 0);
  std::size_t s = 1;
  for (std::size_t k = clique.dims(); k-- > 0;) {
    stride[clique.attrs()[k]] = s;
    s *= clique.shape()[k];
  }
  std::vector<std::uint32_t> map(cells);
  std::vector<std::size_t> idx(d, 0);
  std::size_t target = 0;
  for (std::size_t cell = 0; cell < cells; ++cell) {
    map[cell] = static_cast<std::uint32_t>(target);
    for (std::size_t a = d; a-- > 0;) {
      ++idx[a];
      target += stride[a];
      if (idx[a] < domain.cardinality(a)) break;
      target -= stride[a] * idx[a];
      idx[a] = 0;
    }
  }
  return map;
}

double measurement_weight(double sigma, WeightMode mode) {
  return mode == WeightMode::kInverseSigma ? 1.0 / sigma : 1.0 / (sigma * sigma);
}

}  // namespace

const char* to_string(WeightMode mode) {
  return mode == WeightMode::kInverseSigma ? "inverse_sigma" : "inverse_variance";
}

DistributionModel::DistributionModel(DomainSpec domain, std::vector<double> p_hat)
    : domain_(std::move(domain)), p_hat_(std::move(p_hat)) {
  if (p_hat_.size() != domain_.total_cells()) {
    throw InvalidArgument("p_hat length does not match the domain");
  }
  for (double x : p_hat_) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw InvalidArgument("p_hat entries must be finite and non-negative");
    }
  }
}

DistributionModel DistributionModel::uniform(const DomainSpec& domain, double n,
                                             std::uint64_t domain_cap) {
  check_cap(domain, domain_cap);
  const std::size_t cells = domain.total_cells();
  return DistributionModel(domain,
                           std::vector<double>(cells, n / static_cast<double>(cells)));
}

double DistributionModel::mass() const {
  return std::accumulate(p_hat_.begin(), p_hat_.end(), 0.0);
}

Objective::Objective(const DomainSpec& domain,
                     std::span<const NoisyMeasurement> measurements, WeightMode weights)
    : cells_(domain.total_cells()) {
  std::map<std::vector<std::size_t>, std::vector<const NoisyMeasurement*>> by_clique;
  for (const NoisyMeasurement& m : measurements) {
    if (m.values.size() != m.clique.cell_count()) {
      throw InvalidArgument("measurement length does not match its clique");
    }
    if (!(m.sigma > 0.0)) throw InvalidArgument("measurement sigma must be positive");
    for (std::size_t a : m.clique.attrs()) {
      if (a >= domain.size()) throw InvalidArgument("measurement clique outside domain");
    }
    by_clique[m.clique.attrs()].push_back(&m);
  }
  for (const auto& [attrs, list] : by_clique) {
    Group g;
    const Clique& clique = list.front()->clique;
    g.clique_cells = clique.cell_count();
    g.cell_map = build_cell_map(domain, clique);
    g.target.assign(g.clique_cells, 0.0);
    for (const NoisyMeasurement* m : list) {
      const double w = measurement_weight(m->sigma, weights);
      g.weight += w;
      for (std::size_t c = 0; c < g.clique_cells; ++c) g.target[c] += w * m->values[c];
    }
    for (double& t : g.target) t /= g.weight;
    // sum_i w_i ||y_i - ybar||^2: what the pooled form drops.
    for (const NoisyMeasurement* m : list) {
      const double w = measurement_weight(m->sigma, weights);
      for (std::size_t c = 0; c < g.clique_cells; ++c) {
        const double r = m->values[c] - g.target[c];
        constant_ += w * r * r;
      }
    }
    groups_.push_back(std::move(g));
  }
}

void Objective::project(const Group& g, std::span<const double> p,
                        std::vector<double>& out) const {
  out.assign(g.clique_cells, 0.0);
  for (std::size_t x = 0; x < cells_; ++x) out[g.cell_map[x]] += p[x];
}

double Objective::value(std::span<const double> p) const {
  double total = constant_;
  std::vector<double> proj;
  for (const Group& g : groups_) {
    project(g, p, proj);
    double sq = 0.0;
    for (std::size_t c = 0; c < g.clique_cells; ++c) {
      const double r = proj[c] - g.target[c];
      sq += r * r;
    }
    total += g.weight * sq;
  }
  return total;
}

double Objective::value_and_gradient(std::span<const double> p,
                                     std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  double total = constant_;
  std::vector<double> proj;
  for (const Group& g : groups_) {
    project(g, p, proj);
    double sq = 0.0;
    for (std::size_t c = 0; c < g.clique_cells; ++c) {
      const double r = proj[c] - g.target[c];
      sq += r * r;
      proj[c] = 2.0 * g.weight * r;  // reuse as the scattered residual
    }
    total += g.weight * sq;
    for (std::size_t x = 0; x < cells_; ++x) grad[x] += proj[g.cell_map[x]];
  }
  return total;
}

DistributionModel fit(const DomainSpec& domain,
                      std::span<const NoisyMeasurement> measurements, double n,
                      const DistributionModel* prev, const FitOptions& options,
                      FitStats* stats) {
  check_cap(domain, options.domain_cap);
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("record count must be positive");
  const Objective objective(domain, measurements, options.weights);
  const std::size_t cells = objective.domain_cells();

  std::vector<double> p;
  if (prev != nullptr && prev->domain() == domain && prev->mass() > 0.0) {
    p = prev->p_hat();
    const double scale = n / prev->mass();
    for (double& x : p) x *= scale;
  } else {
    p.assign(cells, n / static_cast<double>(cells));
  }

  std::vector<double> grad(cells);
  std::vector<double> trial(cells);
  double f = objective.value_and_gradient(p, grad);
  FitStats local;
  local.initial_objective = f;

  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    if (f <= 0.0) {
      local.converged = true;
      break;
    }
    const double g_min = *std::min_element(grad.begin(), grad.end());
    double alpha = options.initial_step;
    double f_trial = f;
    bool accepted = false;
    while (alpha > 1e-30) {
      double mass = 0.0;
      for (std::size_t x = 0; x < cells; ++x) {
        trial[x] = p[x] * std::exp(-alpha * (grad[x] - g_min));
        mass += trial[x];
      }
      if (mass > 0.0 && std::isfinite(mass)) {
        const double scale = n / mass;
        double descent = 0.0;
        for (std::size_t x = 0; x < cells; ++x) {
          trial[x] *= scale;
          descent += grad[x] * (trial[x] - p[x]);
        }
        f_trial = objective.value(trial);
        ++local.evaluations;
        if (f_trial <= f + options.armijo * descent) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      local.converged = true;  // no step makes progress
      break;
    }
    const double improvement = (f - f_trial) / f;
    p.swap(trial);
    local.iterations = it + 1;
    f = objective.value_and_gradient(p, grad);
    if (improvement < options.tolerance) {
      local.converged = true;
      break;
    }
  }
  local.objective = f;
  if (stats != nullptr) *stats = local;
  return DistributionModel(domain, std::move(p));
}

Marginal model_marginal(const DistributionModel& model, const Clique& clique) {
  for (std::size_t a : clique.attrs()) {
    if (a >= model.domain().size()) throw InvalidArgument("clique outside model domain");
  }
  const auto map = build_cell_map(model.domain(), clique);
  Marginal m{clique, std::vector<double>(clique.cell_count(), 0.0)};
  const auto& p = model.p_hat();
  for (std::size_t x = 0; x < p.size(); ++x) m.counts[map[x]] += p[x];
  return m;
}

Dataset sample(const DistributionModel& model, std::size_t count, Engine& rng) {
  const auto& p = model.p_hat();
  std::vector<double> cumulative(p.size());
  double total = 0.0;
  for (std::size_t x = 0; x < p.size(); ++x) {
    total += p[x];
    cumulative[x] = total;
  }
  if (!(total > 0.0)) throw InvalidArgument("cannot sample from an all-zero model");

  const DomainSpec& domain = model.domain();
  const std::size_t d = domain.size();
  std::vector<Row> rows;
  rows.reserve(count);
  for (std::size_t r = 0; r < count; ++r) {
    const double u = uniform01(rng) * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    // Never land on a zero-mass cell at the top end.
    while (it == cumulative.end() || p[static_cast<std::size_t>(it - cumulative.begin())] == 0.0) {
      if (it == cumulative.begin()) break;
      --it;
    }
    std::size_t cell = static_cast<std::size_t>(it - cumulative.begin());
    Row row(d);
    for (std::size_t a = d; a-- > 0;) {
      row[a] = static_cast<std::uint32_t>(cell % domain.cardinality(a));
      cell /= domain.cardinality(a);
    }
    rows.push_back(std::move(row));
  }
  return Dataset(domain, std::move(rows));
}

nlohmann::json model_to_json(const DistributionModel& model) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const Attribute& a : model.domain().attributes()) {
    attrs.push_back({{"name", a.name}, {"cardinality", a.cardinality}});
  }
  return {{"layout", "row-major, last attribute fastest"},
          {"attributes", attrs},
          {"mass", model.mass()},
          {"p_hat", model.p_hat()}};
}

}  // namespace ppsyn
