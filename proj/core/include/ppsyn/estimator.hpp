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

// Dense full-domain distribution fitted to noisy marginal measurements.
//
// The fit minimizes
//
//     L(p) = sum_i w_i || M_i p - y_i ||_2^2,   p >= 0,  sum(p) = n,
//
// where M_i projects onto measurement i's clique and w_i = 1/sigma_i (or
// 1/sigma_i^2 in inverse-variance mode). It runs entropic mirror descent:
// p <- p * exp(-alpha * grad L(p)), rescaled to mass n, with alpha found by
// halving from a fixed start until the Armijo condition holds.

#ifndef PPSYN_ESTIMATOR_HPP_
#define PPSYN_ESTIMATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "nlohmann/json.hpp"
#include "ppsyn/domain.hpp"
#include "ppsyn/rng.hpp"

namespace ppsyn {

struct NoisyMeasurement {
  Clique clique;
  std::vector<double> values;  // per-cell estimates, row-major over clique
  double sigma = 1.0;          // noise scale of each measured interval sum
  // Size of the interval each cell was measured in; all ones when the
  // marginal was measured cell by cell.
  std::vector<std::size_t> interval_sizes;
};

enum class WeightMode { kInverseSigma, kInverseVariance };

const char* to_string(WeightMode mode);

inline constexpr std::uint64_t kDefaultDomainCap = std::uint64_t{1} << 20;

struct FitOptions {
  std::size_t max_iterations = 2500;
  double tolerance = 1e-8;  // relative objective improvement
  double initial_step = 1.0;
  double armijo = 1e-4;
  WeightMode weights = WeightMode::kInverseSigma;
  std::uint64_t domain_cap = kDefaultDomainCap;
};

struct FitStats {
  std::size_t iterations = 0;
  std::size_t evaluations = 0;  // objective evaluations, line search included
  double initial_objective = 0.0;
  double objective = 0.0;
  bool converged = false;
};

class DistributionModel {
 public:
  DistributionModel() = default;
  DistributionModel(DomainSpec domain, std::vector<double> p_hat);

  // Uniform distribution of total mass `n`.
  static DistributionModel uniform(const DomainSpec& domain, double n,
                                   std::uint64_t domain_cap = kDefaultDomainCap);

  const DomainSpec& domain() const { return domain_; }
  const std::vector<double>& p_hat() const { return p_hat_; }
  double mass() const;

 private:
  DomainSpec domain_;
  std::vector<double> p_hat_;
};

// Weighted least-squares objective over the full domain. Measurements on the
// same clique are pooled into one weighted mean plus a constant, so cost per
// evaluation scales with the number of distinct cliques.
class Objective {
 public:
  Objective(const DomainSpec& domain, std::span<const NoisyMeasurement> measurements,
            WeightMode weights);

  std::size_t domain_cells() const { return cells_; }
  double value(std::span<const double> p) const;
  // Returns L(p) and writes grad L(p) into `grad`.
  double value_and_gradient(std::span<const double> p, std::span<double> grad) const;

 private:
  struct Group {
    std::vector<std::uint32_t> cell_map;  // full-domain cell -> clique cell
    std::vector<double> target;           // weighted mean of measured values
    double weight = 0.0;                  // total weight
    std::size_t clique_cells = 0;
  };

  void project(const Group& g, std::span<const double> p, std::vector<double>& out) const;

  std::size_t cells_ = 0;
  std::vector<Group> groups_;
  double constant_ = 0.0;
};

// Throws CapacityError above the cap, InvalidArgument for n <= 0 or a
// measurement whose length does not match its clique.
DistributionModel fit(const DomainSpec& domain,
                      std::span<const NoisyMeasurement> measurements, double n,
                      const DistributionModel* prev, const FitOptions& options = {},
                      FitStats* stats = nullptr);

Marginal model_marginal(const DistributionModel& model, const Clique& clique);

// `count` i.i.d. records drawn from p_hat / mass.
Dataset sample(const DistributionModel& model, std::size_t count, Engine& rng);

nlohmann::json model_to_json(const DistributionModel& model);

}  // namespace ppsyn

#endif  // PPSYN_ESTIMATOR_HPP_
