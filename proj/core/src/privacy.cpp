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

#include "ppsyn/privacy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

constexpr double kOverdraftSlack = 1e-12;

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InvalidArgument(std::string(what) + " must be positive and finite");
  }
}

}  // namespace

double sigma_for_rho(double rho) {
  require_positive(rho, "rho");
  return 1.0 / std::sqrt(2.0 * rho);
}

double rho_for_sigma(double sigma) {
  require_positive(sigma, "sigma");
  return 1.0 / (2.0 * sigma * sigma);
}

NoiseSpec NoiseSpec::from_rho(double rho) {
  return NoiseSpec(sigma_for_rho(rho), rho);
}

NoiseSpec NoiseSpec::from_sigma(double sigma) {
  return NoiseSpec(sigma, rho_for_sigma(sigma));
}

std::vector<double> gaussian_perturb(std::span<const double> v, double sigma,
                                     Engine& rng) {
  require_positive(sigma, "sigma");
  std::vector<double> out(v.begin(), v.end());
  for (double& x : out) x += sigma * standard_normal(rng);
  return out;
}

double em_epsilon_for_rho(double rho) {
  require_positive(rho, "rho");
  return std::sqrt(8.0 * rho);
}

std::size_t exponential_select(std::span<const double> scores, double epsilon,
                               double sensitivity, Engine& rng) {
  if (scores.empty()) throw InvalidArgument("exponential_select: no candidates");
  require_positive(epsilon, "epsilon");
  require_positive(sensitivity, "sensitivity");
  const double top = *std::max_element(scores.begin(), scores.end());
  const double scale = epsilon / (2.0 * sensitivity);
  std::vector<double> cumulative(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    total += std::exp(scale * (scores[i] - top));
    cumulative[i] = total;
  }
  const double u = uniform01(rng) * total;
  auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  if (it == cumulative.end()) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

std::size_t argmax_select(std::span<const double> scores) {
  if (scores.empty()) throw InvalidArgument("argmax_select: no candidates");
  return static_cast<std::size_t>(
      std::max_element(scores.begin(), scores.end()) - scores.begin());
}

double eps_delta_to_rho(double epsilon, double delta) {
  require_positive(epsilon, "epsilon");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("delta must lie in (0, 1)");
  }
  const double log_inv_delta = std::log(1.0 / delta);
  auto bound = [&](double rho) {
    return rho + 2.0 * std::sqrt(rho * log_inv_delta);
  };
  // bound(epsilon) >= epsilon, so the root lies in [0, epsilon].
  double lo = 0.0;
  double hi = epsilon;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (bound(mid) <= epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

PrivacyAccountant::PrivacyAccountant(double rho_total) : rho_total_(rho_total) {
  require_positive(rho_total, "budget");
}

double PrivacyAccountant::remaining() const {
  return std::max(0.0, rho_total_ - rho_spent_);
}

bool PrivacyAccountant::can_afford(double rho) const {
  return rho_spent_ + rho <= rho_total_ + kOverdraftSlack;
}

void PrivacyAccountant::charge(double rho, std::string label) {
  require_positive(rho, "charge");
  if (!can_afford(rho)) {
    throw BudgetError("overdraft: charge '" + label + "' of " +
                      std::to_string(rho) + " exceeds remaining " +
                      std::to_string(remaining()));
  }
  rho_spent_ += rho;
  log_.push_back({std::move(label), rho});
}

}  // namespace ppsyn
