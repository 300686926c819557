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

// Gaussian and exponential mechanisms, zCDP conversions, and the budget ledger.
//
// Budgets are zero-concentrated DP (rho). Gaussian noise of scale sigma on a
// sensitivity-1 query costs 1 / (2 sigma^2); an epsilon-DP exponential
// mechanism costs epsilon^2 / 8; costs compose additively.

#ifndef PPSYN_PRIVACY_HPP_
#define PPSYN_PRIVACY_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ppsyn/rng.hpp"

namespace ppsyn {

double sigma_for_rho(double rho);
double rho_for_sigma(double sigma);

// Gaussian scale together with its zCDP cost. Always constructed through one
// of the factories, so rho == 1 / (2 sigma^2) holds by construction.
class NoiseSpec {
 public:
  static NoiseSpec from_rho(double rho);
  static NoiseSpec from_sigma(double sigma);

  double sigma() const { return sigma_; }
  double rho() const { return rho_; }

 private:
  NoiseSpec(double sigma, double rho) : sigma_(sigma), rho_(rho) {}
  double sigma_;
  double rho_;
};

// v + N(0, sigma^2) i.i.d. per entry. Throws InvalidArgument if sigma <= 0.
std::vector<double> gaussian_perturb(std::span<const double> v, double sigma,
                                     Engine& rng);

double em_epsilon_for_rho(double rho);

// Index i drawn with probability proportional to
// exp(epsilon * scores[i] / (2 * sensitivity)), evaluated after subtracting
// the maximum score.
std::size_t exponential_select(std::span<const double> scores, double epsilon,
                               double sensitivity, Engine& rng);

// Highest score, lowest index on ties. Stand-in for exponential_select when
// noise is disabled for debugging.
std::size_t argmax_select(std::span<const double> scores);

// Largest rho with rho + 2 sqrt(rho ln(1/delta)) <= epsilon, by bisection.
double eps_delta_to_rho(double epsilon, double delta);

struct LedgerEntry {
  std::string label;
  double rho = 0.0;
};

// Single-writer zCDP ledger. A charge is admitted only if the running total
// stays within rho_total (plus 1e-12 slack for rounding).
class PrivacyAccountant {
 public:
  explicit PrivacyAccountant(double rho_total);

  double total() const { return rho_total_; }
  double spent() const { return rho_spent_; }
  double remaining() const;
  const std::vector<LedgerEntry>& log() const { return log_; }

  bool can_afford(double rho) const;
  // Throws BudgetError on overdraft, InvalidArgument if rho <= 0.
  void charge(double rho, std::string label);

 private:
  double rho_total_;
  double rho_spent_ = 0.0;
  std::vector<LedgerEntry> log_;
};

}  // namespace ppsyn

#endif  // PPSYN_PRIVACY_HPP_
