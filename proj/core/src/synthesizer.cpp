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

#include "ppsyn/synthesizer.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "ppsyn/errors.hpp"
#include "ppsyn/selection.hpp"

namespace ppsyn {
namespace {

class PhaseTimer {
 public:
  PhaseTimer(std::map<std::string, double>& sink, std::string phase)
      : sink_(sink), phase_(std::move(phase)), start_(std::chrono::steady_clock::now()) {}
  ~PhaseTimer() {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    sink_[phase_] += elapsed.count();
  }

 private:
  std::map<std::string, double>& sink_;
  std::string phase_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

void validate(const SynthesisConfig& config) {
  if (!(config.rho_total > 0.0) || !std::isfinite(config.rho_total)) {
    throw BudgetError("budget must be positive");
  }
  if (!(config.eta > 0.0 && config.eta < 1.0)) throw InvalidArgument("eta must lie in (0, 1)");
  if (config.rounds == 0) throw InvalidArgument("rounds must be at least 1");
  if (!(config.delta_sens > 0.0)) throw InvalidArgument("score sensitivity must be positive");
  if (config.records && *config.records == 0) {
    throw InvalidArgument("synthetic record count must be positive");
  }
}

std::vector<double> one_way_allocation(std::span<const std::size_t> cardinalities,
                                       double rho_init) {
  if (!(rho_init > 0.0)) throw InvalidArgument("rho_init must be positive");
  std::vector<double> share(cardinalities.size());
  double total = 0.0;
  for (std::size_t i = 0; i < cardinalities.size(); ++i) {
    share[i] = std::cbrt(static_cast<double>(cardinalities[i]) *
                         static_cast<double>(cardinalities[i]));
    total += share[i];
  }
  for (double& s : share) s = s / total * rho_init;
  return share;
}

std::vector<NoisyMeasurement> one_way_init(const Dataset& data, double rho_init,
                                           PrivacyAccountant& ledger, bool noiseless,
                                           Engine& rng) {
  const DomainSpec& domain = data.domain();
  std::vector<std::size_t> cards(domain.size());
  for (std::size_t a = 0; a < domain.size(); ++a) cards[a] = domain.cardinality(a);
  const std::vector<double> rhos = one_way_allocation(cards, rho_init);

  std::vector<NoisyMeasurement> out;
  out.reserve(domain.size());
  for (std::size_t a = 0; a < domain.size(); ++a) {
    ledger.charge(rhos[a], "init:" + domain.attribute(a).name);
    const NoiseSpec noise = NoiseSpec::from_rho(rhos[a]);
    Clique clique({a}, domain);
    Marginal m = compute_marginal(data, clique);
    std::vector<double> values =
        noiseless ? m.counts : gaussian_perturb(m.counts, noise.sigma(), rng);
    out.push_back({std::move(clique), std::move(values), noise.sigma(),
                   std::vector<std::size_t>(cards[a], 1)});
  }
  return out;
}

SynthesisResult synthesize(const Dataset& data, const Workload& workload,
                           const SynthesisConfig& config) {
  validate(config);
  validate_workload(workload);
  if (workload.empty()) throw InvalidArgument("workload is empty");
  if (data.n() == 0) throw InvalidArgument("input dataset has no records");
  const DomainSpec& domain = data.domain();
  if (domain.total_cells() > config.fit.domain_cap) {
    throw CapacityError("full domain has " + std::to_string(domain.total_cells()) +
                        " cells, above the cap of " +
                        std::to_string(config.fit.domain_cap));
  }
  const double n = static_cast<double>(data.n());

  SynthesisReport report;
  report.config = config;
  report.records_in = data.n();
  report.rho_init = 0.1 * config.rho_total;
  report.rho_exp = 0.1 * config.rho_total / static_cast<double>(config.rounds);

  PrivacyAccountant ledger(config.rho_total);
  std::vector<NoisyMeasurement> measurements;
  DistributionModel model;
  {
    PhaseTimer timer(report.timings, "init");
    Engine rng = make_stream(config.seed, 0, "init");
    measurements = one_way_init(data, report.rho_init, ledger, config.noiseless, rng);
    model = fit(domain, measurements, n, nullptr, config.fit, &report.init_fit);
  }

  SelectionOptions sel;
  sel.eta = config.eta;
  sel.delta_sens = config.delta_sens;
  sel.noiseless = config.noiseless;
  sel.partitioning = config.partitioning;
  sel.threads = config.threads;
  CandidatePool pool(data, workload);

  const std::size_t max_rounds = 10 * config.rounds;
  report.stop_reason = "budget_exhausted";
  for (std::size_t round = 1; ledger.remaining() >= report.rho_exp; ++round) {
    if (round > max_rounds) throw std::logic_error("round bound exceeded");
    SelectionOutcome outcome;
    {
      PhaseTimer timer(report.timings, "select");
      Engine rng = make_stream(config.seed, round, "select");
      outcome = part_sele(pool, model, ledger.remaining(), report.rho_exp, sel, rng);
    }
    if (outcome.exhausted) {
      ledger.charge(report.rho_exp, "select:" + std::to_string(round) + ":none");
      report.stop_reason = "no_feasible_candidate";
      break;
    }
    const Candidate& chosen = outcome.selected();
    const PartitionResult& pr = *chosen.partition_result;
    const std::string label = clique_label(chosen.clique, domain);
    ledger.charge(report.rho_exp, "select:" + std::to_string(round));
    ledger.charge(pr.rho, "measure:" + std::to_string(round) + ":" + label);

    RoundRecord rec;
    rec.round = round;
    rec.clique = label;
    rec.contr = chosen.contr;
    rec.rho_measure = pr.rho;
    rec.rho_select = report.rho_exp;
    rec.partition_size = pr.partition.size();
    rec.cells = chosen.clique.cell_count();
    rec.re = pr.re;
    {
      PhaseTimer timer(report.timings, "measure");
      const NoiseSpec noise = NoiseSpec::from_rho(pr.rho);
      rec.sigma = noise.sigma();
      const std::vector<double> sums =
          interval_sums(pool.true_marginal(outcome.chosen), pr.partition);
      Engine rng = make_stream(config.seed, round, "measure");
      const std::vector<double> noisy =
          config.noiseless ? sums : gaussian_perturb(sums, noise.sigma(), rng);
      Marginal expanded = expand_uniform(noisy, pr.partition);
      std::vector<std::size_t> sizes(expanded.counts.size());
      for (std::size_t c = 0; c < sizes.size(); ++c) {
        sizes[c] = pr.partition.interval_size(pr.partition.interval_of()[c]);
      }
      measurements.push_back(
          {chosen.clique, std::move(expanded.counts), noise.sigma(), std::move(sizes)});
    }
    {
      PhaseTimer timer(report.timings, "fit");
      model = fit(domain, measurements, n, &model, config.fit, &rec.fit);
    }
    for (const Candidate& c : outcome.candidates) {
      CandidateTrace ct;
      ct.clique = clique_label(c.clique, domain);
      ct.contr = c.contr;
      ct.score = c.score;
      ct.feasible = c.feasible;
      if (c.partition_result) {
        ct.rho = c.partition_result->rho;
        ct.partition_size = c.partition_result->partition.size();
      }
      rec.candidates.push_back(std::move(ct));
    }
    rec.partition = pr.partition;
    report.rounds.push_back(std::move(rec));
  }

  SynthesisResult result{Dataset(), std::move(model), {}};
  {
    PhaseTimer timer(report.timings, "sample");
    Engine rng = make_stream(config.seed, 0, "sample");
    result.synthetic = sample(result.model, config.records.value_or(data.n()), rng);
  }
  report.records_out = result.synthetic.n();
  report.ledger = ledger.log();
  report.rho_spent = ledger.spent();
  result.report = std::move(report);
  return result;
}

}  // namespace ppsyn
