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

#include "ppsyn/report.hpp"

#include <cmath>

namespace ppsyn {
namespace {

// JSON has no infinity; unaffordable budgets serialize as null.
nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

nlohmann::json fit_to_json(const FitStats& s) {
  return {{"iterations", s.iterations},
          {"initial_objective", s.initial_objective},
          {"objective", s.objective},
          {"converged", s.converged}};
}

}  // namespace

nlohmann::json ledger_to_json(const std::vector<LedgerEntry>& ledger) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& e : ledger) out.push_back({{"label", e.label}, {"rho", e.rho}});
  return out;
}

nlohmann::json config_to_json(const SynthesisConfig& c) {
  nlohmann::json j = {
      {"rho_total", c.rho_total},
      {"rounds", c.rounds},
      {"eta", c.eta},
      {"seed", c.seed},
      {"score_sensitivity", c.delta_sens},
      {"noiseless", c.noiseless},
      {"partitioning", c.partitioning},
      {"records", c.records ? nlohmann::json(*c.records) : nlohmann::json(nullptr)},
      {"fit",
       {{"max_iterations", c.fit.max_iterations},
        {"tolerance", c.fit.tolerance},
        {"initial_step", c.fit.initial_step},
        {"armijo", c.fit.armijo},
        {"weights", to_string(c.fit.weights)},
        {"domain_cap", c.fit.domain_cap}}},
  };
  if (c.epsilon) {
    j["epsilon"] = *c.epsilon;
    j["delta"] = c.delta ? nlohmann::json(*c.delta) : nlohmann::json(nullptr);
    j["rho_conversion"] = "largest rho with rho + 2*sqrt(rho*ln(1/delta)) <= epsilon";
  }
  return j;
}

nlohmann::json round_trace(const RoundRecord& r) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const auto& c : r.candidates) {
    candidates.push_back({{"clique", c.clique},
                          {"contr", c.contr},
                          {"rho", finite_or_null(c.rho)},
                          {"score", c.score},
                          {"partition_size", c.partition_size},
                          {"feasible", c.feasible}});
  }
  return {{"round", r.round},
          {"clique", r.clique},
          {"contr", r.contr},
          {"rho_measure", r.rho_measure},
          {"rho_select", r.rho_select},
          {"sigma", r.sigma},
          {"partition_size", r.partition_size},
          {"cells", r.cells},
          {"re", r.re},
          {"fit", fit_to_json(r.fit)},
          {"candidates", candidates}};
}

nlohmann::json report_to_json(const SynthesisReport& report) {
  nlohmann::json rounds = nlohmann::json::array();
  for (const auto& r : report.rounds) {
    rounds.push_back({{"round", r.round},
                      {"clique", r.clique},
                      {"contr", r.contr},
                      {"rho_measure", r.rho_measure},
                      {"sigma", r.sigma},
                      {"partition_size", r.partition_size},
                      {"cells", r.cells},
                      {"re", r.re},
                      {"fit", fit_to_json(r.fit)}});
  }
  const double total = report.config.rho_total;
  return {
      {"config", config_to_json(report.config)},
      {"records_in", report.records_in},
      {"records_out", report.records_out},
      {"rho_init", report.rho_init},
      {"rho_exp", report.rho_exp},
      {"init_fit", fit_to_json(report.init_fit)},
      {"rounds_executed", report.rounds.size()},
      {"rounds", rounds},
      {"ledger", ledger_to_json(report.ledger)},
      {"rho_spent", report.rho_spent},
      {"rho_surplus", total - report.rho_spent},
      {"stop_reason", report.stop_reason},
      {"notes",
       {"partition structure (sort order, merges, cuts, RE) is computed from true "
        "counts and is not charged to the budget",
        "selection score sensitivity is a configured value, not a derived bound",
        std::string("measurement weights: ") + to_string(report.config.fit.weights),
        "workload error is reported as normalized L1"}},
  };
}

nlohmann::json timings_to_json(const SynthesisReport& report) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [phase, seconds] : report.timings) j[phase] = seconds;
  return j;
}

nlohmann::json partition_to_json(const Partition& p, const DomainSpec& domain) {
  nlohmann::json intervals = nlohmann::json::array();
  if (p.kind() == PartitionKind::kOneDim) {
    for (std::size_t r = 0; r < p.starts().size(); ++r) {
      const std::size_t end = r + 1 < p.starts().size() ? p.starts()[r + 1] : p.perm().size();
      intervals.push_back({p.starts()[r], end});
    }
  } else {
    for (const Box& b : p.boxes()) intervals.push_back({{"lo", b.lo}, {"hi", b.hi}});
  }
  nlohmann::json j = {{"clique", clique_label(p.clique(), domain)},
                      {"kind", p.kind() == PartitionKind::kOneDim ? "one-dim" : "multi-dim"},
                      {"size", p.size()},
                      {"intervals", intervals}};
  if (p.kind() == PartitionKind::kOneDim) j["perm"] = p.perm();
  return j;
}

nlohmann::json partitions_to_json(const SynthesisReport& report, const DomainSpec& domain) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : report.rounds) {
    if (!r.partition) continue;
    nlohmann::json j = partition_to_json(*r.partition, domain);
    j["round"] = r.round;
    j["re"] = r.re;
    j["rho"] = r.rho_measure;
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace ppsyn
