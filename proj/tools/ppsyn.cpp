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

// ppsyn: command-line front end.
//
//   ppsyn synth --data D.csv --schema S.json --workload W.json
//               --epsilon 1 --delta 1e-9 --seed 7 --out-dir out/
//   ppsyn eval  --true D.csv --synth out/synthetic.csv --schema S.json
//               --workload W.json --out-dir eval/
//   ppsyn eval  --sweep --true D.csv --schema S.json --workload W.json
//               --seed 7 --out-dir sweep/
//
// Exit codes: 0 success, 1 invalid input (one JSON line on stderr),
// 2 budget or capacity infeasible.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "ppsyn/domain.hpp"
#include "ppsyn/errors.hpp"
#include "ppsyn/estimator.hpp"
#include "ppsyn/evaluation.hpp"
#include "ppsyn/io.hpp"
#include "ppsyn/privacy.hpp"
#include "ppsyn/report.hpp"
#include "ppsyn/synthesizer.hpp"

#ifndef PPSYN_VERSION
#define PPSYN_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitInfeasible = 2;

int fail(int code, const std::string& kind, const std::string& message) {
  json j = {{"error", kind}, {"message", message}, {"exit_code", code}};
  std::cerr << j.dump() << '\n';
  return code;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ppsyn::InvalidArgument("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

// Options shared by synth and the eval sweep.
struct BudgetFlags {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<double> rho;
};

struct RunFlags {
  std::string schema;
  std::string workload;
  std::string gen_workload;  // "DIMS,COUNT,MAXCELLS"
  std::optional<std::uint64_t> seed;
  double eta = 0.7;
  std::size_t rounds = 16;
  std::optional<std::size_t> records;
  bool noiseless = false;
  std::size_t threads = 0;
  std::string weights = "inverse_sigma";
  std::string out_dir;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--schema", f.schema, "Schema JSON")->required();
  auto* wl = cmd->add_option("--workload", f.workload, "Workload JSON");
  auto* gen = cmd->add_option("--gen-workload", f.gen_workload,
                              "Generate a workload: DIMS,COUNT,MAXCELLS");
  wl->excludes(gen);
  cmd->add_option("--seed", f.seed, "Root seed for all randomness");
  cmd->add_option("--eta", f.eta, "Error cap as a fraction of contribution");
  cmd->add_option("--rounds", f.rounds, "T: rho_exp = 0.1 rho / T");
  cmd->add_option("--records", f.records, "Synthetic record count");
  cmd->add_flag("--noiseless", f.noiseless, "Skip all noise (debugging only)");
  cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--weights", f.weights, "inverse_sigma or inverse_variance")
      ->check(CLI::IsMember({"inverse_sigma", "inverse_variance"}));
  cmd->add_option("--out-dir", f.out_dir, "Output directory")->required();
}

void add_budget_flags(CLI::App* cmd, BudgetFlags& b, bool with_epsilon) {
  if (with_epsilon) {
    auto* eps = cmd->add_option("--epsilon", b.epsilon, "Epsilon of (epsilon, delta)-DP");
    auto* rho = cmd->add_option("--rho", b.rho, "zCDP budget");
    eps->excludes(rho);
  }
  cmd->add_option("--delta", b.delta, "Delta of (epsilon, delta)-DP");
}

ppsyn::Workload resolve_workload(const RunFlags& f, const ppsyn::DomainSpec& domain) {
  if (!f.workload.empty()) return ppsyn::load_workload(f.workload, domain);
  if (f.gen_workload.empty()) {
    throw ppsyn::InvalidArgument("one of --workload or --gen-workload is required");
  }
  std::vector<std::uint64_t> parts;
  std::stringstream ss(f.gen_workload);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ppsyn::InvalidArgument("--gen-workload expects DIMS,COUNT,MAXCELLS");
    }
  }
  if (parts.size() != 3) throw ppsyn::InvalidArgument("--gen-workload expects DIMS,COUNT,MAXCELLS");
  if (!f.seed) throw ppsyn::InvalidArgument("--seed is required");
  return ppsyn::generate_workload(domain, parts[0], parts[1], parts[2],
                                  ppsyn::derive_seed(*f.seed, 0, "workload"));
}

ppsyn::SynthesisConfig make_config(const RunFlags& f, double rho,
                                   std::optional<double> epsilon,
                                   std::optional<double> delta) {
  ppsyn::SynthesisConfig c;
  c.rho_total = rho;
  c.epsilon = epsilon;
  c.delta = delta;
  c.rounds = f.rounds;
  c.eta = f.eta;
  c.seed = *f.seed;
  c.noiseless = f.noiseless;
  c.records = f.records;
  c.threads = f.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : f.threads;
  c.fit.weights = f.weights == "inverse_variance" ? ppsyn::WeightMode::kInverseVariance
                                                  : ppsyn::WeightMode::kInverseSigma;
  ppsyn::validate(c);
  return c;
}

double rho_from_budget(const BudgetFlags& b) {
  if (b.rho) {
    if (!(*b.rho > 0.0) || !std::isfinite(*b.rho)) {
      throw ppsyn::BudgetError("budget must be positive");
    }
    return *b.rho;
  }
  if (!b.epsilon) throw ppsyn::InvalidArgument("one of --epsilon or --rho is required");
  if (!b.delta) throw ppsyn::InvalidArgument("--delta is required with --epsilon");
  if (!(*b.epsilon > 0.0)) throw ppsyn::BudgetError("budget must be positive");
  return ppsyn::eps_delta_to_rho(*b.epsilon, *b.delta);
}

json flags_echo(const RunFlags& f) {
  return {{"schema", f.schema},
          {"workload", f.workload.empty() ? json(nullptr) : json(f.workload)},
          {"gen_workload", f.gen_workload.empty() ? json(nullptr) : json(f.gen_workload)},
          {"out_dir", f.out_dir}};
}

// Everything in the manifest is a function of the flags and inputs, so two
// identical invocations write identical bytes.
json manifest(const std::string& subcommand, const std::vector<std::string>& argv,
              json inputs, json config, json outputs, std::uint64_t seed) {
  return {{"tool", "ppsyn"},
          {"version", PPSYN_VERSION},
          {"subcommand", subcommand},
          {"argv", argv},
          {"inputs", std::move(inputs)},
          {"config", std::move(config)},
          {"outputs", std::move(outputs)},
          {"seed", seed}};
}

struct SynthFlags {
  RunFlags run;
  BudgetFlags budget;
  std::string data;
  bool trace = false;
  bool dump_partitions = false;
  bool dump_model = false;
  bool baseline = false;
};

int run_synth(const SynthFlags& f, const std::vector<std::string>& argv) {
  if (!f.run.seed) throw ppsyn::InvalidArgument("--seed is required");
  const ppsyn::DomainSpec domain = ppsyn::load_schema(f.run.schema);
  const ppsyn::Dataset data = ppsyn::load_dataset(f.data, domain);
  const ppsyn::Workload workload = resolve_workload(f.run, domain);
  const double rho = rho_from_budget(f.budget);
  const auto config = make_config(f.run, rho, f.budget.rho ? std::nullopt : f.budget.epsilon,
                                  f.budget.rho ? std::nullopt : f.budget.delta);

  const ppsyn::SynthesisResult result =
      f.baseline ? ppsyn::baseline_no_partition(data, workload, config)
                 : ppsyn::synthesize(data, workload, config);

  const fs::path dir(f.run.out_dir);
  fs::create_directories(dir);
  json outputs = json::array();
  auto emit = [&](const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  };

  ppsyn::write_csv(emit("synthetic.csv"), result.synthetic);
  json report = ppsyn::report_to_json(result.report);
  report["method"] = f.baseline ? "baseline_no_partition" : "ppsyn";
  report["workload"] = ppsyn::workload_to_json(workload, domain);
  report["workload_error"] = ppsyn::workload_error(data, result.synthetic, workload);
  write_json(emit("report.json"), report);
  write_json(emit("timings.json"), ppsyn::timings_to_json(result.report));
  if (f.trace) {
    std::ofstream out(emit("trace.jsonl"), std::ios::binary);
    for (const auto& r : result.report.rounds) out << ppsyn::round_trace(r).dump() << '\n';
  }
  if (f.dump_partitions) {
    write_json(emit("partitions.json"), ppsyn::partitions_to_json(result.report, domain));
  }
  if (f.dump_model) write_json(emit("model.json"), ppsyn::model_to_json(result.model));

  outputs.push_back("manifest.json");
  json inputs = flags_echo(f.run);
  inputs["data"] = f.data;
  json cfg = ppsyn::config_to_json(config);
  cfg["baseline"] = f.baseline;
  cfg["trace"] = f.trace;
  cfg["dump_partitions"] = f.dump_partitions;
  cfg["dump_model"] = f.dump_model;
  write_json(dir / "manifest.json",
             manifest("synth", argv, inputs, cfg, outputs, *f.run.seed));
  return 0;
}

struct EvalFlags {
  RunFlags run;
  BudgetFlags budget;
  std::string truth;
  std::string synth;
  std::vector<std::string> metrics{"workload", "range"};
  std::size_t range_dims = 3;
  std::size_t range_cliques = 210;
  std::size_t range_per_clique = 1;
  std::uint64_t range_seed = 0;
  bool sweep = false;
  std::vector<double> epsilons{0.05, 0.1, 0.2, 0.4, 0.8, 1.0, 1.5, 2.0};
  bool baseline = false;
};

bool wants(const EvalFlags& f, const std::string& metric) {
  return std::find(f.metrics.begin(), f.metrics.end(), metric) != f.metrics.end();
}

std::vector<ppsyn::RangeQuery> range_queries(const EvalFlags& f,
                                             const ppsyn::DomainSpec& domain,
                                             json& meta) {
  ppsyn::RangeQueryOptions opts;
  opts.dims = f.range_dims;
  opts.n_cliques = f.range_cliques;
  opts.queries_per_clique = f.range_per_clique;
  opts.seed = f.range_seed;
  auto queries = ppsyn::generate_range_queries(domain, opts);
  meta = {{"dims", opts.dims},
          {"n_cliques", opts.n_cliques},
          {"queries_per_clique", opts.queries_per_clique},
          {"seed", opts.seed},
          {"queries", queries.size()}};
  return queries;
}

// Shortest representation that round-trips.
std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

int run_eval(const EvalFlags& f, const std::vector<std::string>& argv) {
  const ppsyn::DomainSpec domain = ppsyn::load_schema(f.run.schema);
  const ppsyn::Dataset truth = ppsyn::load_dataset(f.truth, domain);
  for (const auto& m : f.metrics) {
    if (m != "workload" && m != "range") throw ppsyn::InvalidArgument("unknown metric: " + m);
  }
  if (wants(f, "range") && f.range_dims > domain.size()) {
    throw ppsyn::InvalidArgument("--range-dims exceeds the attribute count");
  }
  std::optional<ppsyn::Workload> workload;
  if (wants(f, "workload") || f.sweep) workload = resolve_workload(f.run, domain);
  json range_meta;
  std::vector<ppsyn::RangeQuery> queries;
  if (wants(f, "range")) queries = range_queries(f, domain, range_meta);

  const fs::path dir(f.run.out_dir);
  json outputs = json::array();
  json inputs = flags_echo(f.run);
  inputs["true"] = f.truth;
  json cfg = {{"metrics", f.metrics}, {"sweep", f.sweep}};
  if (wants(f, "range")) cfg["range_queries"] = range_meta;

  if (!f.sweep) {
    if (f.synth.empty()) throw ppsyn::InvalidArgument("--synth is required unless --sweep");
    const ppsyn::Dataset synth = ppsyn::load_dataset(f.synth, domain);
    inputs["synth"] = f.synth;
    json result = {{"records_true", truth.n()}, {"records_synth", synth.n()}};
    if (workload) {
      const auto b = ppsyn::workload_error_breakdown(truth, synth, *workload);
      json per = json::array();
      for (std::size_t i = 0; i < b.per_marginal.size(); ++i) {
        per.push_back({{"clique", ppsyn::clique_label(workload->entries[i].clique, domain)},
                       {"error", b.per_marginal[i]}});
      }
      result["normalized_l1_workload_error"] = {{"value", b.mean}, {"per_marginal", per}};
    }
    if (!queries.empty()) {
      result["range_query_mse"] = {{"value", ppsyn::range_query_error(truth, synth, queries)},
                                   {"query_set", range_meta}};
    }
    fs::create_directories(dir);
    write_json(dir / "evaluation.json", result);
    outputs.push_back("evaluation.json");
  } else {
    if (!f.run.seed) throw ppsyn::InvalidArgument("--seed is required for --sweep");
    if (f.epsilons.empty()) throw ppsyn::InvalidArgument("--epsilons is empty");
    const double delta = f.budget.delta.value_or(1e-9);
    std::ostringstream csv;
    csv << "epsilon,delta,rho,method,workload_error,range_query_mse,rounds\n";
    json points = json::array();
    for (double eps : f.epsilons) {
      const double rho = ppsyn::eps_delta_to_rho(eps, delta);
      const auto config = make_config(f.run, rho, eps, delta);
      std::vector<std::pair<std::string, ppsyn::SynthesisResult>> runs;
      runs.emplace_back("ppsyn", ppsyn::synthesize(truth, *workload, config));
      if (f.baseline) {
        runs.emplace_back("baseline_no_partition",
                          ppsyn::baseline_no_partition(truth, *workload, config));
      }
      for (const auto& [method, r] : runs) {
        const double we = ppsyn::workload_error(truth, r.synthetic, *workload);
        const bool has_range = !queries.empty();
        const double re = has_range ? ppsyn::range_query_error(truth, r.synthetic, queries) : 0.0;
        csv << format_double(eps) << ',' << format_double(delta) << ',' << format_double(rho)
            << ',' << method << ',' << format_double(we) << ','
            << (has_range ? format_double(re) : "") << ',' << r.report.rounds.size() << '\n';
        points.push_back({{"epsilon", eps},
                          {"rho", rho},
                          {"method", method},
                          {"workload_error", we},
                          {"range_query_mse", has_range ? json(re) : json(nullptr)},
                          {"rounds", r.report.rounds.size()}});
      }
    }
    fs::create_directories(dir);
    {
      std::ofstream out(dir / "sweep.csv", std::ios::binary);
      out << csv.str();
    }
    write_json(dir / "evaluation.json", {{"sweep", points}});
    outputs.push_back("sweep.csv");
    outputs.push_back("evaluation.json");
    cfg["epsilons"] = f.epsilons;
    cfg["delta"] = delta;
    cfg["baseline"] = f.baseline;
    cfg["eta"] = f.run.eta;
    cfg["rounds"] = f.run.rounds;
  }
  outputs.push_back("manifest.json");
  write_json(dir / "manifest.json",
             manifest("eval", argv, inputs, cfg, outputs, f.run.seed.value_or(0)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private synthetic data from marginal measurements"};
  app.set_version_flag("--version", PPSYN_VERSION);
  app.require_subcommand(1);

  SynthFlags sf;
  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("--data", sf.data, "Input CSV")->required();
  add_run_flags(synth, sf.run);
  add_budget_flags(synth, sf.budget, true);
  synth->add_flag("--trace", sf.trace, "Write trace.jsonl with per-round candidates");
  synth->add_flag("--dump-partitions", sf.dump_partitions, "Write partitions.json");
  synth->add_flag("--dump-model", sf.dump_model, "Write model.json");
  synth->add_flag("--baseline", sf.baseline, "Disable partitioning (ablation)");

  EvalFlags ef;
  CLI::App* eval = app.add_subcommand("eval", "Score synthetic data against the original");
  eval->add_option("--true", ef.truth, "Original CSV")->required();
  eval->add_option("--synth", ef.synth, "Synthetic CSV");
  add_run_flags(eval, ef.run);
  add_budget_flags(eval, ef.budget, false);
  eval->add_option("--metrics", ef.metrics, "workload and/or range")->delimiter(',');
  eval->add_option("--range-dims", ef.range_dims, "Attributes per range query");
  eval->add_option("--range-cliques", ef.range_cliques, "Attribute combinations");
  eval->add_option("--range-per-clique", ef.range_per_clique, "Queries per combination");
  eval->add_option("--range-seed", ef.range_seed, "Seed of the query set");
  eval->add_flag("--sweep", ef.sweep, "Synthesize at each epsilon and score");
  eval->add_option("--epsilons", ef.epsilons, "Sweep points")->delimiter(',');
  eval->add_flag("--baseline", ef.baseline, "Also run the no-partition baseline in sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kExitInvalid, "usage", e.what());
  }

  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    if (synth->parsed()) return run_synth(sf, args);
    return run_eval(ef, args);
  } catch (const ppsyn::BudgetError& e) {
    return fail(kExitInfeasible, "budget", e.what());
  } catch (const ppsyn::CapacityError& e) {
    return fail(kExitInfeasible, "capacity", e.what());
  } catch (const json::exception& e) {
    return fail(kExitInvalid, "invalid_json", e.what());
  } catch (const std::exception& e) {
    return fail(kExitInvalid, "invalid_input", e.what());
  }
}
