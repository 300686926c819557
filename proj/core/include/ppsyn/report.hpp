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

// JSON views of synthesis results: the report, ledger, per-round trace and
// partition dumps. Everything here is a pure function of its input, so equal
// runs serialize to equal bytes; wall-clock timings are kept separate.

#ifndef PPSYN_REPORT_HPP_
#define PPSYN_REPORT_HPP_

#include <vector>

#include "nlohmann/json.hpp"
#include "ppsyn/partition.hpp"
#include "ppsyn/privacy.hpp"
#include "ppsyn/synthesizer.hpp"

namespace ppsyn {

nlohmann::json ledger_to_json(const std::vector<LedgerEntry>& ledger);
nlohmann::json config_to_json(const SynthesisConfig& config);
nlohmann::json report_to_json(const SynthesisReport& report);
nlohmann::json timings_to_json(const SynthesisReport& report);

// One object per round: candidate scores, chosen clique, rho, |P|, RE.
nlohmann::json round_trace(const RoundRecord& round);

nlohmann::json partition_to_json(const Partition& p, const DomainSpec& domain);
nlohmann::json partitions_to_json(const SynthesisReport& report, const DomainSpec& domain);

}  // namespace ppsyn

#endif  // PPSYN_REPORT_HPP_
