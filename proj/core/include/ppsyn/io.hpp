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

// File formats: JSON schema, RFC-4180 CSV datasets, JSON workloads.
//
//   schema   {"attributes":[{"name":..., "values":[...], "ordinal":bool}]}
//   workload {"cliques":[["age","sex"], ...], "weights":[...]}   weights optional

#ifndef PPSYN_IO_HPP_
#define PPSYN_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "nlohmann/json.hpp"
#include "ppsyn/domain.hpp"

namespace ppsyn {

DomainSpec parse_schema(const nlohmann::json& j);
DomainSpec load_schema(const std::filesystem::path& path);
nlohmann::json schema_to_json(const DomainSpec& domain);

// Splits RFC-4180 CSV text into records. Quoted fields may contain commas,
// doubled quotes and line breaks. Throws InvalidArgument on an unterminated
// quote or stray characters after a closing quote.
std::vector<std::vector<std::string>> parse_csv(std::istream& in);

// Maps labels to value indices through the schema dictionaries. Errors name
// the offending record (1-based, header excluded) and column.
Dataset parse_dataset(std::istream& csv, const DomainSpec& domain);
Dataset load_dataset(const std::filesystem::path& csv_path,
                     const DomainSpec& domain);
Dataset load_dataset(const std::filesystem::path& csv_path,
                     const std::filesystem::path& schema_path);

// Writes the dataset with a header row, using value labels where the schema
// has them. Output is LF-terminated and quoted only where required.
void write_csv(std::ostream& out, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

Workload parse_workload(const nlohmann::json& j, const DomainSpec& domain);
Workload load_workload(const std::filesystem::path& path,
                       const DomainSpec& domain);
nlohmann::json workload_to_json(const Workload& w, const DomainSpec& domain);

}  // namespace ppsyn

#endif  // PPSYN_IO_HPP_
